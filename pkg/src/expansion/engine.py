"""
Recursive computation of the trajectory expansion

    x(t) ~ x* + U0 t + sum_n zeta_n(t) e^{-mu_n t},

where each zeta_n is the polynomial solution of

    zeta_n' - mu_n zeta_n = q_n(x*, t) + sum_{m>=1} Q_{k,m}(x*, t)(zeta_{j1}, ..., zeta_{jm})

over the resonances mu_k + mu_{j1} + ... + mu_{jm} = mu_n.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import DerivativeOrderError, FieldSchemaError, IndexOutOfRangeError, InvalidInputError
from .field import DerivativeTensor, FieldExpansion, apply_tensor, q_tensor_poly
from .polyvec import (
    PolyVec,
    as_scalar,
    is_exact_value,
    poly_add,
    poly_eval,
    resolvent_residual,
    resolvent_solve,
)
from .semigroup import Decomposition, Semigroup, bounded_decompositions, decompositions, s_index

logger = logging.getLogger("lagexp.expansion.engine")

FLOAT_RESIDUAL_RELATIVE = 1e-10

TensorCache = Dict[Tuple[int, int], DerivativeTensor]


@dataclass(frozen=True)
class TrajectoryExpansion:
    """Computed limit point, mean flow and polynomial coefficients zeta_1..zeta_N"""
    x_star: Tuple
    mean_flow: Tuple
    zetas: Dict[int, PolyVec]
    sg: Semigroup
    N: int
    exact: bool
    residuals: Dict[int, float] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.x_star)

    def zeta(self, n: int) -> PolyVec:
        if n < 1 or n > self.N:
            raise IndexOutOfRangeError(f"zeta_{n} outside computed range 1..{self.N}")
        return self.zetas[n]

    def is_time_independent(self) -> bool:
        return all(z.degree == 0 for z in self.zetas.values())


def _is_exact_run(fe: FieldExpansion, x_star: Sequence) -> bool:
    return fe.is_exact and all(is_exact_value(as_scalar(c)) for c in x_star)


def _q_at_point(fe: FieldExpansion, n: int, point: Sequence, exact: bool) -> PolyVec:
    """q_n(x*, t) as a polynomial in t"""
    rows = []
    for coeff in fe.term(n).time_coeffs:
        value = coeff.value(point)
        rows.append([as_scalar(c) if exact else float(c) for c in value])
    return PolyVec.from_coeffs(rows, fe.dim)


def _tensor(fe: FieldExpansion, k: int, m: int, point: Sequence, cache: TensorCache) -> DerivativeTensor:
    key = (k, m)
    if key not in cache:
        cache[key] = q_tensor_poly(fe, k, m, point)
    return cache[key]


def assemble_rhs(fe: FieldExpansion, zetas: Dict[int, PolyVec], n: int, x_star: Sequence,
                 bounds: Optional[Tuple[int, int, int]] = None,
                 cache: Optional[TensorCache] = None) -> PolyVec:
    """
    Right-hand side P_n(t) of the zeta_n equation.

    Args:
        fe: velocity expansion (zero-mean part is used)
        zetas: already computed zeta_j for j < n
        n: target index
        x_star: limit point
        bounds: optional (M, K, J) loose bounds on m, k and j_i; by default the
            minimal resonance set is used
        cache: optional tensor cache keyed by (k, m)

    Returns:
        P_n as a polynomial in t
    """
    exact = _is_exact_run(fe, x_star)
    point = tuple(as_scalar(c) for c in x_star) if exact else tuple(float(c) for c in x_star)
    cache = {} if cache is None else cache
    if bounds is None:
        terms: List[Decomposition] = decompositions(fe.sg, n)
    else:
        terms = bounded_decompositions(fe.sg, n, *bounds)

    total = PolyVec.zero(fe.dim, exact)
    for dec in terms:
        if dec.m == 0:
            # The bare term: no tensor, just q_n(x*, t).
            if fe.has_term(n):
                total = poly_add(total, _q_at_point(fe, n, point, exact))
            continue
        if not fe.has_term(dec.k):
            continue
        args = [zetas[j] for j in dec.js]
        if any(arg.is_zero() for arg in args):
            continue
        tensor = _tensor(fe, dec.k, dec.m, point, cache)
        if tensor.is_zero():
            continue
        total = poly_add(total, apply_tensor(tensor, args))
    return total


def _required_order(fe: FieldExpansion, N: int) -> int:
    """
    Highest tensor order m the recursion to N requests.

    Raises DerivativeOrderError when a stored coefficient cannot provide a
    requested order; polynomial coefficients provide every order past their
    degree as zero.
    """
    needed = 0
    for n in range(1, N + 1):
        for dec in decompositions(fe.sg, n):
            if dec.m == 0 or not fe.has_term(dec.k):
                continue
            needed = max(needed, dec.m)
            for coeff in fe.term(dec.k).time_coeffs:
                if not coeff.supports_derivative(dec.m):
                    raise DerivativeOrderError(
                        f"Order {N} needs derivative tensors up to m={dec.m} of q_{dec.k}, "
                        f"its coefficients provide m_max={coeff.m_max}"
                    )
    return needed


def compute_expansion(fe: FieldExpansion, x_star: Sequence, N: int) -> TrajectoryExpansion:
    """
    Compute zeta_1..zeta_N for the given limit point.

    The recursion runs on the zero-mean part of ``fe``; its mean flow is
    carried into the result and contributes the U0 t drift on evaluation.
    """
    if len(x_star) != fe.dim:
        raise InvalidInputError(f"x* has {len(x_star)} components, field is {fe.dim}-d")
    if not isinstance(N, int) or N < 0:
        raise IndexOutOfRangeError(f"Expansion order must be a non-negative integer, got {N!r}")
    if N > fe.sg.n_cap:
        raise IndexOutOfRangeError(f"Order {N} exceeds the semigroup cap {fe.sg.n_cap}")
    if N > fe.order:
        raise IndexOutOfRangeError(f"Order {N} exceeds the {fe.order} known field terms")
    needed = _required_order(fe, N)

    exact = _is_exact_run(fe, x_star)
    point = tuple(as_scalar(c) for c in x_star) if exact else tuple(float(c) for c in x_star)
    logger.info(f"Computing expansion to order {N} in {'exact' if exact else 'float'} mode "
                f"(tensors up to m={needed}, s_N={s_index(fe.sg, N) if N else 0})")

    cache: TensorCache = {}
    zetas: Dict[int, PolyVec] = {}
    residuals: Dict[int, float] = {}
    for n in range(1, N + 1):
        mu_n = fe.sg.mu(n) if exact else float(fe.sg.mu(n))
        rhs = assemble_rhs(fe, zetas, n, point, cache=cache)
        zeta = resolvent_solve(mu_n, rhs)
        residual = resolvent_residual(mu_n, zeta, rhs)
        if exact:
            if not residual.is_zero():
                raise ArithmeticError(f"Exact residual for zeta_{n} is not zero")
            residuals[n] = 0.0
        else:
            scale = max(rhs.max_abs(), 1e-300)
            residuals[n] = residual.max_abs() / scale if not rhs.is_zero() else residual.max_abs()
            if residuals[n] > FLOAT_RESIDUAL_RELATIVE:
                logger.warning(f"zeta_{n} residual {residuals[n]:.3e} above {FLOAT_RESIDUAL_RELATIVE:g}")
        zetas[n] = zeta
        logger.debug(f"zeta_{n}: degree {zeta.degree}, rhs degree {rhs.degree}")

    return TrajectoryExpansion(
        x_star=point,
        mean_flow=tuple(fe.mean_flow),
        zetas=zetas,
        sg=fe.sg,
        N=N,
        exact=exact,
        residuals=residuals,
    )


def residual(te: TrajectoryExpansion, fe: FieldExpansion, n: int) -> PolyVec:
    """zeta_n' - mu_n zeta_n - P_n, recomputed from the stored coefficients"""
    zetas = {j: te.zeta(j) for j in range(1, n)}
    rhs = assemble_rhs(fe, zetas, n, te.x_star)
    mu_n = fe.sg.mu(n) if te.exact else float(fe.sg.mu(n))
    return resolvent_residual(mu_n, te.zeta(n), rhs)


def evaluate_expansion(te: TrajectoryExpansion, t: float, N: int) -> np.ndarray:
    """x* + U0 t + sum_{n<=N} zeta_n(t) e^{-mu_n t}, in float arithmetic"""
    if N < 0 or N > te.N:
        raise IndexOutOfRangeError(f"Truncation {N} outside 0..{te.N}")
    t = float(t)
    total = np.array([float(c) for c in te.x_star]) + np.array([float(u) for u in te.mean_flow]) * t
    for n in range(1, N + 1):
        decay = math.exp(-float(te.sg.mu(n)) * t)
        if decay == 0.0:
            break
        total = total + np.array([float(c) for c in poly_eval(te.zetas[n], t)]) * decay
    return total


def galilean_compose(v_expansion: FieldExpansion, U0: Sequence) -> FieldExpansion:
    """
    General-mean field u(x,t) = U0 + v(x - U0 t, t) from a zero-mean expansion v.
    """
    if not v_expansion.has_zero_mean():
        raise FieldSchemaError("Galilean composition needs a zero-mean field expansion")
    if len(U0) != v_expansion.dim:
        raise InvalidInputError(f"Mean flow must have {v_expansion.dim} components")
    return v_expansion.with_mean_flow(U0)


def perturb_zeta(te: TrajectoryExpansion, n: int, delta: float) -> TrajectoryExpansion:
    """Copy of ``te`` with delta added to every component of zeta_n's constant term"""
    zeta = te.zeta(n)
    shift = PolyVec.constant([delta] * te.dim)
    zetas = dict(te.zetas)
    zetas[n] = poly_add(zeta, shift)
    logger.info(f"Injected fault of {delta:g} into zeta_{n}")
    return replace(te, zetas=zetas, exact=te.exact and is_exact_value(as_scalar(delta)))


def truncate(te: TrajectoryExpansion, N: int) -> TrajectoryExpansion:
    if N < 0 or N > te.N:
        raise IndexOutOfRangeError(f"Truncation {N} outside 0..{te.N}")
    return replace(te, N=N, zetas={n: z for n, z in te.zetas.items() if n <= N},
                   residuals={n: r for n, r in te.residuals.items() if n <= N})


def scale_limit_point(te: TrajectoryExpansion) -> float:
    """max(1, |x*|), the scale used for noise floors"""
    return max(1.0, float(np.linalg.norm([float(c) for c in te.x_star])))
