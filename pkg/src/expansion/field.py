"""
Velocity expansions u(x,t) ~ U0 + sum_n q_n(x - U0 t, t) e^{-mu_n t} and the
point derivative tensors Q_{n,m}(x*, t) = (1/m!) D_x^m q_n(x*, t).

Two spatial coefficient representations are provided: real trigonometric
polynomials on a periodic box (the Navier-Stokes setting) and multivariate
polynomials (test fixtures with closed-form trajectories).
"""
import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import (
    DerivativeOrderError,
    FieldSchemaError,
    IndexOutOfRangeError,
    InvalidInputError,
    MissingTermError,
)
from .polyvec import PolyVec, as_scalar, is_exact_value
from .semigroup import Semigroup

logger = logging.getLogger("lagexp.expansion.field")

DEFAULT_M_MAX = 6
DIVERGENCE_RELATIVE_TOL = 1e-12


def _multi_index_counts(combo: Sequence[int], dim: int) -> Tuple[int, ...]:
    counts = [0] * dim
    for axis in combo:
        counts[axis] += 1
    return tuple(counts)


def _fill_symmetric(dim: int, m: int, entry: Callable[[Tuple[int, ...]], np.ndarray],
                    dtype) -> np.ndarray:
    """
    Build a (d,) + (d,)*m array whose trailing m axes are symmetric.

    ``entry`` is called once per sorted axis combination and the value is
    copied to every permutation, so symmetry holds bit for bit.
    """
    tensor = np.zeros((dim,) + (dim,) * m, dtype=dtype)
    if m == 0:
        tensor[...] = entry(())
        return tensor
    for combo in itertools.combinations_with_replacement(range(dim), m):
        value = entry(combo)
        for perm in set(itertools.permutations(combo)):
            tensor[(slice(None),) + perm] = value
    return tensor


class SpatialField(ABC):
    """A smooth vector field on R^d with exact point derivatives"""

    def __init__(self, dim: int, m_max: int = DEFAULT_M_MAX):
        if dim not in (1, 2, 3):
            raise InvalidInputError(f"Spatial dimension must be 1, 2 or 3, got {dim}")
        self.dim = dim
        self.m_max = m_max

    @property
    @abstractmethod
    def is_exact(self) -> bool:
        """True when values and derivatives at rational points are exact"""
        pass

    @abstractmethod
    def value(self, x: Sequence) -> np.ndarray:
        """Evaluate the field at x"""
        pass

    @abstractmethod
    def _derivative(self, x: Sequence, m: int) -> np.ndarray:
        pass

    def derivative(self, x: Sequence, m: int) -> np.ndarray:
        """
        m-th derivative tensor at x, shape (d,) + (d,)*m, symmetric in the
        last m axes; m = 0 gives the value.
        """
        if m < 0:
            raise InvalidInputError(f"Derivative order must be non-negative, got {m}")
        if not self.supports_derivative(m):
            raise DerivativeOrderError(f"Derivative order {m} exceeds m_max={self.m_max}")
        if len(x) != self.dim:
            raise InvalidInputError(f"Point {x!r} does not have dimension {self.dim}")
        return self._derivative(x, m)

    def supports_derivative(self, m: int) -> bool:
        return m <= self.m_max

    def is_zero(self) -> bool:
        return False


class TrigField(SpatialField):
    """
    Real trigonometric polynomial vector field on the box with periods L:

        f(x) = c(0) + sum_{kappa in half-space} 2 Re(c(kappa) e^{i theta_kappa(x)}),
        theta_kappa(x) = sum_a 2 pi kappa_a x_a / L_a.

    Coefficients for a negative half-space kappa are conjugated into the
    positive one on ingestion.
    """

    def __init__(self, dim: int, periods: Sequence[float],
                 modes: Mapping[Tuple[int, ...], Sequence[complex]],
                 divergence_free: bool = False, m_max: int = DEFAULT_M_MAX):
        super().__init__(dim, m_max)
        if len(periods) != dim or any(float(p) <= 0 for p in periods):
            raise FieldSchemaError(f"Need {dim} positive periods, got {periods!r}")
        self.periods = tuple(float(p) for p in periods)
        self.divergence_free = divergence_free

        canonical: Dict[Tuple[int, ...], np.ndarray] = {}
        for kappa, coeff in modes.items():
            kappa = tuple(int(k) for k in kappa)
            vec = np.asarray(coeff, dtype=complex)
            if len(kappa) != dim or vec.shape != (dim,):
                raise FieldSchemaError(f"Mode {kappa} does not match dimension {dim}")
            if not any(kappa):
                if np.any(vec.imag != 0):
                    raise FieldSchemaError("The kappa=0 coefficient must be real")
            elif next(k for k in kappa if k != 0) < 0:
                kappa = tuple(-k for k in kappa)
                vec = np.conj(vec)
            if kappa in canonical:
                raise FieldSchemaError(f"Duplicate Fourier mode {kappa} (or its conjugate)")
            canonical[kappa] = vec

        self.mean_vector = canonical.pop((0,) * dim, np.zeros(dim, dtype=complex)).real.copy()
        keys = sorted(canonical)
        self.wavevectors = np.array(keys, dtype=float).reshape(len(keys), dim)
        self.coefficients = np.array([canonical[k] for k in keys], dtype=complex).reshape(len(keys), dim)
        self.omega = 2.0 * np.pi * self.wavevectors / np.array(self.periods)

        if divergence_free:
            self._check_divergence_free()

    def _check_divergence_free(self) -> None:
        for omega, coeff in zip(self.omega, self.coefficients):
            flux = abs(np.dot(omega, coeff))
            scale = np.linalg.norm(omega) * np.linalg.norm(coeff)
            if flux > DIVERGENCE_RELATIVE_TOL * max(scale, 1.0):
                raise FieldSchemaError(
                    f"Mode with wave vector {omega} is not divergence-free (|k.c|={flux:.3e})"
                )

    @property
    def is_exact(self) -> bool:
        return False

    @property
    def modes(self) -> Dict[Tuple[int, ...], np.ndarray]:
        table = {tuple(int(k) for k in kappa): coeff.copy()
                 for kappa, coeff in zip(self.wavevectors, self.coefficients)}
        if np.any(self.mean_vector != 0):
            table[(0,) * self.dim] = self.mean_vector.astype(complex)
        return table

    def mean(self) -> np.ndarray:
        """Average of the field over one period box"""
        return self.mean_vector.copy()

    def is_zero_mean(self) -> bool:
        return not np.any(self.mean_vector != 0)

    def is_zero(self) -> bool:
        return self.is_zero_mean() and not np.any(self.coefficients != 0)

    def _phases(self, x: Sequence) -> np.ndarray:
        point = np.asarray([float(c) for c in x])
        return np.exp(1j * (self.omega @ point))

    def value(self, x: Sequence) -> np.ndarray:
        phases = self._phases(x)
        return self.mean_vector + 2.0 * np.real(phases @ self.coefficients)

    def _derivative(self, x: Sequence, m: int) -> np.ndarray:
        if m == 0:
            return self.value(x)
        weights = (1j ** m) * self._phases(x)

        def entry(combo):
            factor = np.prod(self.omega[:, list(combo)], axis=1)
            return 2.0 * np.real((weights * factor) @ self.coefficients)

        return _fill_symmetric(self.dim, m, entry, float)

    def divergence(self, x: Sequence) -> float:
        return float(np.trace(self._derivative(x, 1)))


class PolyField(SpatialField):
    """
    Multivariate polynomial vector field sum_beta c_beta x^beta; exact when
    all coefficients are rational. A test-fixture representation.
    """

    def __init__(self, dim: int, monomials: Mapping[Tuple[int, ...], Sequence],
                 m_max: int = DEFAULT_M_MAX):
        super().__init__(dim, m_max)
        terms: Dict[Tuple[int, ...], Tuple] = {}
        for powers, coeff in monomials.items():
            powers = tuple(int(p) for p in powers)
            if len(powers) != dim or any(p < 0 for p in powers):
                raise FieldSchemaError(f"Monomial powers {powers} invalid for dimension {dim}")
            vec = tuple(as_scalar(c) for c in coeff)
            if len(vec) != dim:
                raise FieldSchemaError(f"Monomial coefficient {coeff!r} does not have dimension {dim}")
            if powers in terms:
                terms[powers] = tuple(a + b for a, b in zip(terms[powers], vec))
            else:
                terms[powers] = vec
        self.monomials = {p: v for p, v in terms.items() if any(c != 0 for c in v)}

    @property
    def is_exact(self) -> bool:
        return all(is_exact_value(c) for vec in self.monomials.values() for c in vec)

    @property
    def degree(self) -> int:
        return max((sum(p) for p in self.monomials), default=0)

    def supports_derivative(self, m: int) -> bool:
        # past the degree every partial vanishes identically
        return m <= self.m_max or m > self.degree

    def is_zero(self) -> bool:
        return not self.monomials

    def _point(self, x: Sequence) -> Tuple:
        point = tuple(as_scalar(c) for c in x)
        if not (self.is_exact and all(is_exact_value(c) for c in point)):
            point = tuple(float(c) for c in point)
        return point

    def _dtype(self, point: Tuple):
        return object if all(is_exact_value(c) for c in point) else float

    def _partial(self, point: Tuple, counts: Tuple[int, ...]) -> np.ndarray:
        exact = self._dtype(point) is object
        total = [Fraction(0) if exact else 0.0] * self.dim
        for powers, coeff in self.monomials.items():
            if any(p < a for p, a in zip(powers, counts)):
                continue
            factor = Fraction(1) if exact else 1.0
            for p, a, xa in zip(powers, counts, point):
                factor = factor * (math.factorial(p) // math.factorial(p - a)) * xa ** (p - a)
            for axis in range(self.dim):
                total[axis] = total[axis] + factor * coeff[axis]
        if not exact:
            total = [float(c) for c in total]
        return np.array(total, dtype=object if exact else float)

    def value(self, x: Sequence) -> np.ndarray:
        point = self._point(x)
        return self._partial(point, (0,) * self.dim)

    def _derivative(self, x: Sequence, m: int) -> np.ndarray:
        point = self._point(x)
        return _fill_symmetric(
            self.dim, m,
            lambda combo: self._partial(point, _multi_index_counts(combo, self.dim)),
            self._dtype(point),
        )


@dataclass(frozen=True)
class ExpansionTerm:
    """q_n(x,t) = sum_k t^k q_{n,k}(x)"""
    n: int
    time_coeffs: Tuple[SpatialField, ...]

    @property
    def degree(self) -> int:
        return len(self.time_coeffs) - 1

    def value(self, x: Sequence, t) -> np.ndarray:
        result = None
        for coeff in reversed(self.time_coeffs):
            v = coeff.value(x)
            result = v if result is None else result * t + v
        return result


@dataclass(frozen=True)
class FieldExpansion:
    """
    A velocity expansion with terms indexed by the semigroup.

    ``order`` is the number of terms the expansion is known to: absent
    n <= order are zero terms, and truncations beyond order are refused.
    """
    dim: int
    sg: Semigroup
    terms: Dict[int, ExpansionTerm]
    order: int
    kind: str = "poly"
    periods: Optional[Tuple[float, ...]] = None
    mean_flow: Tuple = ()

    def __post_init__(self):
        if self.kind not in ("poly", "trig"):
            raise FieldSchemaError(f"Unknown field type '{self.kind}'")
        if self.order < 0 or self.order > self.sg.n_cap:
            raise FieldSchemaError(f"Expansion order {self.order} outside 0..{self.sg.n_cap}")
        if not self.mean_flow:
            object.__setattr__(self, "mean_flow", tuple([Fraction(0)] * self.dim))
        elif len(self.mean_flow) != self.dim:
            raise FieldSchemaError(f"Mean flow must have {self.dim} components")
        for n, term in self.terms.items():
            if n != term.n:
                raise FieldSchemaError(f"Term stored under {n} claims index {term.n}")
            if n < 1 or n > self.order:
                raise FieldSchemaError(f"Term index {n} outside 1..{self.order}")
            if not term.time_coeffs:
                raise FieldSchemaError(f"Term {n} has no time coefficients")
            for coeff in term.time_coeffs:
                if coeff.dim != self.dim:
                    raise FieldSchemaError(f"Term {n} has a coefficient of dimension {coeff.dim}")
                if self.kind == "trig":
                    if not isinstance(coeff, TrigField):
                        raise FieldSchemaError(f"Term {n} mixes polynomial fields into a trig expansion")
                    if not coeff.is_zero_mean():
                        raise FieldSchemaError(f"Term {n} has a nonzero mean; move it into mean_flow")
                elif not isinstance(coeff, PolyField):
                    raise FieldSchemaError(f"Term {n} mixes trig fields into a poly expansion")
        first = self.terms.get(1)
        if first is not None and first.degree > 0 and any(not c.is_zero() for c in first.time_coeffs[1:]):
            raise FieldSchemaError("q_1 must be independent of t")

    def has_term(self, n: int) -> bool:
        return n in self.terms

    def term(self, n: int) -> ExpansionTerm:
        if n not in self.terms:
            raise MissingTermError(f"Term q_{n} is not stored in the expansion")
        return self.terms[n]

    @property
    def is_exact(self) -> bool:
        return self.kind == "poly" and all(
            c.is_exact for term in self.terms.values() for c in term.time_coeffs
        ) and all(is_exact_value(as_scalar(u)) for u in self.mean_flow)

    def has_zero_mean(self) -> bool:
        return all(u == 0 for u in self.mean_flow)

    def with_mean_flow(self, mean_flow: Sequence) -> "FieldExpansion":
        return FieldExpansion(
            dim=self.dim, sg=self.sg, terms=dict(self.terms), order=self.order,
            kind=self.kind, periods=self.periods,
            mean_flow=tuple(as_scalar(u) for u in mean_flow),
        )

    def max_derivative_order(self) -> int:
        return min((c.m_max for term in self.terms.values() for c in term.time_coeffs),
                   default=DEFAULT_M_MAX)


@dataclass(frozen=True)
class DerivativeTensor:
    """
    Polynomial-in-t symmetric m-linear map: coeffs[k] is the t^k coefficient,
    an array of shape (d,) + (d,)*m.
    """
    m: int
    dim: int
    coeffs: Tuple[np.ndarray, ...] = field(default_factory=tuple)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(c.dtype == object for c in self.coeffs)

    def at(self, t: float) -> np.ndarray:
        """Tensor evaluated at time t (float arithmetic)"""
        result = np.zeros((self.dim,) * (self.m + 1))
        for c in reversed(self.coeffs):
            result = result * t + c.astype(float)
        return result

    def is_zero(self) -> bool:
        return all(not np.any(c != 0) for c in self.coeffs)


def eval_velocity(fe: FieldExpansion, x: Sequence[float], t: float, N: int) -> np.ndarray:
    """
    U0 + sum_{n<=N} q_n(x - U0 t, t) e^{-mu_n t} in float arithmetic.
    """
    if N < 0 or N > fe.order:
        raise IndexOutOfRangeError(f"Truncation {N} exceeds the {fe.order} known terms")
    u0 = np.array([float(u) for u in fe.mean_flow])
    shifted = np.asarray(x, dtype=float) - u0 * t
    total = u0.copy()
    for n in sorted(fe.terms):
        if n > N:
            break
        decay = math.exp(-float(fe.sg.mu(n)) * t)
        if decay == 0.0:
            continue
        total = total + fe.terms[n].value(shifted, t).astype(float) * decay
    return total


def derivative_tensor(f: SpatialField, x_star: Sequence, m: int) -> np.ndarray:
    """m-th derivative tensor of a spatial field at x* (constant in t)"""
    return f.derivative(x_star, m)


def _exact_point(fe: FieldExpansion, x_star: Sequence) -> bool:
    return fe.is_exact and all(is_exact_value(as_scalar(c)) for c in x_star)


def q_tensor_poly(fe: FieldExpansion, n: int, m: int, x_star: Sequence) -> DerivativeTensor:
    """
    Q_{n,m}(x*, t) = sum_k (t^k / m!) D^m q_{n,k}(x*), including the 1/m! factor.
    """
    term = fe.term(n)
    exact = _exact_point(fe, x_star)
    point = tuple(as_scalar(c) for c in x_star) if exact else tuple(float(c) for c in x_star)
    scale = Fraction(1, math.factorial(m)) if exact else 1.0 / math.factorial(m)
    coeffs = []
    for coeff in term.time_coeffs:
        tensor = coeff.derivative(point, m) * scale
        coeffs.append(tensor.astype(object) if exact else tensor.astype(float))
    while len(coeffs) > 1 and not np.any(coeffs[-1] != 0):
        coeffs.pop()
    return DerivativeTensor(m=m, dim=fe.dim, coeffs=tuple(coeffs))


def _poly_arrays(p: PolyVec, exact: bool) -> List[np.ndarray]:
    if exact:
        return [np.array(vec, dtype=object) for vec in p.coeffs]
    return [np.array([float(c) for c in vec]) for vec in p.coeffs]


def apply_tensor(Q: DerivativeTensor, args: Sequence[PolyVec]) -> PolyVec:
    """
    Contract Q(t) with m polynomial vectors, multiplying the polynomials in t.
    """
    if len(args) != Q.m:
        raise InvalidInputError(f"Tensor of order {Q.m} applied to {len(args)} arguments")
    for arg in args:
        if arg.dim != Q.dim:
            raise InvalidInputError(f"Argument of dimension {arg.dim} applied to a {Q.dim}-d tensor")
    exact = Q.is_exact and all(arg.is_exact for arg in args)
    dtype = object if exact else float
    current = [c.astype(dtype) for c in Q.coeffs]
    # Contract the last axis first; the tensor is symmetric so order only
    # affects rounding.
    for arg in reversed(args):
        arg_coeffs = _poly_arrays(arg, exact)
        shape = current[0].shape[:-1]
        result = [np.zeros(shape, dtype=dtype) for _ in range(len(current) + len(arg_coeffs) - 1)]
        for a, block in enumerate(current):
            for b, vec in enumerate(arg_coeffs):
                result[a + b] = result[a + b] + np.tensordot(block, vec, axes=([-1], [0]))
        current = result
    return PolyVec.from_coeffs([list(vec) for vec in current], Q.dim)


def tensor_norm(Q: DerivativeTensor, t: float, samples: int = 256,
                rng: Optional[np.random.Generator] = None,
                directions: Iterable[Sequence[Sequence[float]]] = ()) -> float:
    """
    Sampled estimate of ||Q(t)|| = max |Q(t)(y_1..y_m)| over unit vectors.

    Extra candidate direction tuples can be supplied; the estimate never
    exceeds the true norm.
    """
    tensor = Q.at(t)
    if Q.m == 0:
        return float(np.linalg.norm(tensor))
    rng = rng if rng is not None else np.random.default_rng(0)
    candidates = [rng.normal(size=(Q.m, Q.dim)) for _ in range(samples)]
    candidates.extend(np.asarray(d, dtype=float) for d in directions)
    best = 0.0
    for ys in candidates:
        norms = np.linalg.norm(ys, axis=1)
        if np.any(norms == 0):
            continue
        value = tensor
        for y in reversed(ys / norms[:, None]):
            value = np.tensordot(value, y, axes=([-1], [0]))
        best = max(best, float(np.linalg.norm(value)))
    return best


def velocity_truncation_error(fe: FieldExpansion, reference: Callable[[np.ndarray, float], np.ndarray],
                              t: float, N: int, points: Sequence[Sequence[float]]) -> float:
    """sup over sample points of |u(x,t) - sum_{n<=N} q_n(x,t) e^{-mu_n t}|"""
    worst = 0.0
    for x in points:
        diff = np.asarray(reference(np.asarray(x, dtype=float), t)) - eval_velocity(fe, x, t, N)
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst


def random_field_expansion(rng: np.random.Generator, dim: int, sg: Semigroup, order: int,
                           max_time_degree: int = 1, max_space_degree: int = 2,
                           max_numerator: int = 5, max_denominator: int = 4) -> FieldExpansion:
    """
    Random exact PolyField expansion: q_1 constant in t, later terms of time
    degree up to ``max_time_degree``, rational coefficients.
    """
    def rational():
        return Fraction(int(rng.integers(-max_numerator, max_numerator + 1)),
                        int(rng.integers(1, max_denominator + 1)))

    monomial_powers = [p for p in itertools.product(range(max_space_degree + 1), repeat=dim)
                       if sum(p) <= max_space_degree]

    def random_poly_field():
        chosen = rng.choice(len(monomial_powers), size=min(3, len(monomial_powers)), replace=False)
        return PolyField(dim, {monomial_powers[i]: [rational() for _ in range(dim)] for i in chosen})

    terms = {}
    for n in range(1, order + 1):
        degree = 0 if n == 1 else int(rng.integers(0, max_time_degree + 1))
        terms[n] = ExpansionTerm(n=n, time_coeffs=tuple(random_poly_field() for _ in range(degree + 1)))
    return FieldExpansion(dim=dim, sg=sg, terms=terms, order=order, kind="poly")
