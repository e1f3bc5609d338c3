"""
Vector-valued polynomials in the time variable.

Coefficients are either exact (``Fraction``) or binary floats; the mode
follows the inputs. The resolvent solver returns the unique polynomial
solution of q' - gamma q = p in closed form.
"""
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from ..core.errors import InvalidInputError

Scalar = Union[Fraction, float]

FLOAT_TRIM_RELATIVE = 1e-14


def as_scalar(value) -> Scalar:
    """Normalize a number to Fraction (exact inputs) or float"""
    if isinstance(value, bool):
        raise InvalidInputError(f"Boolean is not a coefficient: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):
        return float(value)
    raise InvalidInputError(f"Unsupported coefficient type {type(value).__name__}")


def is_exact_value(value) -> bool:
    return isinstance(value, Fraction)


def _is_zero_vector(vec: Sequence[Scalar], threshold: float) -> bool:
    if threshold == 0:
        return all(c == 0 for c in vec)
    return all(abs(c) < threshold for c in vec)


def _trim(coeffs: List[Tuple[Scalar, ...]], exact: bool) -> List[Tuple[Scalar, ...]]:
    if exact:
        threshold = 0.0
    else:
        scale = max((abs(c) for vec in coeffs for c in vec), default=0.0)
        threshold = FLOAT_TRIM_RELATIVE * scale
    while len(coeffs) > 1 and _is_zero_vector(coeffs[-1], threshold):
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class PolyVec:
    """
    p(t) = sum_k coeffs[k] * t^k with d-vector coefficients, ascending degree.

    The zero polynomial is stored as a single zero vector (degree 0).
    """
    dim: int
    coeffs: Tuple[Tuple[Scalar, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInputError(f"Dimension must be positive, got {self.dim}")
        if len(self.coeffs) == 0:
            raise InvalidInputError("A polynomial needs at least one coefficient vector")
        for vec in self.coeffs:
            if len(vec) != self.dim:
                raise InvalidInputError(
                    f"Coefficient vector {vec!r} does not have dimension {self.dim}"
                )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Iterable], dim: int = None) -> "PolyVec":
        rows = [tuple(as_scalar(c) for c in vec) for vec in coeffs]
        if not rows:
            if dim is None:
                raise InvalidInputError("Cannot infer the dimension of an empty polynomial")
            return cls.zero(dim)
        d = len(rows[0]) if dim is None else dim
        exact = all(is_exact_value(c) for vec in rows for c in vec)
        rows = _trim(rows, exact)
        return cls(dim=d, coeffs=tuple(rows))

    @classmethod
    def zero(cls, dim: int, exact: bool = True) -> "PolyVec":
        zero = Fraction(0) if exact else 0.0
        return cls(dim=dim, coeffs=((zero,) * dim,))

    @classmethod
    def constant(cls, vec: Iterable) -> "PolyVec":
        return cls.from_coeffs([vec])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return all(is_exact_value(c) for vec in self.coeffs for c in vec)

    def is_zero(self) -> bool:
        return self.degree == 0 and all(c == 0 for c in self.coeffs[0])

    def max_abs(self) -> float:
        return max(abs(float(c)) for vec in self.coeffs for c in vec)

    def to_float(self) -> "PolyVec":
        return PolyVec.from_coeffs([[float(c) for c in vec] for vec in self.coeffs], self.dim)

    def __call__(self, t) -> Tuple[Scalar, ...]:
        return poly_eval(self, t)

    def __add__(self, other: "PolyVec") -> "PolyVec":
        return poly_add(self, other)

    def __sub__(self, other: "PolyVec") -> "PolyVec":
        return poly_add(self, poly_scale(other, -1))


def poly_eval(p: PolyVec, t) -> Tuple[Scalar, ...]:
    """Horner evaluation; exact when coefficients and t are exact"""
    if isinstance(t, numbers.Integral) and not isinstance(t, bool):
        t = Fraction(int(t))
    result = list(p.coeffs[-1])
    for vec in reversed(p.coeffs[:-1]):
        result = [r * t + c for r, c in zip(result, vec)]
    return tuple(result)


def poly_add(p: PolyVec, q: PolyVec) -> PolyVec:
    if p.dim != q.dim:
        raise InvalidInputError(f"Dimension mismatch in addition: {p.dim} vs {q.dim}")
    length = max(len(p.coeffs), len(q.coeffs))
    zero = (Fraction(0),) * p.dim
    rows = []
    for k in range(length):
        a = p.coeffs[k] if k < len(p.coeffs) else zero
        b = q.coeffs[k] if k < len(q.coeffs) else zero
        rows.append(tuple(x + y for x, y in zip(a, b)))
    return PolyVec.from_coeffs(rows, p.dim)


def poly_sum(polys: Iterable[PolyVec], dim: int) -> PolyVec:
    total = PolyVec.zero(dim)
    for p in polys:
        total = poly_add(total, p)
    return total


def poly_scale(p: PolyVec, alpha) -> PolyVec:
    alpha = as_scalar(alpha)
    return PolyVec.from_coeffs([[alpha * c for c in vec] for vec in p.coeffs], p.dim)


def poly_mul_scalarpoly(s: Sequence, p: PolyVec) -> PolyVec:
    """Multiply a scalar polynomial (ascending coefficients) into a vector polynomial"""
    scalars = [as_scalar(c) for c in s]
    if not scalars:
        return PolyVec.zero(p.dim)
    rows = [[Fraction(0)] * p.dim for _ in range(len(scalars) + len(p.coeffs) - 1)]
    for i, a in enumerate(scalars):
        if a == 0:
            continue
        for j, vec in enumerate(p.coeffs):
            row = rows[i + j]
            for axis, c in enumerate(vec):
                row[axis] = row[axis] + a * c
    return PolyVec.from_coeffs(rows, p.dim)


def poly_derivative(p: PolyVec) -> PolyVec:
    if p.degree == 0:
        zero = 0.0 if not p.is_exact else Fraction(0)
        return PolyVec(dim=p.dim, coeffs=((zero,) * p.dim,))
    rows = [[k * c for c in p.coeffs[k]] for k in range(1, len(p.coeffs))]
    return PolyVec.from_coeffs(rows, p.dim)


def resolvent_solve(gamma, p: PolyVec) -> PolyVec:
    """
    Unique polynomial q with q' - gamma q = p, gamma > 0.

    Uses q(t) = -sum_{j=0}^{deg p} gamma^{-(j+1)} p^{(j)}(t), which is the
    improper integral -int_t^inf e^{gamma (t - tau)} p(tau) dtau integrated by
    parts; degree is preserved.
    """
    gamma = as_scalar(gamma)
    if gamma <= 0:
        raise InvalidInputError(f"Resolvent needs gamma > 0, got {gamma}")
    inverse = 1 / gamma
    weight = -inverse
    term = p
    result = poly_scale(term, weight)
    for _ in range(p.degree):
        term = poly_derivative(term)
        weight = weight * inverse
        result = poly_add(result, poly_scale(term, weight))
    return result


def resolvent_residual(gamma, q: PolyVec, p: PolyVec) -> PolyVec:
    """q' - gamma q - p; identically zero for a resolvent solution"""
    return poly_add(poly_add(poly_derivative(q), poly_scale(q, -as_scalar(gamma))), poly_scale(p, -1))
