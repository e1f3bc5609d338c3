"""
Exponent semigroup generated by the scaled Stokes eigenvalues.

All lattice arithmetic is exact: exponents are stored as rationals in units of
the viscosity scale ``nu`` (an exponent value ``r`` means mu = nu * r).
"""
import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ..core.errors import IndexOutOfRangeError, InvalidInputError

logger = logging.getLogger("lagexp.expansion.semigroup")

RationalLike = Union[int, str, Fraction]


def to_fraction(value: RationalLike) -> Fraction:
    """
    Convert an int, Fraction or "p/q" string to an exact Fraction.

    Floats are rejected: a float generator would silently break exact
    resonance detection.
    """
    if isinstance(value, bool):
        raise InvalidInputError(f"Expected a rational number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"Cannot parse rational '{value}': {e}")
    raise InvalidInputError(
        f"Expected an exact rational (int, Fraction or 'p/q' string), got {type(value).__name__}"
    )


@dataclass(frozen=True, order=True)
class Exponent:
    """Exact non-negative rational exponent in units of nu"""
    value: Fraction

    def __post_init__(self):
        if self.value < 0:
            raise InvalidInputError(f"Exponent must be non-negative, got {self.value}")

    def __add__(self, other: "Exponent") -> "Exponent":
        return Exponent(self.value + other.value)

    def __str__(self) -> str:
        return fraction_string(self.value)


def fraction_string(value: Fraction) -> str:
    """Serialize a Fraction as "p/q" (or "p" for integers)"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Decomposition:
    """
    One resonance mu_k + mu_{j1} + ... + mu_{jm} = mu_n.

    ``m == 0`` is the bare q_n term (then k == n).
    """
    n: int
    k: int
    js: Tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.js)


@dataclass(frozen=True)
class Semigroup:
    """
    The first ``n_cap`` elements of the additive semigroup generated by
    nu * generators, strictly increasing.
    """
    generators: Tuple[Exponent, ...]
    nu: Fraction
    elements: Tuple[Exponent, ...]
    n_cap: int

    def _check_index(self, n: int) -> None:
        if not isinstance(n, int) or n < 1 or n > self.n_cap:
            raise IndexOutOfRangeError(f"Index {n} outside 1..{self.n_cap}")

    def exponent(self, n: int) -> Exponent:
        """Return the n-th element (1-based) in units of nu"""
        self._check_index(n)
        return self.elements[n - 1]

    def mu(self, n: int) -> Fraction:
        """Return the physical exponent mu_n = nu * r_n, exactly"""
        return self.nu * self.exponent(n).value

    def mus(self) -> List[Fraction]:
        return [self.nu * e.value for e in self.elements]

    def gap(self, n: int) -> Fraction:
        """Spectral gap mu_{n+1} - mu_n; needs n + 1 <= n_cap"""
        self._check_index(n)
        if n + 1 > self.n_cap:
            raise IndexOutOfRangeError(
                f"Gap after mu_{n} needs mu_{n + 1}, beyond the cap {self.n_cap}"
            )
        return self.mu(n + 1) - self.mu(n)

    def has(self, n: int) -> bool:
        return 1 <= n <= self.n_cap

    def element_index(self, value: RationalLike) -> Optional[int]:
        """1-based index of an element given in units of nu, or None"""
        target = Exponent(to_fraction(value))
        for idx, element in enumerate(self.elements, start=1):
            if element == target:
                return idx
            if element > target:
                break
        return None

    def s_index(self, n: int) -> int:
        return s_index(self, n)

    def decompositions(self, n: int) -> List[Decomposition]:
        return decompositions(self, n)


def build_semigroup(generators: Sequence[RationalLike], nu: RationalLike, n_cap: int) -> Semigroup:
    """
    Build the sorted exponent sequence mu_1 < mu_2 < ... < mu_{n_cap}.

    Args:
        generators: positive rationals (the Stokes eigenvalues, unscaled)
        nu: positive rational scale
        n_cap: number of elements to enumerate

    Returns:
        A Semigroup holding the n_cap smallest distinct generator sums
    """
    if generators is None or len(generators) == 0:
        raise InvalidInputError("Generator list must not be empty")
    if not isinstance(n_cap, int) or isinstance(n_cap, bool) or n_cap < 1:
        raise InvalidInputError(f"n_cap must be a positive integer, got {n_cap!r}")
    gens = sorted({to_fraction(g) for g in generators})
    if gens[0] <= 0:
        raise InvalidInputError(f"Generators must be strictly positive, got {gens[0]}")
    nu_value = to_fraction(nu)
    if nu_value <= 0:
        raise InvalidInputError(f"nu must be strictly positive, got {nu_value}")

    # Smallest-first expansion: every sum is reached from a strictly smaller one.
    heap = list(gens)
    heapq.heapify(heap)
    seen = set(gens)
    elements: List[Fraction] = []
    while len(elements) < n_cap:
        value = heapq.heappop(heap)
        elements.append(value)
        for g in gens:
            candidate = value + g
            if candidate not in seen:
                seen.add(candidate)
                heapq.heappush(heap, candidate)

    logger.debug(f"Built semigroup with {len(gens)} generators, cap {n_cap}, largest {elements[-1]}")
    return Semigroup(
        generators=tuple(Exponent(g) for g in gens),
        nu=nu_value,
        elements=tuple(Exponent(e) for e in elements),
        n_cap=n_cap,
    )


def periodic_stokes_generators(dim: int, count: int,
                               aspect: Optional[Sequence[RationalLike]] = None) -> List[Fraction]:
    """
    Smallest distinct Stokes eigenvalues of a periodic box.

    Eigenvalues are sum(kappa_i^2 / a_i^2) over nonzero integer wave vectors,
    in units of (2 pi / L_ref)^2, where a_i = L_i / L_ref are rational aspect
    ratios (all ones for a cube).

    Args:
        dim: spatial dimension (2 or 3)
        count: number of eigenvalues to return
        aspect: rational aspect ratios, one per axis

    Returns:
        The ``count`` smallest eigenvalues, sorted
    """
    if dim not in (2, 3):
        raise InvalidInputError(f"Periodic Stokes spectrum needs dim 2 or 3, got {dim}")
    if count < 1:
        raise InvalidInputError(f"count must be positive, got {count}")
    ratios = [Fraction(1)] * dim if aspect is None else [to_fraction(a) for a in aspect]
    if len(ratios) != dim or any(a <= 0 for a in ratios):
        raise InvalidInputError(f"aspect must hold {dim} positive rationals")
    weights = [1 / (a * a) for a in ratios]

    radius = 1
    while True:
        values = set()
        for kappa in itertools.product(range(-radius, radius + 1), repeat=dim):
            if any(kappa):
                values.add(sum(w * k * k for w, k in zip(weights, kappa)))
        # Every eigenvalue below this threshold has all its wave vectors in the box.
        complete_below = min(weights) * (radius + 1) ** 2
        ordered = sorted(v for v in values if v < complete_below)
        if len(ordered) >= count:
            return ordered[:count]
        radius += 1


def s_index(sg: Semigroup, n: int) -> int:
    """
    Smallest positive integer s with s >= mu_n / mu_1 - 1 (exact comparison).
    """
    sg._check_index(n)
    bound = sg.exponent(n).value / sg.exponent(1).value - 1
    return max(1, math.ceil(bound))


def _ordered_tuples(sg: Semigroup, remainder: Fraction, slots: int,
                    max_index: int) -> Iterator[Tuple[int, ...]]:
    """Ordered index tuples of length ``slots`` whose exponents sum to remainder"""
    if slots == 0:
        if remainder == 0:
            yield ()
        return
    smallest = sg.elements[0].value
    for j in range(1, max_index + 1):
        value = sg.elements[j - 1].value
        rest = remainder - value
        if rest < smallest * (slots - 1):
            break
        for tail in _ordered_tuples(sg, rest, slots - 1, max_index):
            yield (j,) + tail


@lru_cache(maxsize=None)
def _decompositions_cached(sg: Semigroup, n: int) -> Tuple[Decomposition, ...]:
    target = sg.exponent(n).value
    found = [Decomposition(n=n, k=n)]
    for m in range(1, s_index(sg, n) + 1):
        for k in range(1, n):
            remainder = target - sg.elements[k - 1].value
            if remainder < sg.elements[0].value * m:
                break
            for js in _ordered_tuples(sg, remainder, m, n - 1):
                found.append(Decomposition(n=n, k=k, js=js))
    return tuple(found)


def decompositions(sg: Semigroup, n: int) -> List[Decomposition]:
    """
    All ordered decompositions mu_k + mu_{j1} + ... + mu_{jm} = mu_n with
    0 <= m <= s_n, in lexicographic (m, k, js) order, the m = 0 term first.
    """
    sg._check_index(n)
    return list(_decompositions_cached(sg, n))


def bounded_decompositions(sg: Semigroup, n: int, max_m: int, max_k: int,
                           max_j: int) -> List[Decomposition]:
    """
    Decompositions with the loose bounds m <= max_m, k <= max_k, j_i <= max_j,
    enumerated by plain product search. Used to check that widening the bounds
    adds no terms.
    """
    sg._check_index(n)
    for bound in (max_k, max_j):
        if bound > sg.n_cap:
            raise IndexOutOfRangeError(f"Bound {bound} exceeds the semigroup cap {sg.n_cap}")
    target = sg.exponent(n).value
    found = []
    for m in range(0, max_m + 1):
        for k in range(1, max_k + 1):
            mu_k = sg.elements[k - 1].value
            for js in itertools.product(range(1, max_j + 1), repeat=m):
                if mu_k + sum(sg.elements[j - 1].value for j in js) == target:
                    found.append(Decomposition(n=n, k=k, js=tuple(js)))
    return found


def generator_sums_up_to(generators: Iterable[RationalLike], limit: RationalLike) -> List[Fraction]:
    """All distinct finite sums of generators not exceeding ``limit``, sorted"""
    gens = sorted({to_fraction(g) for g in generators})
    bound = to_fraction(limit)
    reachable = set()
    frontier = [g for g in gens if g <= bound]
    while frontier:
        value = frontier.pop()
        if value in reachable:
            continue
        reachable.add(value)
        frontier.extend(value + g for g in gens if value + g <= bound)
    return sorted(reachable)
