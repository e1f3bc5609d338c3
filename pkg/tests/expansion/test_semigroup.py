import itertools
import math
from fractions import Fraction

import pytest

from src.core.errors import IndexOutOfRangeError, InvalidInputError
from src.expansion.semigroup import (
    Decomposition,
    bounded_decompositions,
    build_semigroup,
    decompositions,
    fraction_string,
    generator_sums_up_to,
    periodic_stokes_generators,
    s_index,
    to_fraction,
)


def brute_force_elements(generators, count):
    """Sums of up to ``count`` generators, sorted, first ``count`` kept"""
    gens = [Fraction(g) for g in generators]
    sums = set()
    for size in range(1, count + 1):
        for combo in itertools.combinations_with_replacement(gens, size):
            sums.add(sum(combo))
    return sorted(sums)[:count]


def test_unit_generator_gives_integers():
    sg = build_semigroup([1], 1, 5)
    assert sg.mus() == [1, 2, 3, 4, 5]


def test_two_and_five():
    sg = build_semigroup([2, 5], 1, 6)
    assert sg.mus() == [2, 4, 5, 6, 7, 8]


def test_stokes_torus_scaled_by_nu():
    """1 is an eigenvalue of the 2-pi torus so every positive integer is reached"""
    gens = periodic_stokes_generators(2, 5)
    assert gens == [1, 2, 4, 5, 8]
    sg = build_semigroup(gens, "1/100", 6)
    assert sg.mus() == [Fraction(k, 100) for k in range(1, 7)]


@pytest.mark.parametrize("generators", [[1], [2, 5], [1, "3/2", "7/3"], ["1/2", "5/3"]])
def test_matches_brute_force(generators):
    sg = build_semigroup(generators, 1, 12)
    assert [e.value for e in sg.elements] == brute_force_elements([to_fraction(g) for g in generators], 12)


def test_elements_strictly_increasing():
    sg = build_semigroup(["3/2", 2, "7/4"], "1/10", 20)
    mus = sg.mus()
    assert all(a < b for a, b in zip(mus, mus[1:]))


def test_closed_under_addition_within_cap():
    sg = build_semigroup([2, 5], 1, 15)
    values = {e.value for e in sg.elements}
    largest = max(values)
    for a in values:
        for b in values:
            if a + b <= largest:
                assert a + b in values


def test_empty_generators_rejected():
    with pytest.raises(InvalidInputError, match="must not be empty"):
        build_semigroup([], 1, 5)


def test_non_positive_generator_rejected():
    with pytest.raises(InvalidInputError, match="strictly positive"):
        build_semigroup([0, 1], 1, 5)


def test_zero_cap_rejected():
    with pytest.raises(InvalidInputError, match="n_cap"):
        build_semigroup([1], 1, 0)


def test_float_generator_rejected():
    with pytest.raises(InvalidInputError, match="exact rational"):
        build_semigroup([0.5], 1, 5)


def test_rational_strings_parsed():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert fraction_string(Fraction(6, 4)) == "3/2"
    assert fraction_string(Fraction(4)) == "4"
    with pytest.raises(InvalidInputError, match="Cannot parse"):
        to_fraction("three")


def test_index_outside_cap():
    sg = build_semigroup([1], 1, 3)
    with pytest.raises(IndexOutOfRangeError):
        sg.mu(4)
    with pytest.raises(IndexOutOfRangeError):
        sg.gap(3)
    assert sg.gap(2) == 1


def test_element_index():
    sg = build_semigroup([2, 5], 1, 6)
    assert sg.element_index(5) == 3
    assert sg.element_index(3) is None


@pytest.mark.parametrize("generators,n,expected", [
    ([1], 1, 1),
    ([1], 3, 2),
    ([2, 5], 3, 2),
    ([1], 8, 7),
])
def test_s_index(generators, n, expected):
    assert s_index(build_semigroup(generators, 1, 8), n) == expected


def test_decompositions_first_index():
    sg = build_semigroup([1], 1, 5)
    assert decompositions(sg, 1) == [Decomposition(n=1, k=1)]


def test_decompositions_second_index():
    sg = build_semigroup([1], 1, 5)
    assert decompositions(sg, 2) == [Decomposition(n=2, k=2), Decomposition(n=2, k=1, js=(1,))]


def test_decompositions_third_index():
    sg = build_semigroup([1], 1, 5)
    found = set(decompositions(sg, 3))
    assert found == {
        Decomposition(n=3, k=3),
        Decomposition(n=3, k=1, js=(2,)),
        Decomposition(n=3, k=2, js=(1,)),
        Decomposition(n=3, k=1, js=(1, 1)),
    }
    assert decompositions(sg, 3)[0].m == 0


def index_compositions(mus, target, parts):
    """Ordered ``parts``-tuples of 1-based indices whose mus add up to target"""
    if parts == 0:
        if target == 0:
            yield ()
        return
    for i, mu in enumerate(mus, start=1):
        if mu <= target:
            for rest in index_compositions(mus, target - mu, parts - 1):
                yield (i,) + rest


def enumerate_resonances(mus, n):
    """Every (k; j_1..j_m) with mu_k + sum mu_j = mu_n and m <= s_n, by exhaustive compositions"""
    s_n = max(1, math.ceil(mus[n - 1] / mus[0] - 1))
    found = set()
    for k in range(1, n + 1):
        for m in range(0, s_n + 1):
            for js in index_compositions(mus[:n], mus[n - 1] - mus[k - 1], m):
                found.add(Decomposition(n=n, k=k, js=js))
    return found


@pytest.mark.parametrize("generators", [[1], [2, 5], [1, "3/2", "5/2"], ["1/3", "1/2"]])
def test_decompositions_match_exhaustive_enumeration(generators):
    sg = build_semigroup(generators, 1, 12)
    mus = [sg.mu(i) for i in range(1, 13)]
    for n in range(1, 13):
        listed = decompositions(sg, n)
        assert len(listed) == len(set(listed))
        assert set(listed) == enumerate_resonances(mus, n), f"n={n}"


@pytest.mark.parametrize("generators", [[1], [2, 5], [1, "3/2", "5/2"]])
def test_minimal_enumeration_equals_loose_bounds(generators):
    sg = build_semigroup(generators, 1, 12)
    for n in range(1, 7):
        minimal = set(decompositions(sg, n))
        loose = set(bounded_decompositions(sg, n, max_m=s_index(sg, n) + 1, max_k=n + 2, max_j=n))
        assert minimal == loose


def test_bounded_decompositions_reject_bounds_past_cap():
    sg = build_semigroup([1], 1, 4)
    with pytest.raises(IndexOutOfRangeError):
        bounded_decompositions(sg, 2, 2, 5, 2)


def test_generator_sums_up_to():
    assert generator_sums_up_to([2, 5], 9) == [2, 4, 5, 6, 7, 8, 9]


def test_periodic_stokes_generators_aspect():
    assert periodic_stokes_generators(2, 3, aspect=[1, 2]) == [Fraction(1, 4), 1, Fraction(5, 4)]
    with pytest.raises(InvalidInputError):
        periodic_stokes_generators(4, 3)
