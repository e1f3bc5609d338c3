import math
from fractions import Fraction

import numpy as np
import pytest

from src.core.errors import DerivativeOrderError, FieldSchemaError, IndexOutOfRangeError, InvalidInputError
from src.expansion.engine import (
    assemble_rhs,
    compute_expansion,
    evaluate_expansion,
    galilean_compose,
    perturb_zeta,
    residual,
    truncate,
)
from src.expansion.field import ExpansionTerm, FieldExpansion, PolyField, random_field_expansion
from src.expansion.polyvec import PolyVec
from src.expansion.semigroup import build_semigroup, decompositions, s_index


def test_closed_form_coefficients(closed_form_field):
    te = compute_expansion(closed_form_field, [0], 8)
    assert te.exact
    for n in range(1, 9):
        assert te.zeta(n) == PolyVec.constant([Fraction((-1) ** n, math.factorial(n))])
        assert te.residuals[n] == 0.0


def test_second_coefficient_by_hand(closed_form_field):
    """zeta_2' - 2 zeta_2 = Dq_1(0) zeta_1 = -1"""
    te = compute_expansion(closed_form_field, [0], 2)
    zetas = {1: te.zeta(1)}
    assert assemble_rhs(closed_form_field, zetas, 2, [0]) == PolyVec.constant([-1])
    assert te.zeta(2) == PolyVec.constant([Fraction(1, 2)])


def test_first_coefficient_is_minus_q1_over_mu1():
    rng = np.random.default_rng(11)
    for trial in range(50):
        dim = int(rng.integers(1, 4))
        sg = build_semigroup([Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4))), 2], "1/3", 4)
        fe = random_field_expansion(rng, dim, sg, 2)
        x_star = [Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))) for _ in range(dim)]
        te = compute_expansion(fe, x_star, 1)
        expected = [-c / sg.mu(1) for c in fe.term(1).time_coeffs[0].value(x_star)]
        assert te.zeta(1) == PolyVec.constant(expected), f"trial {trial}"


def test_loose_bounds_give_the_same_rhs():
    rng = np.random.default_rng(5)
    sg = build_semigroup([1, "3/2"], 1, 8)
    fe = random_field_expansion(rng, 2, sg, 6, max_time_degree=1)
    x_star = [Fraction(1, 2), Fraction(-1)]
    te = compute_expansion(fe, x_star, 6)
    for n in range(1, 7):
        zetas = {j: te.zeta(j) for j in range(1, n)}
        minimal = assemble_rhs(fe, zetas, n, x_star)
        loose = assemble_rhs(fe, zetas, n, x_star, bounds=(s_index(sg, n) + 1, 8, n))
        assert minimal == loose


def test_recomputed_residual_is_zero():
    rng = np.random.default_rng(3)
    sg = build_semigroup([1, "5/4"], "1/2", 6)
    fe = random_field_expansion(rng, 2, sg, 5, max_time_degree=2)
    te = compute_expansion(fe, [Fraction(1, 3), Fraction(2)], 5)
    for n in range(1, 6):
        assert residual(te, fe, n).is_zero()


def test_lower_coefficients_do_not_depend_on_the_order():
    rng = np.random.default_rng(17)
    sg = build_semigroup([1, "4/3"], "1/2", 7)
    fe = random_field_expansion(rng, 2, sg, 7, max_time_degree=2)
    x_star = [Fraction(-1, 2), Fraction(1, 3)]
    previous = compute_expansion(fe, x_star, 1)
    for N in range(2, 8):
        current = compute_expansion(fe, x_star, N)
        assert all(current.zeta(n) == previous.zeta(n) for n in range(1, N)), f"N={N}"
        previous = current


def test_coefficient_degree_bound():
    rng = np.random.default_rng(29)
    sg = build_semigroup([1, "3/2"], 1, 7)
    fe = random_field_expansion(rng, 2, sg, 7, max_time_degree=2)
    te = compute_expansion(fe, [Fraction(1, 4), Fraction(-1)], 7)
    for n in range(1, 8):
        bound = 0
        for dec in decompositions(sg, n):
            if fe.has_term(dec.k):
                bound = max(bound, fe.term(dec.k).degree + sum(te.zeta(j).degree for j in dec.js))
        assert te.zeta(n).degree <= bound, f"n={n}"
    assert te.zeta(1).degree == 0


def test_vanishing_field_gives_zero_coefficients(degenerate_field):
    te = compute_expansion(degenerate_field, [0], 4)
    assert all(te.zeta(n).is_zero() for n in range(1, 5))


def test_time_dependent_term_raises_degree():
    sg = build_semigroup([1], 1, 4)
    q1 = PolyField(1, {(1,): [1]})
    q2 = (PolyField(1, {(0,): [0]}), PolyField(1, {(0,): [3]}))
    fe = FieldExpansion(dim=1, sg=sg, terms={
        1: ExpansionTerm(n=1, time_coeffs=(q1,)),
        2: ExpansionTerm(n=2, time_coeffs=q2),
    }, order=2)
    te = compute_expansion(fe, [0], 2)
    assert te.zeta(1).is_zero()
    assert te.zeta(2).degree == 1
    assert not te.is_time_independent()


def test_float_limit_point_switches_to_float_mode(closed_form_field):
    te = compute_expansion(closed_form_field, [0.0], 4)
    assert not te.exact
    assert float(te.zeta(3).coeffs[0][0]) == pytest.approx(-1.0 / 6.0, rel=1e-14)
    assert max(te.residuals.values()) < 1e-12


def test_order_zero_has_no_coefficients(closed_form_field):
    te = compute_expansion(closed_form_field, [0], 0)
    assert te.zetas == {}
    assert evaluate_expansion(te, 3.0, 0) == pytest.approx([0.0])


def test_order_past_cap(closed_form_field):
    with pytest.raises(IndexOutOfRangeError, match="semigroup cap"):
        compute_expansion(closed_form_field, [0], 9)


def test_order_past_known_terms():
    sg = build_semigroup([1], 1, 8)
    fe = FieldExpansion(dim=1, sg=sg, terms={1: ExpansionTerm(n=1, time_coeffs=(PolyField(1, {(0,): [1]}),))},
                        order=2)
    with pytest.raises(IndexOutOfRangeError, match="known field terms"):
        compute_expansion(fe, [0], 3)


def test_derivative_order_limit():
    sg = build_semigroup([1], 1, 8)
    q1 = PolyField(1, {(0,): [1], (1,): [1], (5,): [1]}, m_max=2)
    fe = FieldExpansion(dim=1, sg=sg, terms={1: ExpansionTerm(n=1, time_coeffs=(q1,))}, order=8)
    with pytest.raises(DerivativeOrderError, match="m_max=2"):
        compute_expansion(fe, [0], 5)


def test_low_degree_field_needs_no_m_max():
    """Order 8 requests m up to 7; a degree-one field supplies them as zero"""
    sg = build_semigroup([1], 1, 8)
    q1 = PolyField(1, {(0,): [1], (1,): [1]})
    fe = FieldExpansion(dim=1, sg=sg, terms={1: ExpansionTerm(n=1, time_coeffs=(q1,))}, order=8)
    te = compute_expansion(fe, [0], 8)
    for n in range(1, 9):
        assert te.zeta(n) == PolyVec.constant([Fraction((-1) ** n, math.factorial(n))])


def test_limit_point_dimension(closed_form_field):
    with pytest.raises(InvalidInputError, match="components"):
        compute_expansion(closed_form_field, [0, 0], 2)


def test_evaluate_at_t_two(closed_form_field):
    te = compute_expansion(closed_form_field, [0], 3)
    expected = -math.exp(-2) + 0.5 * math.exp(-4) - math.exp(-6) / 6
    value = evaluate_expansion(te, 2.0, 3)
    assert value[0] == pytest.approx(expected, abs=1e-15)
    exact = math.exp(-math.exp(-2.0)) - 1.0
    assert abs(value[0] - exact) < math.exp(-8.0)


def test_evaluate_includes_mean_flow():
    sg = build_semigroup([1], 1, 3)
    fe = FieldExpansion(dim=2, sg=sg, terms={}, order=3, mean_flow=(1, 0))
    te = compute_expansion(fe, [Fraction(1), Fraction(2)], 3)
    assert evaluate_expansion(te, 5.0, 3) == pytest.approx([6.0, 2.0])


def test_evaluate_rejects_order_past_computed(closed_form_field):
    te = compute_expansion(closed_form_field, [0], 2)
    with pytest.raises(IndexOutOfRangeError):
        evaluate_expansion(te, 1.0, 3)


def test_galilean_shift_only_adds_drift(closed_form_field):
    base = compute_expansion(closed_form_field, [0], 4)
    shifted = compute_expansion(galilean_compose(closed_form_field, [1]), [0], 4)
    assert shifted.zetas == base.zetas
    for t in (0.5, 2.0, 7.0):
        assert evaluate_expansion(shifted, t, 4) == pytest.approx(evaluate_expansion(base, t, 4) + t)


def test_galilean_identity(closed_form_field):
    assert galilean_compose(closed_form_field, [0]).mean_flow == closed_form_field.mean_flow


def test_galilean_needs_zero_mean(shifted_field):
    with pytest.raises(FieldSchemaError, match="zero-mean"):
        galilean_compose(shifted_field, [2])


def test_perturb_and_truncate(closed_form_field):
    te = compute_expansion(closed_form_field, [0], 4)
    faulty = perturb_zeta(te, 2, 1e-3)
    assert not faulty.exact
    assert float(faulty.zeta(2).coeffs[0][0]) == pytest.approx(0.5 + 1e-3)
    assert faulty.zeta(3) == te.zeta(3)

    short = truncate(te, 2)
    assert short.N == 2
    assert sorted(short.zetas) == [1, 2]
    with pytest.raises(IndexOutOfRangeError):
        short.zeta(3)
