import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from src.core.errors import DerivativeOrderError, FieldSchemaError, InvalidInputError, MissingTermError
from src.expansion.field import (
    DerivativeTensor,
    ExpansionTerm,
    FieldExpansion,
    PolyField,
    TrigField,
    apply_tensor,
    derivative_tensor,
    eval_velocity,
    q_tensor_poly,
    random_field_expansion,
    tensor_norm,
    velocity_truncation_error,
)
from src.expansion.polyvec import PolyVec, poly_eval
from src.expansion.semigroup import build_semigroup

TWO_PI = 2.0 * math.pi


@pytest.fixture
def sine_field():
    """f(x) = (sin x_2, 0) on the 2-pi torus"""
    return TrigField(2, [TWO_PI, TWO_PI], {(0, 1): [-0.5j, 0.0]})


def trig_expansion(coeff, n_cap=4, nu=1):
    sg = build_semigroup([1], nu, n_cap)
    return FieldExpansion(dim=coeff.dim, sg=sg, terms={1: ExpansionTerm(n=1, time_coeffs=(coeff,))},
                          order=1, kind="trig", periods=coeff.periods)


def test_poly_value_and_first_derivative():
    f = PolyField(1, {(0,): [1], (1,): [1]})
    assert list(f.value([Fraction(0)])) == [1]
    assert derivative_tensor(f, [Fraction(0)], 1).tolist() == [[1]]


def test_poly_derivative_beyond_degree_is_zero():
    f = PolyField(1, {(0,): [1], (1,): [1]})
    assert not np.any(derivative_tensor(f, [Fraction(0)], 2) != 0)


def test_poly_derivative_past_m_max():
    f = PolyField(1, {(4,): [1]}, m_max=2)
    with pytest.raises(DerivativeOrderError, match="m_max"):
        f.derivative([0], 3)


def test_poly_derivative_past_m_max_and_degree_is_zero():
    f = PolyField(1, {(0,): [1], (1,): [1]})
    assert f.m_max < 7
    tensor = derivative_tensor(f, [Fraction(0)], 7)
    assert tensor.shape == (1,) * 8
    assert not np.any(tensor != 0)


def test_poly_supports_derivative_orders():
    f = PolyField(2, {(3, 1): [1, 0]}, m_max=2)
    assert f.supports_derivative(2)
    assert not f.supports_derivative(3)
    assert not f.supports_derivative(4)
    assert f.supports_derivative(5)


def test_poly_mixed_partials_are_symmetric():
    f = PolyField(2, {(2, 1): [1, Fraction(1, 2)], (0, 3): [0, 1]})
    tensor = derivative_tensor(f, [Fraction(1), Fraction(2)], 2)
    assert tensor.shape == (2, 2, 2)
    assert np.array_equal(tensor[:, 0, 1], tensor[:, 1, 0])
    # d^2/dx1 dx2 of x1^2 x2 is 2 x1
    assert tensor[0, 0, 1] == 2


def test_poly_rejects_wrong_dimension():
    with pytest.raises(FieldSchemaError, match="invalid for dimension"):
        PolyField(2, {(1,): [1, 0]})


def test_trig_value(sine_field):
    x = [0.3, 1.1]
    assert sine_field.value(x) == pytest.approx([math.sin(1.1), 0.0])


def test_trig_first_derivative_at_origin(sine_field):
    assert derivative_tensor(sine_field, [0.0, 0.0], 1) == pytest.approx(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_trig_derivative_matches_finite_differences(sine_field):
    x = np.array([0.4, -0.7])
    h = 1e-5
    exact = derivative_tensor(sine_field, x, 1)
    for b in range(2):
        step = np.zeros(2)
        step[b] = h
        central = (sine_field.value(x + step) - sine_field.value(x - step)) / (2 * h)
        assert exact[:, b] == pytest.approx(central, abs=1e-8)


@pytest.fixture
def swirl_field():
    """Three divergence-free modes on a 2 pi x 4 pi box"""
    modes = {}
    for kappa, amplitude in (((1, 0), 0.3 + 0.1j), ((1, 2), -0.2j), ((2, -1), 0.15)):
        omega = np.array([kappa[0], kappa[1] / 2.0])
        modes[kappa] = list(amplitude * np.array([-omega[1], omega[0]]))
    return TrigField(2, [TWO_PI, 2 * TWO_PI], modes, divergence_free=True)


def test_trig_second_derivative_matches_finite_differences(swirl_field):
    x = np.array([0.9, -2.3])
    h = 1e-5
    second = derivative_tensor(swirl_field, x, 2)
    for b in range(2):
        step = np.zeros(2)
        step[b] = h
        central = (derivative_tensor(swirl_field, x + step, 1) - derivative_tensor(swirl_field, x - step, 1)) / (2 * h)
        assert second[:, :, b] == pytest.approx(central, abs=1e-8)


def test_trig_divergence_free_everywhere(swirl_field):
    rng = np.random.default_rng(4)
    points = rng.uniform(-10.0, 10.0, size=(100, 2))
    assert max(abs(swirl_field.divergence(x)) for x in points) < 1e-12
    assert not np.any(swirl_field.mean())


def test_trig_negative_mode_folded_into_half_space():
    f = TrigField(1, [TWO_PI], {(-1,): [0.5j]})
    assert (1,) in f.modes
    assert f.value([0.2]) == pytest.approx([math.sin(0.2)])


def test_trig_divergence_check():
    with pytest.raises(FieldSchemaError, match="not divergence-free"):
        TrigField(2, [TWO_PI, TWO_PI], {(1, 0): [1.0, 0.0]}, divergence_free=True)
    ok = TrigField(2, [TWO_PI, TWO_PI], {(1, 0): [0.0, 1.0]}, divergence_free=True)
    assert ok.divergence([0.5, 0.5]) == pytest.approx(0.0)


def test_trig_term_with_mean_rejected():
    coeff = TrigField(1, [TWO_PI], {(0,): [1.0], (1,): [0.5]})
    with pytest.raises(FieldSchemaError, match="nonzero mean"):
        trig_expansion(coeff)


def test_first_term_must_be_time_independent():
    sg = build_semigroup([1], 1, 4)
    coeffs = (PolyField(1, {(0,): [1]}), PolyField(1, {(1,): [1]}))
    with pytest.raises(FieldSchemaError, match="q_1 must be independent of t"):
        FieldExpansion(dim=1, sg=sg, terms={1: ExpansionTerm(n=1, time_coeffs=coeffs)}, order=1)


def test_term_beyond_order_rejected():
    sg = build_semigroup([1], 1, 4)
    with pytest.raises(FieldSchemaError, match="outside 1..2"):
        FieldExpansion(dim=1, sg=sg, terms={3: ExpansionTerm(n=3, time_coeffs=(PolyField(1, {(0,): [1]}),))},
                       order=2)


def test_missing_term_lookup(closed_form_field):
    with pytest.raises(MissingTermError):
        closed_form_field.term(2)


def test_eval_velocity_at_time_zero(sine_field):
    fe = trig_expansion(sine_field)
    x = [0.1, 0.9]
    assert eval_velocity(fe, x, 0.0, 1) == pytest.approx(sine_field.value(x))


def test_eval_velocity_taylor_green_halves():
    nu = 0.1
    coeff = TrigField(2, [TWO_PI, TWO_PI], {
        (1, 1): [-0.25j, 0.25j],
        (1, -1): [0.25j, 0.25j],
    }, divergence_free=True)
    fe = FieldExpansion(dim=2, sg=build_semigroup([2], "1/10", 4),
                        terms={1: ExpansionTerm(n=1, time_coeffs=(coeff,))}, order=1, kind="trig",
                        periods=coeff.periods)
    x = [0.7, 0.2]
    t = math.log(2.0) / (2.0 * nu)
    assert eval_velocity(fe, x, t, 1) == pytest.approx(0.5 * coeff.value(x))
    assert coeff.value(x) == pytest.approx([math.cos(0.7) * math.sin(0.2), -math.sin(0.7) * math.cos(0.2)])


def test_eval_velocity_zero_expansion_is_mean_flow():
    sg = build_semigroup([1], 1, 3)
    fe = FieldExpansion(dim=2, sg=sg, terms={}, order=3, mean_flow=(1, -2))
    assert eval_velocity(fe, [3.0, 4.0], 2.5, 3) == pytest.approx([1.0, -2.0])


def test_eval_velocity_shifts_argument_by_mean_flow(shifted_field):
    t = 0.8
    x = 2.0
    expected = 1.0 + (1.0 + (x - t)) * math.exp(-t)
    assert eval_velocity(shifted_field, [x], t, 1) == pytest.approx([expected])


def test_q_tensor_value_and_jacobian(closed_form_field):
    x_star = [Fraction(0)]
    q0 = q_tensor_poly(closed_form_field, 1, 0, x_star)
    q1 = q_tensor_poly(closed_form_field, 1, 1, x_star)
    q2 = q_tensor_poly(closed_form_field, 1, 2, x_star)
    assert q0.coeffs[0].tolist() == [1]
    assert q1.coeffs[0].tolist() == [[1]]
    assert q2.is_zero()
    assert q0.is_exact


def test_q_tensor_includes_factorial():
    sg = build_semigroup([1], 1, 2)
    fe = FieldExpansion(dim=1, sg=sg, terms={1: ExpansionTerm(n=1, time_coeffs=(PolyField(1, {(3,): [1]}),))},
                        order=1)
    # (1/2) d^2/dx^2 x^3 at x = 1 is 3
    assert q_tensor_poly(fe, 1, 2, [Fraction(1)]).coeffs[0].tolist() == [[[3]]]


def test_apply_tensor_order_zero():
    Q = DerivativeTensor(m=0, dim=2, coeffs=(np.array([1, 2], dtype=object), np.array([0, 1], dtype=object)))
    assert apply_tensor(Q, []) == PolyVec.from_coeffs([[1, 2], [0, 1]])


def test_apply_tensor_identity():
    Q = DerivativeTensor(m=1, dim=2, coeffs=(np.eye(2, dtype=int).astype(object),))
    p = PolyVec.from_coeffs([[1, 0], [Fraction(1, 2), 3]])
    assert apply_tensor(Q, [p]) == p


def test_apply_tensor_bilinear():
    Q = DerivativeTensor(m=2, dim=1, coeffs=(np.array([[[2]]], dtype=object),))
    one = PolyVec.from_coeffs([[1]])
    assert apply_tensor(Q, [one, one]) == PolyVec.from_coeffs([[2]])


def test_apply_tensor_multiplies_polynomials_in_t():
    Q = DerivativeTensor(m=1, dim=1, coeffs=(np.array([[0]], dtype=object), np.array([[1]], dtype=object)))
    p = PolyVec.from_coeffs([[1], [1]])
    # t * (1 + t)
    assert apply_tensor(Q, [p]) == PolyVec.from_coeffs([[0], [1], [1]])


def test_apply_tensor_argument_count():
    Q = DerivativeTensor(m=2, dim=1, coeffs=(np.array([[[1]]], dtype=object),))
    with pytest.raises(InvalidInputError, match="applied to 1 arguments"):
        apply_tensor(Q, [PolyVec.from_coeffs([[1]])])


@pytest.fixture
def cubic_expansion():
    """q_2 = a(x) + t b(x) with cubic a and b, so Q_{2,3} is a polynomial in t"""
    sg = build_semigroup([1], 1, 4)
    a = PolyField(2, {(3, 0): [1, 2], (2, 1): [Fraction(1, 2), -1], (1, 2): [3, 0], (0, 3): [0, Fraction(-2, 3)]})
    b = PolyField(2, {(2, 1): [2, 1], (1, 1): [1, 1]})
    return FieldExpansion(dim=2, sg=sg, terms={
        1: ExpansionTerm(n=1, time_coeffs=(PolyField(2, {(1, 0): [1, 0]}),)),
        2: ExpansionTerm(n=2, time_coeffs=(a, b)),
    }, order=2)


def test_apply_tensor_ignores_argument_order(cubic_expansion):
    Q = q_tensor_poly(cubic_expansion, 2, 3, [Fraction(1, 3), Fraction(-2)])
    assert Q.degree == 1
    args = [
        PolyVec.from_coeffs([[1, 2], [Fraction(1, 2), 0]]),
        PolyVec.from_coeffs([[Fraction(-1, 3), 1]]),
        PolyVec.from_coeffs([[0, 1], [1, 0], [2, 2]]),
    ]
    reference = apply_tensor(Q, args)
    assert not reference.is_zero()
    for perm in itertools.permutations(args):
        assert apply_tensor(Q, list(perm)) == reference


def test_multilinear_bound_on_random_tensors():
    rng = np.random.default_rng(21)
    sg = build_semigroup([1, "3/2"], 1, 4)
    for trial in range(20):
        fe = random_field_expansion(rng, 3, sg, 2, max_space_degree=3)
        x_star = list(rng.uniform(-1.0, 1.0, size=3))
        t = float(rng.uniform(0.0, 2.0))
        for m in (1, 2, 3):
            Q = q_tensor_poly(fe, 2, m, x_star)
            ys = rng.normal(size=(m, 3))
            value = np.linalg.norm(poly_eval(apply_tensor(Q, [PolyVec.constant(list(y)) for y in ys]), t))
            lengths = np.linalg.norm(ys, axis=1)
            norm = tensor_norm(Q, t, samples=64, rng=rng, directions=[ys / lengths[:, None]])
            assert value <= norm * np.prod(lengths) * (1 + 1e-12) + 1e-15, f"trial {trial}, m={m}"
            assert norm <= np.linalg.norm(Q.at(t)) * (1 + 1e-12) + 1e-15


def test_tensor_norm_of_identity():
    Q = DerivativeTensor(m=1, dim=3, coeffs=(np.eye(3),))
    assert tensor_norm(Q, 0.0) == pytest.approx(1.0)


def test_random_field_expansion_is_exact_and_seeded():
    sg = build_semigroup([1, "3/2"], 1, 6)
    a = random_field_expansion(np.random.default_rng(7), 2, sg, 4)
    b = random_field_expansion(np.random.default_rng(7), 2, sg, 4)
    assert a.is_exact
    assert a.term(1).degree == 0
    assert [t.time_coeffs[0].monomials for t in a.terms.values()] == \
        [t.time_coeffs[0].monomials for t in b.terms.values()]


def test_velocity_truncation_error(closed_form_field):
    def reference(x, t):
        return (1 + x) * math.exp(-t) + 0.5 * x * math.exp(-2 * t)

    error = velocity_truncation_error(closed_form_field, reference, 1.0, 1, [[-1.0], [0.0], [1.0]])
    assert error == pytest.approx(0.5 * math.exp(-2.0))
    exact = velocity_truncation_error(closed_form_field, lambda x, t: (1 + x) * math.exp(-t), 1.0, 1, [[0.3]])
    assert exact == pytest.approx(0.0, abs=1e-15)
