from fractions import Fraction

import pytest

from src.expansion.field import ExpansionTerm, FieldExpansion, PolyField
from src.expansion.semigroup import build_semigroup
from tests.closed_form import CLOSED_FORM_X0


@pytest.fixture
def unit_semigroup():
    """mu_n = n"""
    return build_semigroup([1], 1, 8)


@pytest.fixture
def closed_form_field(unit_semigroup):
    """u(x, t) = (1 + x) e^{-t}, exact rational coefficients"""
    q1 = PolyField(1, {(0,): [1], (1,): [1]}, m_max=8)
    return FieldExpansion(dim=1, sg=unit_semigroup, terms={1: ExpansionTerm(n=1, time_coeffs=(q1,))},
                          order=8, kind="poly")


@pytest.fixture
def shifted_field(closed_form_field):
    return closed_form_field.with_mean_flow([1])


@pytest.fixture
def degenerate_field(unit_semigroup):
    """q_1 = x^2, q_2 = x^3 / 2: every term and its first derivative vanish at 0"""
    q1 = PolyField(1, {(2,): [1]}, m_max=8)
    q2 = PolyField(1, {(3,): [Fraction(1, 2)]}, m_max=8)
    return FieldExpansion(dim=1, sg=unit_semigroup, terms={
        1: ExpansionTerm(n=1, time_coeffs=(q1,)),
        2: ExpansionTerm(n=2, time_coeffs=(q2,)),
    }, order=4, kind="poly")


@pytest.fixture
def closed_form_config():
    """Run config of the closed-form 1D field"""
    return {
        'name': 'closed-form',
        'mode': 'analytic-field',
        'semigroup': {'generators': [1], 'nu': 1, 'n_cap': 8},
        'field': {
            'type': 'poly',
            'dim': 1,
            'order': 8,
            'm_max': 8,
            'terms': [{'n': 1, 'time_coeffs': [{'monomials': [
                {'powers': [0], 'coeffs': [1]},
                {'powers': [1], 'coeffs': [1]},
            ]}]}],
        },
        'trajectory': {'x0': [CLOSED_FORM_X0], 't0': 0.0, 'x_star': ['0']},
        'expansion': {'order': 4},
        'verification': {'tol': 1e-12},
    }
