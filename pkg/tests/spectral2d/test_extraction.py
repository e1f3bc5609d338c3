from fractions import Fraction

import numpy as np
import pytest

from src.core.errors import TransientNotDecayedError
from src.spectral2d.extraction import (
    extract_leading_term,
    handoff_field_expansion,
    handoff_semigroup,
    lowest_occupied_shell,
)
from src.spectral2d.initial import single_mode, taylor_green
from src.spectral2d.solver import simulate

NU = 0.1


@pytest.fixture(scope="module")
def tg_leading():
    return extract_leading_term(simulate(taylor_green(16, NU), t_end=20.0, dt=0.1, store_stride=2))


def test_taylor_green_rate(tg_leading):
    assert tg_leading.mu_hat == pytest.approx(2 * NU, rel=0.01)
    assert tg_leading.shell == pytest.approx(2.0)
    assert tg_leading.dominance == pytest.approx(1.0)


def test_taylor_green_profile(tg_leading):
    """q_1 is the initial Taylor-Green velocity"""
    x = [0.8, 2.3]
    expected = [-np.cos(x[0]) * np.sin(x[1]), np.sin(x[0]) * np.cos(x[1])]
    assert tg_leading.q1.value(x) == pytest.approx(expected, rel=1e-6)
    assert tg_leading.t_ref_sensitivity < 1e-6


def test_single_mode_rate():
    leading = extract_leading_term(simulate(single_mode(16, NU, kappa=(1, 0)), t_end=20.0, dt=0.1, store_stride=2))
    assert leading.mu_hat == pytest.approx(NU, rel=0.01)


def test_snaps_to_stokes_eigenvalue(tg_leading):
    sg, snapped = handoff_semigroup(tg_leading, 4)
    assert snapped
    assert sg.mu(1) == Fraction(1, 5)
    assert sg.mus() == [Fraction(k, 5) for k in range(1, 5)]


def test_handoff_field_expansion(tg_leading):
    fe = handoff_field_expansion(tg_leading, n_cap=6)
    assert fe.kind == "trig"
    assert fe.order == 1
    assert fe.has_zero_mean()
    x = [1.0, 1.0]
    assert fe.term(1).value(x, 0.0) == pytest.approx(tg_leading.q1.value(x))


def test_two_shells_not_yet_decayed():
    first = single_mode(16, 0.01, kappa=(1, 0))
    second = single_mode(16, 0.01, kappa=(2, 0))
    state = first.with_time(0.0, first.omega_hat + second.omega_hat)
    states = simulate(state, t_end=2.0, dt=0.1)
    assert lowest_occupied_shell(states[-1]) == pytest.approx(1.0)
    with pytest.raises(TransientNotDecayedError, match="simulate longer"):
        extract_leading_term(states)
