import numpy as np
import pytest

from src.core.errors import HorizonInsufficientError, InvalidInputError
from src.expansion.field import eval_velocity
from src.oracle.integrator import integrate_trajectory
from src.oracle.limit import estimate_limit, tail_bound
from tests.closed_form import CLOSED_FORM_X0


def closed_form_samples(field, t_end):
    return integrate_trajectory(lambda x, t: eval_velocity(field, x, t, 8), [CLOSED_FORM_X0], 0.0, t_end,
                                tol=1e-12)


def test_zero_velocity_limit_is_start():
    samples = integrate_trajectory(lambda x, t: np.zeros(2), [1.0, 2.0], 0.0, 10.0)
    limit = estimate_limit(samples, 1)
    assert list(limit.x_star) == [1.0, 2.0]
    assert limit.bound == 0.0


def test_closed_form_limit(closed_form_field):
    limit = estimate_limit(closed_form_samples(closed_form_field, 30.0), 1)
    assert abs(limit.x_star[0]) < 1e-11
    assert limit.bound < 1e-12


def test_bound_covers_the_remaining_distance(closed_form_field):
    samples = closed_form_samples(closed_form_field, 12.0)
    limit = estimate_limit(samples, 1)
    half = samples.positions[np.searchsorted(samples.times, 6.0)]
    # x* = 0, so |x(t_end)| is the distance the bound estimates
    assert limit.bound == pytest.approx(abs(limit.x_star[0]), rel=1e-3)
    assert limit.bound < tail_bound(limit.c0, 1.0, 6.0)
    assert abs(half[0]) > abs(limit.x_star[0])


def test_shorter_window_gives_larger_bound(closed_form_field):
    long = estimate_limit(closed_form_samples(closed_form_field, 20.0), 1)
    short = estimate_limit(closed_form_samples(closed_form_field, 10.0), 1)
    assert short.bound > long.bound


def test_horizon_insufficient(closed_form_field):
    with pytest.raises(HorizonInsufficientError, match="extend the horizon"):
        estimate_limit(closed_form_samples(closed_form_field, 3.0), 1, x_tol=1e-6)


def test_mu1_must_be_positive(closed_form_field):
    with pytest.raises(InvalidInputError):
        estimate_limit(closed_form_samples(closed_form_field, 3.0), 0)
