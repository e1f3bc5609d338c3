import numpy as np
import pytest

from src.core.errors import FitError, InvalidInputError
from src.oracle.decay import above_floor_runs, fit_decay_rate, select_fit_window


def test_pure_exponential():
    t = np.arange(1.0, 11.0)
    fit = fit_decay_rate(t, np.exp(-3.0 * t))
    assert fit.slope == pytest.approx(3.0, abs=1e-6)
    assert fit.r2 == pytest.approx(1.0)
    assert fit.window == (1.0, 10.0)


def test_polynomial_factor_flattens_slope():
    t = np.linspace(10.0, 20.0, 50)
    fit = fit_decay_rate(t, t * np.exp(-2.0 * t))
    assert 1.8 <= fit.slope <= 2.0


def test_constant_values():
    t = np.linspace(0.0, 1.0, 20)
    assert fit_decay_rate(t, np.full(20, 0.3)).slope == pytest.approx(0.0, abs=1e-12)


def test_too_few_points_above_floor():
    t = np.arange(1.0, 11.0)
    with pytest.raises(FitError, match="above the floor"):
        fit_decay_rate(t, np.exp(-3.0 * t), floor=1e-6)


def test_shape_mismatch():
    with pytest.raises(InvalidInputError):
        fit_decay_rate([1.0, 2.0], [1.0])


def test_above_floor_runs():
    values = np.array([1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0])
    assert above_floor_runs(np.arange(9.0), values, 0.5) == [(0, 2), (3, 4), (6, 9)]


def test_window_keeps_tail_of_longest_run_after_cutoff():
    times = np.linspace(0.0, 10.0, 101)
    values = np.exp(-times)
    i, j = select_fit_window(times, values, floor=np.exp(-8.0), t_min=2.0, tail_fraction=0.5)
    assert times[i] == pytest.approx(5.0, abs=0.11)
    assert times[j - 1] < 8.0


def test_window_below_floor_is_none():
    times = np.linspace(0.0, 10.0, 101)
    assert select_fit_window(times, np.zeros(101), floor=1e-12, t_min=1.0) is None


def test_window_tail_fraction_range():
    with pytest.raises(InvalidInputError, match="tail_fraction"):
        select_fit_window(np.arange(3.0), np.ones(3), 0.0, 0.0, tail_fraction=0.0)
