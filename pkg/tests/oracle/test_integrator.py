import math

import numpy as np
import pytest

from src.core.errors import IntegrationError, InvalidInputError
from src.expansion.field import eval_velocity
from src.oracle.integrator import integrate_trajectory
from tests.closed_form import CLOSED_FORM_X0, closed_form_x


def test_zero_velocity_stays_put():
    samples = integrate_trajectory(lambda x, t: np.zeros(2), [0.3, -1.0], 0.0, 5.0)
    assert np.all(samples.positions == np.array([0.3, -1.0]))
    assert np.all(samples.velocities == 0.0)


def test_constant_velocity():
    samples = integrate_trajectory(lambda x, t: np.array([1.0, 0.0]), [0.0, 2.0], 0.0, 3.0, tol=1e-10)
    assert samples.positions[-1] == pytest.approx([3.0, 2.0], abs=1e-10)
    assert samples.t_end == 3.0


def test_closed_form_trajectory_within_tolerance(closed_form_field):
    tol = 1e-12
    samples = integrate_trajectory(lambda x, t: eval_velocity(closed_form_field, x, t, 8),
                                   [CLOSED_FORM_X0], 0.0, 30.0, tol=tol)
    exact = np.array([closed_form_x(t) for t in samples.times])
    assert np.max(np.abs(samples.positions[:, 0] - exact)) <= 10 * tol


def test_sample_times_always_include_endpoints():
    samples = integrate_trajectory(lambda x, t: -x, [1.0], 0.0, 2.0, sample_times=[0.5, 1.0])
    assert list(samples.times) == [0.0, 0.5, 1.0, 2.0]
    assert samples.positions[:, 0] == pytest.approx(np.exp(-samples.times), rel=1e-8)


def test_counts_steps():
    samples = integrate_trajectory(lambda x, t: -x, [1.0], 0.0, 2.0)
    stats = samples.stats()
    assert stats['steps'] > 0
    assert stats['rejected'] >= 0
    assert stats['nfev'] > stats['steps']


def test_comoving_frame_removes_drift():
    samples = integrate_trajectory(lambda x, t: np.array([2.0]), [1.0], 0.0, 4.0)
    moving = samples.comoving([2.0])
    assert moving.positions[:, 0] == pytest.approx(np.ones(len(samples.times)), abs=1e-9)
    assert np.all(np.abs(moving.velocities) < 1e-12)


def test_blow_up_reports_last_good_state():
    def u(x, t):
        return np.array([math.inf]) if t > 0.5 else np.array([1.0])

    with pytest.raises(IntegrationError, match="last good state") as excinfo:
        integrate_trajectory(u, [0.0], 0.0, 1.0)
    assert excinfo.value.t_last is not None
    assert excinfo.value.t_last <= 0.5 + 1e-12


def test_rejects_backward_window():
    with pytest.raises(InvalidInputError, match="must exceed t0"):
        integrate_trajectory(lambda x, t: x, [1.0], 2.0, 1.0)


def test_shifted_field_moves_with_mean_flow(shifted_field):
    samples = integrate_trajectory(lambda x, t: eval_velocity(shifted_field, x, t, 8),
                                   [CLOSED_FORM_X0], 0.0, 20.0, tol=1e-10)
    exact = np.array([closed_form_x(t, shift=1.0) for t in samples.times])
    assert np.max(np.abs(samples.positions[:, 0] - exact)) < 1e-6
