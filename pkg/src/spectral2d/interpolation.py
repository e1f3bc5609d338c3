"""
Continuous velocity from stored spectral states.

In space the truncated Fourier series is summed directly at the query point;
in time the vorticity coefficients are interpolated by cubic Hermite
polynomials built from the stored states and their time derivatives.
"""
import bisect
import logging
from typing import List, Sequence

import numpy as np

from ..core.errors import InterpolationRangeError, InvalidInputError
from .state import SpectralState

logger = logging.getLogger("lagexp.spectral2d.interpolation")

TIME_SLACK = 1e-12


def hermite_coefficients(left: SpectralState, right: SpectralState, t: float) -> np.ndarray:
    """omega_hat at t in [left.t, right.t] from values and derivatives at both ends"""
    h = right.t - left.t
    s = (t - left.t) / h
    h00 = 2 * s ** 3 - 3 * s ** 2 + 1
    h10 = s ** 3 - 2 * s ** 2 + s
    h01 = -2 * s ** 3 + 3 * s ** 2
    h11 = s ** 3 - s ** 2
    return (h00 * left.omega_hat + h10 * h * left.rhs_hat
            + h01 * right.omega_hat + h11 * h * right.rhs_hat)


class VelocityInterpolator:
    """Callable u(x, t) over a list of stored states, ready for the trajectory integrator"""

    def __init__(self, states: Sequence[SpectralState]):
        if not states:
            raise InvalidInputError("No stored states to interpolate")
        for s in states:
            if s.rhs_hat is None:
                raise InvalidInputError(f"State at t={s.t:g} has no stored time derivative")
        self.states: List[SpectralState] = list(states)
        self.times = [s.t for s in self.states]
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise InvalidInputError("Stored states must have strictly increasing times")
        first = self.states[0]
        self.grid = first.grid
        self.mean_flow = np.asarray(first.mean_flow, dtype=float)
        # velocity = Re sum weights * multiplier * omega_hat * phase
        self._u_factor = self.grid.weights * 1j * self.grid.k2 * self.grid.inv_ksq
        self._v_factor = self.grid.weights * -1j * self.grid.k1 * self.grid.inv_ksq
        self._omega1 = 2.0 * np.pi * self.grid.kappa1 / first.periods[0]
        self._omega2 = 2.0 * np.pi * self.grid.kappa2 / first.periods[1]

    @property
    def t_range(self):
        return self.times[0], self.times[-1]

    def coefficients_at(self, t: float) -> np.ndarray:
        t0, t1 = self.t_range
        if t < t0 - TIME_SLACK or t > t1 + TIME_SLACK:
            raise InterpolationRangeError(f"t={t!r} outside the stored window [{t0}, {t1}]")
        t = min(max(t, t0), t1)
        i = bisect.bisect_left(self.times, t)
        if i < len(self.times) and self.times[i] == t:
            return self.states[i].omega_hat
        left, right = self.states[i - 1], self.states[i]
        return hermite_coefficients(left, right, t)

    def evaluate(self, omega_hat: np.ndarray, x: Sequence[float]) -> np.ndarray:
        """Zero-mean velocity of the given coefficients at the point x"""
        phase = np.exp(1j * (self._omega1 * x[0] + self._omega2 * x[1]))
        weighted = omega_hat * phase
        return np.array([float(np.real(np.sum(self._u_factor * weighted))),
                         float(np.real(np.sum(self._v_factor * weighted)))])

    def __call__(self, x: Sequence[float], t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        shifted = x - self.mean_flow * t
        return self.mean_flow + self.evaluate(self.coefficients_at(float(t)), shifted)


def velocity_at(states: Sequence[SpectralState], x: Sequence[float], t: float) -> np.ndarray:
    """u(x, t) = U0 + v(x - U0 t, t) from stored states"""
    return VelocityInterpolator(states)(x, t)


def interpolation_error_estimate(states: Sequence[SpectralState]) -> float:
    """
    Relative error of the time interpolant, estimated by interpolating every
    other state over a doubled stride and scaling by the cubic Hermite
    order (2^4).
    """
    worst = 0.0
    for left, middle, right in zip(states[:-2:2], states[1:-1:2], states[2::2]):
        predicted = hermite_coefficients(left, right, middle.t)
        scale = max(float(np.max(np.abs(middle.omega_hat))), 1e-300)
        worst = max(worst, float(np.max(np.abs(predicted - middle.omega_hat))) / scale)
    return worst / 16.0
