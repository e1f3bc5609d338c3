"""
Reference trajectory integration for x' = u(x, t).

Uses scipy's DOP853 pair stepped by hand so that rejected steps can be
counted and a failure reports the last accepted state.
"""
import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import DOP853

from ..core.errors import IntegrationError, InvalidInputError

logger = logging.getLogger("lagexp.oracle.integrator")

Velocity = Callable[[np.ndarray, float], np.ndarray]

DEFAULT_TOL = 1e-10
DEFAULT_SAMPLES = 1001


@dataclass(frozen=True)
class TrajectorySamples:
    """Positions and velocities of one trajectory at increasing sample times"""
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    steps: int
    rejected: int
    nfev: int
    tol: float

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def stats(self) -> dict:
        return {"steps": self.steps, "rejected": self.rejected, "nfev": self.nfev, "tol": self.tol}

    def comoving(self, mean_flow: Sequence[float]) -> "TrajectorySamples":
        """Samples of X(t) = x(t) - U0 t, the trajectory in the frame moving with the mean flow"""
        u0 = np.asarray([float(c) for c in mean_flow])
        if not np.any(u0):
            return self
        return replace(
            self,
            positions=self.positions - np.outer(self.times, u0),
            velocities=self.velocities - u0,
        )


def _sample_grid(t0: float, t_end: float, sample_times: Optional[Sequence[float]]) -> np.ndarray:
    if sample_times is None:
        return np.linspace(t0, t_end, DEFAULT_SAMPLES)
    grid = np.unique(np.asarray(sample_times, dtype=float))
    if grid[0] < t0 or grid[-1] > t_end:
        raise InvalidInputError(f"Sample times must lie in [{t0}, {t_end}]")
    if grid[0] > t0:
        grid = np.concatenate([[t0], grid])
    if grid[-1] < t_end:
        grid = np.concatenate([grid, [t_end]])
    return grid


def integrate_trajectory(u: Velocity, x0: Sequence[float], t0: float, t_end: float,
                         tol: float = DEFAULT_TOL,
                         sample_times: Optional[Sequence[float]] = None) -> TrajectorySamples:
    """
    Integrate x' = u(x, t) from (t0, x0) to t_end.

    Args:
        u: velocity evaluator u(x, t)
        x0: initial position
        t0: initial time
        t_end: final time, > t0
        tol: relative and absolute local error tolerance of the pair
        sample_times: times to report (dense output); t0 and t_end are always
            included

    Returns:
        TrajectorySamples at the requested times
    """
    t0, t_end = float(t0), float(t_end)
    if not t_end > t0:
        raise InvalidInputError(f"t_end ({t_end}) must exceed t0 ({t0})")
    if tol <= 0:
        raise InvalidInputError(f"Tolerance must be positive, got {tol}")
    x0 = np.asarray([float(c) for c in x0])
    grid = _sample_grid(t0, t_end, sample_times)

    state = {"t": t0, "x": x0.copy()}

    def rhs(t, x):
        value = np.asarray(u(x, t), dtype=float)
        if not np.all(np.isfinite(value)):
            raise IntegrationError(f"Non-finite velocity at t={t!r}", state["t"], state["x"])
        return value

    solver = DOP853(rhs, t0, x0, t_end, rtol=tol, atol=tol)
    positions = np.empty((len(grid), len(x0)))
    positions[0] = x0
    filled = 1
    steps = 0
    rejected = 0

    while solver.status == "running":
        before = solver.nfev
        message = solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"Integrator stopped: {message}", state["t"], state["x"])
        attempts = max(1, round((solver.nfev - before) / solver.n_stages))
        rejected += attempts - 1
        steps += 1

        t_new = solver.t
        stop = np.searchsorted(grid, t_new, side="right")
        if stop > filled:
            dense = solver.dense_output()
            positions[filled:stop] = dense(grid[filled:stop]).T
            filled = stop
        state["t"], state["x"] = t_new, solver.y.copy()

    positions[-1] = solver.y
    velocities = np.array([np.asarray(u(x, t), dtype=float) for t, x in zip(grid, positions)])
    logger.debug(f"Integrated [{t0}, {t_end}] in {steps} steps ({rejected} rejected, nfev={solver.nfev})")
    return TrajectorySamples(
        times=grid,
        positions=positions,
        velocities=velocities,
        steps=steps,
        rejected=rejected,
        nfev=solver.nfev,
        tol=tol,
    )
