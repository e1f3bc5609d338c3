"""
Pseudo-spectral time stepping of the 2D vorticity equation

    omega_t + u . grad omega = nu Laplacian omega,

with the viscous term integrated exactly (integrating factor) and the
dealiased advection term by classical RK4.
"""
import logging
import math
from typing import List, Optional

import numpy as np

from ..core.errors import CFLViolationError, InvalidInputError, SimulationBlowupError
from .state import SpectralGrid, SpectralState

logger = logging.getLogger("lagexp.spectral2d.solver")

CFL_NUMBER = 0.5
DEFAULT_MAX_DT = 0.1


def advection(grid: SpectralGrid, omega_hat: np.ndarray) -> np.ndarray:
    """-FFT(u . grad omega) of the zero-mean part, dealiased"""
    psi = omega_hat * grid.inv_ksq
    u = grid.to_physical(1j * grid.k2 * psi)
    v = grid.to_physical(-1j * grid.k1 * psi)
    wx = grid.to_physical(1j * grid.k1 * omega_hat)
    wy = grid.to_physical(1j * grid.k2 * omega_hat)
    term = -grid.to_spectral(u * wx + v * wy)
    term = np.where(grid.dealias, term, 0.0)
    term[0, 0] = 0.0
    return term


def time_derivative(state: SpectralState) -> np.ndarray:
    """d omega_hat / dt at the state's time"""
    grid = state.grid
    return -state.nu * grid.ksq * state.omega_hat + advection(grid, state.omega_hat)


def stable_dt(state: SpectralState, cfl: float = CFL_NUMBER) -> float:
    """Largest dt allowed by dt <= cfl * dx / max|u|; inf for a state at rest"""
    speed = state.max_speed()
    if speed == 0.0:
        return math.inf
    return cfl * state.grid.dx / speed


def check_cfl(state: SpectralState, dt: float, cfl: float = CFL_NUMBER) -> None:
    limit = stable_dt(state, cfl)
    if dt > limit:
        raise CFLViolationError(dt, limit)


def step(state: SpectralState, dt: float, cfl: float = CFL_NUMBER) -> SpectralState:
    """
    Advance one integrating-factor RK4 step.

    Raises CFLViolationError (with a suggested dt) when dt is too large for
    the current velocity.
    """
    if dt <= 0:
        raise InvalidInputError(f"Time step must be positive, got {dt}")
    check_cfl(state, dt, cfl)
    grid = state.grid
    w = state.omega_hat
    half = np.exp(-state.nu * grid.ksq * dt / 2.0)
    full = half * half

    a = advection(grid, w)
    b = advection(grid, half * (w + 0.5 * dt * a))
    c = advection(grid, half * w + 0.5 * dt * b)
    d = advection(grid, full * w + dt * half * c)
    w_new = full * w + dt / 6.0 * (full * a + 2.0 * half * (b + c) + d)
    w_new = np.where(grid.dealias, w_new, 0.0)
    w_new[0, 0] = 0.0

    new = state.with_time(state.t + dt, w_new)
    if not new.is_finite():
        raise SimulationBlowupError(
            f"Non-finite vorticity at t={new.t:g}; dt={dt:g} is probably too large"
        )
    return new


def _with_rhs(state: SpectralState) -> SpectralState:
    return state.with_time(state.t, state.omega_hat, time_derivative(state))


def simulate(initial: SpectralState, t_end: float, dt: Optional[float] = None, store_stride: int = 1,
             cfl: float = CFL_NUMBER, max_dt: float = DEFAULT_MAX_DT) -> List[SpectralState]:
    """
    Step from the initial state to t_end with a fixed step.

    Args:
        initial: state at the start time
        t_end: final time
        dt: step size; by default the CFL limit of the initial state, capped at max_dt
        store_stride: keep every ``store_stride``-th state (the last one is always kept)
        cfl: CFL number
        max_dt: cap on the automatic step

    Returns:
        Stored states with their time derivatives filled in
    """
    if t_end <= initial.t:
        raise InvalidInputError(f"t_end ({t_end}) must exceed the initial time ({initial.t})")
    if store_stride < 1:
        raise InvalidInputError(f"store_stride must be positive, got {store_stride}")
    if dt is None:
        dt = min(max_dt, stable_dt(initial, cfl))
    span = t_end - initial.t
    n_steps = max(1, math.ceil(span / dt - 1e-9))
    dt = span / n_steps
    logger.info(f"Simulating {n_steps} steps of dt={dt:.6g} to t={t_end:g}, storing every {store_stride}")

    state = initial
    stored = [_with_rhs(state)]
    energy = state.energy()
    for i in range(1, n_steps + 1):
        state = step(state, dt, cfl)
        if i % store_stride == 0 or i == n_steps:
            stored.append(_with_rhs(state))
            new_energy = state.energy()
            if new_energy > energy * (1.0 + 1e-12) + 1e-300:
                logger.warning(f"Energy increased from {energy:.6e} to {new_energy:.6e} at t={state.t:g}")
            energy = new_energy
            logger.debug(f"t={state.t:.4f} energy={new_energy:.6e}")
    return stored


def energy_series(states: List[SpectralState]) -> np.ndarray:
    """(t, energy) rows"""
    return np.array([[s.t, s.energy()] for s in states])
