"""
Initial conditions for the 2D solver, built from the ``initial`` block of a
simulation config.
"""
import logging
import math
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from ..core.errors import InvalidInputError
from .state import SpectralState, enforce_constraints, spectral_grid

logger = logging.getLogger("lagexp.spectral2d.initial")

TWO_PI = 2.0 * math.pi


def taylor_green(M: int, nu: float, amplitude: float = 1.0,
                 periods: Tuple[float, float] = (TWO_PI, TWO_PI),
                 mean_flow: Sequence[float] = (0.0, 0.0)) -> SpectralState:
    """
    omega = 2 A cos(2 pi x_1 / L_1) cos(2 pi x_2 / L_2); on the 2 pi box the
    velocity is A (-cos x_1 sin x_2, sin x_1 cos x_2), decaying at rate 2 nu.
    """
    grid = spectral_grid(M, tuple(periods))
    X1, X2 = grid.coordinates()
    omega = 2.0 * amplitude * np.cos(TWO_PI * X1 / periods[0]) * np.cos(TWO_PI * X2 / periods[1])
    return _state(M, periods, nu, grid.to_spectral(omega), mean_flow)


def single_mode(M: int, nu: float, kappa: Sequence[int] = (1, 0), amplitude: float = 1.0,
                periods: Tuple[float, float] = (TWO_PI, TWO_PI),
                mean_flow: Sequence[float] = (0.0, 0.0)) -> SpectralState:
    """omega = A cos(theta_kappa(x)); a steady shear for any kappa, decaying at nu |k|^2"""
    if not any(kappa):
        raise InvalidInputError("The single mode must have a nonzero wave vector")
    grid = spectral_grid(M, tuple(periods))
    X1, X2 = grid.coordinates()
    theta = TWO_PI * (kappa[0] * X1 / periods[0] + kappa[1] * X2 / periods[1])
    return _state(M, periods, nu, grid.to_spectral(amplitude * np.cos(theta)), mean_flow)


def random_field(M: int, nu: float, seed: int, amplitude: float = 1.0, k_max: int = 4,
                 periods: Tuple[float, float] = (TWO_PI, TWO_PI),
                 mean_flow: Sequence[float] = (0.0, 0.0)) -> SpectralState:
    """
    Random smooth vorticity with modes |kappa_i| <= k_max and a spectrum
    falling like |kappa|^-2, rescaled to the given RMS vorticity.
    """
    rng = np.random.default_rng(seed)
    grid = spectral_grid(M, tuple(periods))
    shape = grid.shape
    noise = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    radius_sq = grid.kappa1 ** 2 + grid.kappa2 ** 2
    envelope = np.zeros(shape)
    band = (np.abs(grid.kappa1) <= k_max) & (grid.kappa2 <= k_max) & (radius_sq > 0)
    envelope[band] = 1.0 / radius_sq[band]
    coeffs = enforce_constraints(grid, noise * envelope)
    rms = math.sqrt(float(np.sum(grid.weights * np.abs(coeffs) ** 2)))
    if rms == 0:
        raise InvalidInputError("Random initial condition came out identically zero")
    return _state(M, periods, nu, coeffs * (amplitude / rms), mean_flow)


def _state(M, periods, nu, omega_hat, mean_flow) -> SpectralState:
    grid = spectral_grid(M, tuple(periods))
    if len(mean_flow) != 2:
        raise InvalidInputError("Mean flow must have two components")
    return SpectralState(
        M=M,
        periods=tuple(float(p) for p in periods),
        nu=float(nu),
        t=0.0,
        omega_hat=enforce_constraints(grid, omega_hat),
        mean_flow=tuple(float(u) for u in mean_flow),
    )


PRESETS = {
    "taylor_green": taylor_green,
    "single_mode": single_mode,
    "random": random_field,
}


def initial_state(block: Dict[str, Any]) -> SpectralState:
    """
    Build the initial state from a config block::

        {"preset": "taylor_green", "M": 32, "nu": 0.1, "amplitude": 1.0,
         "periods": [6.283..., 6.283...], "mean_flow": [0, 0]}

    ``single_mode`` also takes ``kappa``; ``random`` takes ``seed`` and ``k_max``.
    """
    preset = block.get("preset")
    if preset not in PRESETS:
        raise InvalidInputError(f"Unknown initial preset {preset!r}; choose one of {sorted(PRESETS)}")
    kwargs = {k: v for k, v in block.items() if k != "preset"}
    if "periods" in kwargs:
        kwargs["periods"] = tuple(float(p) for p in kwargs["periods"])
    if "kappa" in kwargs:
        kwargs["kappa"] = tuple(int(k) for k in kwargs["kappa"])
    try:
        state = PRESETS[preset](**kwargs)
    except TypeError as e:
        raise InvalidInputError(f"Bad parameters for preset '{preset}': {e}")
    logger.info(f"Initial state '{preset}': M={state.M}, nu={state.nu}, energy={state.energy():.6e}")
    return state
