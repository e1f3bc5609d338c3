"""
Limit point of a decaying trajectory with an a posteriori tail bound.

If |u(x(t), t)| <= C0 e^{-mu1 t} for t >= T then
|x(t) - x*| <= (C0 / mu1) e^{-mu1 t}; the estimate takes x* = x(t_end) and
measures C0 on the last third of the window.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import HorizonInsufficientError, InvalidInputError
from .integrator import TrajectorySamples

logger = logging.getLogger("lagexp.oracle.limit")

TAIL_FRACTION = 1.0 / 3.0


@dataclass(frozen=True)
class LimitEstimate:
    x_star: np.ndarray
    bound: float
    c0: float
    mu1: float
    t_end: float

    def to_json(self) -> dict:
        return {
            "x_star": [float(c) for c in self.x_star],
            "bound": self.bound,
            "c0_measured": self.c0,
            "mu1": self.mu1,
            "t_end": self.t_end,
        }


def tail_bound(c0: float, mu1: float, t: float) -> float:
    """(C0 / mu1) e^{-mu1 t}"""
    if c0 == 0.0:
        return 0.0
    return c0 / mu1 * math.exp(-mu1 * t)


def measured_c0(samples: TrajectorySamples, mu1: float, fraction: float = TAIL_FRACTION) -> float:
    """sup of |u(x(t), t)| e^{mu1 t} over the last ``fraction`` of the window"""
    start = samples.t_end - fraction * (samples.t_end - samples.t0)
    mask = samples.times >= start
    speeds = np.linalg.norm(samples.velocities[mask], axis=1)
    times = samples.times[mask]
    positive = speeds > 0
    if not np.any(positive):
        return 0.0
    # log form keeps e^{mu1 t} from overflowing on long horizons
    return float(np.max(np.exp(np.log(speeds[positive]) + mu1 * times[positive])))


def estimate_limit(samples: TrajectorySamples, mu1, x_tol: Optional[float] = None) -> LimitEstimate:
    """
    Estimate x* = x(t_end) and its error bound.

    Args:
        samples: a trajectory reaching far enough for e^{-mu1 t_end} to be small
        mu1: the leading decay exponent (any real or rational type)
        x_tol: optional tolerance; a bound above it raises HorizonInsufficientError

    Returns:
        LimitEstimate with the bound C0/mu1 e^{-mu1 t_end}
    """
    mu1 = float(mu1)
    if mu1 <= 0:
        raise InvalidInputError(f"mu1 must be positive, got {mu1}")
    c0 = measured_c0(samples, mu1)
    bound = tail_bound(c0, mu1, samples.t_end)
    if x_tol is not None and bound > x_tol:
        raise HorizonInsufficientError(
            f"Limit bound {bound:.3e} exceeds the tolerance {x_tol:.3e}; "
            f"extend the horizon beyond t_end={samples.t_end:g}"
        )
    logger.info(f"Limit point estimated at t_end={samples.t_end:g} with bound {bound:.3e} (C0={c0:.3e})")
    return LimitEstimate(
        x_star=samples.positions[-1].copy(),
        bound=bound,
        c0=c0,
        mu1=mu1,
        t_end=samples.t_end,
    )
