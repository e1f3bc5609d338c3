"""
Exponential decay-rate fits: least squares on (t, ln value).
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.errors import FitError, InvalidInputError

logger = logging.getLogger("lagexp.oracle.decay")

MIN_POINTS = 10
RELATIVE_FLOOR = 1e-12


@dataclass(frozen=True)
class DecayFit:
    """value ~ exp(intercept - slope * t); slope is positive for decay"""
    slope: float
    intercept: float
    r2: float
    n_points: int
    window: Tuple[float, float]

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "n_points": self.n_points,
            "window": list(self.window),
        }


def fit_decay_rate(times: Sequence[float], values: Sequence[float], floor: Optional[float] = None,
                   min_points: int = MIN_POINTS) -> DecayFit:
    """
    Fit ln(value) = intercept - slope * t over the points above ``floor``.

    Args:
        times: sample times
        values: positive magnitudes at those times
        floor: noise floor, defaults to 1e-12 times the first value
        min_points: minimum number of usable points

    Returns:
        DecayFit with slope, intercept and coefficient of determination
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise InvalidInputError("times and values must be 1-d arrays of equal length")
    if len(v) == 0:
        raise FitError("No points to fit")
    if floor is None:
        floor = RELATIVE_FLOOR * abs(v[0])
    mask = v > floor
    if np.count_nonzero(mask) < min_points:
        raise FitError(f"Only {np.count_nonzero(mask)} points above the floor {floor:.3e}, need {min_points}")
    t, logv = t[mask], np.log(v[mask])

    design = np.vstack([t, np.ones_like(t)]).T
    (a, b), *_ = np.linalg.lstsq(design, logv, rcond=None)
    predicted = design @ np.array([a, b])
    ss_res = float(np.sum((logv - predicted) ** 2))
    ss_tot = float(np.sum((logv - logv.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(slope=float(-a), intercept=float(b), r2=r2, n_points=int(len(t)),
                    window=(float(t[0]), float(t[-1])))


def above_floor_runs(times: np.ndarray, values: np.ndarray, floor: float) -> Sequence[Tuple[int, int]]:
    """Maximal index ranges [i, j) with every value above the floor"""
    above = np.asarray(values) > floor
    runs = []
    start = None
    for i, flag in enumerate(above):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(above)))
    return runs


def select_fit_window(times: np.ndarray, values: np.ndarray, floor: float, t_min: float,
                      tail_fraction: float = 0.5) -> Optional[Tuple[int, int]]:
    """
    Index range for a decay fit.

    Takes the longest (in time) run above the floor after ``t_min`` and keeps
    its last ``tail_fraction``. Returns None when nothing after ``t_min`` is
    above the floor.
    """
    if not 0 < tail_fraction <= 1:
        raise InvalidInputError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    times = np.asarray(times, dtype=float)
    first = int(np.searchsorted(times, t_min, side="left"))
    runs = [(i + first, j + first) for i, j in above_floor_runs(times[first:], values[first:], floor)]
    if not runs:
        return None
    i, j = max(runs, key=lambda r: times[r[1] - 1] - times[r[0]])
    cut = times[i] + (1.0 - tail_fraction) * (times[j - 1] - times[i])
    start = int(np.searchsorted(times, cut, side="left"))
    return max(i, min(start, j - 1)), j
