"""
Verification of a computed trajectory expansion against the reference trajectory.

For each truncation order N the error e_N(t) = |x(t) - x_N(t)| is sampled on a
log-spaced grid and its exponential decay rate is fitted on an automatically
chosen window. The margins reported are measured quantities.
"""
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import FitError, InvalidInputError
from ..expansion.engine import TrajectoryExpansion, evaluate_expansion, scale_limit_point
from ..expansion.field import FieldExpansion, eval_velocity
from ..utils.utils import write_csv
from .decay import MIN_POINTS, DecayFit, fit_decay_rate, select_fit_window
from .integrator import DEFAULT_TOL, TrajectorySamples, Velocity, integrate_trajectory
from .limit import LimitEstimate, estimate_limit

logger = logging.getLogger("lagexp.oracle.verification")

SLOPE_SAFETY = 0.02
TARGET_RELATIVE = 0.05
TRANSIENT_MULTIPLE = 2.0
FLOOR_RELATIVE = 1e-12
FLOOR_TOL_MULTIPLE = 50.0
DEFAULT_GRID = 2000
HORIZON_DECAY = 1e-9
LIMIT_FIT_MARGIN = 7.0

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_BELOW_FLOOR = "below-noise-floor"
STATUS_FIT_FAILED = "fit-failed"


@dataclass
class OrderResult:
    """Outcome of the decay check for one truncation order"""
    N: int
    status: str
    sup_error: float
    required_slope: float
    target_slope: Optional[float] = None
    target_index: Optional[int] = None
    target_enforced: bool = False
    fit: Optional[DecayFit] = None
    measured_margin: Optional[float] = None
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status in (STATUS_PASS, STATUS_BELOW_FLOOR)

    def to_json(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "status": self.status,
            "passed": self.passed,
            "sup_error": self.sup_error,
            "required_slope": self.required_slope,
            "target_slope": self.target_slope,
            "target_index": self.target_index,
            "target_enforced": self.target_enforced,
            "fit": self.fit.to_json() if self.fit else None,
            "measured_margin": self.measured_margin,
            "reason": self.reason,
        }


@dataclass
class VerificationReport:
    orders: List[OrderResult]
    limit: LimitEstimate
    x_star_used: Tuple[float, ...]
    limit_decay: Optional[DecayFit]
    settings: Dict[str, Any]
    integrator: Dict[str, Any]
    fault: Optional[Dict[str, Any]] = None
    curves: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)
    times: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.orders)

    def failed_orders(self) -> List[int]:
        return [result.N for result in self.orders if not result.passed]

    def to_json(self) -> Dict[str, Any]:
        gap = float(np.linalg.norm(np.asarray(self.x_star_used) - self.limit.x_star))
        return {
            "passed": self.passed,
            "failed_orders": self.failed_orders(),
            "x_star_used": list(self.x_star_used),
            "limit": self.limit.to_json(),
            "x_star_gap": gap,
            "limit_decay": {
                "fit": self.limit_decay.to_json() if self.limit_decay else None,
                "mu1": self.limit.mu1,
                "label": "measured",
            },
            "orders": [result.to_json() for result in self.orders],
            "settings": self.settings,
            "integrator": self.integrator,
            "fault": self.fault,
        }


def default_horizon(mu1: float, t0: float = 0.0) -> float:
    """Smallest t_end with e^{-mu1 (t_end - t0)} below 1e-9"""
    return t0 + math.log(1.0 / HORIZON_DECAY) / float(mu1)


def noise_floor(scale: float, tol: float) -> float:
    return max(FLOOR_RELATIVE * scale, FLOOR_TOL_MULTIPLE * tol * scale)


def verification_grid(t0: float, t_end: float, n_grid: int = DEFAULT_GRID) -> np.ndarray:
    """t0 plus log-spaced times over four decades up to t_end"""
    span = t_end - t0
    return np.concatenate([[t0], t0 + np.geomspace(span * 1e-4, span, n_grid)])


def _is_time_independent(fe: FieldExpansion, te: TrajectoryExpansion) -> bool:
    fields_static = all(
        all(c.is_zero() for c in term.time_coeffs[1:]) for term in fe.terms.values()
    )
    return fields_static and te.is_time_independent()


def _target(te: TrajectoryExpansion, N: int) -> Tuple[Optional[int], bool]:
    """
    Index of the term expected to dominate e_N, and whether it is known.

    The first nonzero zeta after N inside the computed range dominates; past
    the computed range only mu_{N+1} is known as a lower bound.
    """
    for n in range(N + 1, te.N + 1):
        if not te.zetas[n].is_zero():
            return n, True
    if te.sg.has(N + 1):
        return N + 1, False
    return None, False


def _fit_order(times: np.ndarray, errors: np.ndarray, floor: float, t_min: float,
               tail_fraction: float) -> Tuple[Optional[DecayFit], Optional[Tuple[int, int]]]:
    window = select_fit_window(times, errors, floor, t_min, tail_fraction)
    if window is None:
        return None, None
    i, j = window
    if j - i < MIN_POINTS:
        # widen back to the whole above-floor run
        full = select_fit_window(times, errors, floor, t_min, 1.0)
        i, j = full
    return fit_decay_rate(times[i:j], errors[i:j], floor=floor), (i, j)


def check_order(N: int, te: TrajectoryExpansion, times: np.ndarray, errors: np.ndarray,
                floor: float, t_min: float, strict: bool, tail_fraction: float = 0.5) -> OrderResult:
    """Apply the slope criteria to one error curve"""
    mu_n = float(te.sg.mu(N))
    required = mu_n * (1.0 + SLOPE_SAFETY)
    target_index, known = _target(te, N)
    target = float(te.sg.mu(target_index)) if target_index is not None else None
    # replaced by the sup over the fit window once a window is found
    result = OrderResult(
        N=N, status=STATUS_FAIL, sup_error=float(np.max(errors[times >= t_min], initial=0.0)),
        required_slope=required, target_slope=target, target_index=target_index,
        target_enforced=bool(strict and known and target is not None),
    )

    try:
        fit, window = _fit_order(times, errors, floor, t_min, tail_fraction)
    except FitError as e:
        result.status = STATUS_FIT_FAILED
        result.reason = str(e)
        return result
    if fit is None:
        result.status = STATUS_BELOW_FLOOR
        result.reason = "error below the noise floor after the transient cutoff"
        return result

    i, j = window
    result.fit = fit
    result.sup_error = float(np.max(errors[i:j]))
    result.measured_margin = fit.slope - mu_n
    reasons = []
    if fit.slope < required:
        reasons.append(f"slope {fit.slope:.4f} below required {required:.4f}")
    if strict and target is not None:
        if known and abs(fit.slope - target) > TARGET_RELATIVE * target:
            reasons.append(f"slope {fit.slope:.4f} not within 5% of mu_{target_index}={target:.4f}")
        elif not known and fit.slope < (1.0 - TARGET_RELATIVE) * target:
            reasons.append(f"slope {fit.slope:.4f} below mu_{target_index}={target:.4f} by more than 5%")
    result.status = STATUS_FAIL if reasons else STATUS_PASS
    result.reason = "; ".join(reasons)
    return result


def error_curves(samples: TrajectorySamples, te: TrajectoryExpansion,
                 orders: Sequence[int]) -> Dict[int, np.ndarray]:
    curves = {}
    for N in orders:
        predicted = np.array([evaluate_expansion(te, t, N) for t in samples.times])
        curves[N] = np.linalg.norm(samples.positions - predicted, axis=1)
    return curves


def fit_limit_decay(samples: TrajectorySamples, x_star: Sequence[float], mu1: float, floor: float,
                    tail_fraction: float = 0.5) -> Optional[DecayFit]:
    """
    Measured decay rate of |X(t) - x*|; None when the distance never clears the floor.

    With x* = x(t_end) the distance bends down as t approaches t_end, so the
    window ends LIMIT_FIT_MARGIN / mu1 before t_end (a bend below e^{-7}).
    """
    distance = np.linalg.norm(samples.positions - np.asarray(x_star, dtype=float), axis=1)
    t_min = samples.t0 + TRANSIENT_MULTIPLE / mu1
    keep = samples.times <= samples.t_end - LIMIT_FIT_MARGIN / mu1
    try:
        fit, _ = _fit_order(samples.times[keep], distance[keep], floor, t_min, tail_fraction)
    except FitError as e:
        logger.warning(f"Limit decay fit failed: {e}")
        return None
    return fit


def verify_expansion(fe: FieldExpansion, te: TrajectoryExpansion, x0: Sequence[float],
                     horizon: Optional[float] = None, tol: float = DEFAULT_TOL, t0: float = 0.0,
                     velocity: Optional[Velocity] = None, orders: Optional[Sequence[int]] = None,
                     n_grid: int = DEFAULT_GRID, tail_fraction: float = 0.5) -> VerificationReport:
    """
    Verify every truncation order of ``te`` against a reference trajectory.

    Args:
        fe: the velocity expansion ``te`` was computed from
        te: the trajectory expansion under test
        x0: initial position of the reference trajectory at t0
        horizon: final time; defaults to e^{-mu1 t_end} < 1e-9
        tol: integrator tolerance; also sets the noise floor
        t0: initial time
        velocity: reference velocity; defaults to the full stored expansion of fe
        orders: truncation orders to check, default 1..te.N
        n_grid: number of log-spaced sample times
        tail_fraction: part of the above-floor window used for the slope fit

    Returns:
        VerificationReport with the per-order outcomes and error curves
    """
    if len(x0) != te.dim:
        raise InvalidInputError(f"x0 has {len(x0)} components, expansion is {te.dim}-d")
    mu1 = float(te.sg.mu(1))
    t_end = float(horizon) if horizon is not None else default_horizon(mu1, t0)
    orders = list(range(1, te.N + 1)) if orders is None else list(orders)
    for N in orders:
        if N < 1 or N > te.N:
            raise InvalidInputError(f"Order {N} outside the computed range 1..{te.N}")
    if velocity is None:
        def velocity(x, t):
            return eval_velocity(fe, x, t, fe.order)

    times = verification_grid(t0, t_end, n_grid)
    samples = integrate_trajectory(velocity, x0, t0, t_end, tol=tol, sample_times=times)
    limit = estimate_limit(samples.comoving(te.mean_flow), mu1)

    scale = scale_limit_point(te)
    floor = noise_floor(scale, tol)
    t_min = t0 + TRANSIENT_MULTIPLE / mu1
    strict = _is_time_independent(fe, te)
    curves = error_curves(samples, te, orders)

    results = []
    for N in orders:
        result = check_order(N, te, samples.times, curves[N], floor, t_min, strict, tail_fraction)
        slope = f"{result.fit.slope:.4f}" if result.fit else "n/a"
        logger.info(f"Order {N}: {result.status} (slope {slope}, required {result.required_slope:.4f})")
        results.append(result)

    x_star_used = tuple(float(c) for c in te.x_star)
    limit_decay = fit_limit_decay(samples.comoving(te.mean_flow), x_star_used, mu1, floor, tail_fraction)

    settings = {
        "t0": t0,
        "t_end": t_end,
        "tol": tol,
        "n_grid": n_grid,
        "noise_floor": floor,
        "transient_cutoff": t_min,
        "tail_fraction": tail_fraction,
        "slope_safety": SLOPE_SAFETY,
        "target_relative": TARGET_RELATIVE,
        "target_check": "enforced" if strict else "informational",
    }
    return VerificationReport(
        orders=results,
        limit=limit,
        x_star_used=x_star_used,
        limit_decay=limit_decay,
        settings=settings,
        integrator=samples.stats(),
        curves=curves,
        times=samples.times,
    )


def write_error_curves(path: Path, report: VerificationReport, header: Dict[str, Any]) -> Path:
    """CSV with columns t, e_1..e_N and a leading comment naming field hash and tolerances"""
    orders = sorted(report.curves)
    rows = (
        [float(t)] + [float(report.curves[N][i]) for N in orders]
        for i, t in enumerate(report.times)
    )
    comment = ", ".join(f"{k}={v}" for k, v in header.items())
    path = write_csv(path, ["t"] + [f"e_{N}" for N in orders], rows, comment=comment)
    logger.info(f"Error curves written to {path}")
    return path
