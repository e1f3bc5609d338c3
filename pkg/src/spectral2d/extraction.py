"""
Leading expansion data from a simulated decaying flow.

Once the lowest occupied Stokes shell dominates, u(x, t) ~ q_1(x) e^{-mu_1 t}:
mu_1 comes from a log-linear fit of the shell amplitude and q_1 from the
shell projection rescaled by e^{mu_1 t_ref}.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import InvalidInputError, TransientNotDecayedError
from ..expansion.field import ExpansionTerm, FieldExpansion, TrigField
from ..expansion.semigroup import Semigroup, build_semigroup, periodic_stokes_generators
from ..oracle.decay import DecayFit, fit_decay_rate
from .state import SpectralState

logger = logging.getLogger("lagexp.spectral2d.extraction")

DOMINANCE = 0.99
OCCUPIED_RELATIVE = 1e-12
SNAP_RELATIVE = 0.05
DEFAULT_TAIL = 0.5
STOKES_COUNT = 16


@dataclass(frozen=True)
class LeadingTerm:
    mu_hat: float
    q1: TrigField
    t_ref: float
    shell: float
    fit: DecayFit
    fit_rms: float
    dominance: float
    t_ref_sensitivity: float
    mean_flow: Tuple[float, float]
    nu: float
    periods: Tuple[float, float]

    def to_json(self) -> Dict[str, Any]:
        return {
            "mu_hat": self.mu_hat,
            "t_ref": self.t_ref,
            "shell_k_squared": self.shell,
            "fit": self.fit.to_json(),
            "fit_rms_residual": self.fit_rms,
            "dominance": self.dominance,
            "t_ref_sensitivity": self.t_ref_sensitivity,
            "mean_flow": list(self.mean_flow),
            "nu": self.nu,
            "periods": list(self.periods),
        }


def _shell_key(ksq: np.ndarray) -> np.ndarray:
    return np.round(ksq, 9)


def _shell_energies(state: SpectralState) -> Dict[float, float]:
    u_hat, v_hat = state.velocity_hat()
    density = 0.5 * state.grid.weights * (np.abs(u_hat) ** 2 + np.abs(v_hat) ** 2)
    keys = _shell_key(state.grid.ksq)
    energies: Dict[float, float] = {}
    for key in np.unique(keys[keys > 0]):
        energies[float(key)] = float(np.sum(density[keys == key]))
    return energies


def lowest_occupied_shell(state: SpectralState, relative: float = OCCUPIED_RELATIVE) -> float:
    energies = _shell_energies(state)
    total = sum(energies.values())
    if total == 0:
        raise TransientNotDecayedError("The flow is at rest; there is no leading shell")
    for key in sorted(energies):
        if energies[key] > relative * total:
            return key
    raise TransientNotDecayedError("No occupied shell found")


def shell_projection(state: SpectralState, shell: float) -> TrigField:
    """Velocity restricted to the modes with |k|^2 == shell, as a TrigField"""
    grid = state.grid
    u_hat, v_hat = state.velocity_hat()
    mask = _shell_key(grid.ksq) == shell
    modes = {}
    for i, j in zip(*np.nonzero(mask)):
        kappa = (int(grid.kappa1[i, j]), int(grid.kappa2[i, j]))
        # the kappa_2 = 0 column stores both kappa and -kappa
        if kappa[1] == 0 and kappa[0] < 0:
            continue
        modes[kappa] = [complex(u_hat[i, j]), complex(v_hat[i, j])]
    return TrigField(2, state.periods, modes, divergence_free=True)


def _scaled(field: TrigField, factor: float) -> TrigField:
    return TrigField(2, field.periods, {k: c * factor for k, c in field.modes.items()},
                     divergence_free=field.divergence_free)


def extract_leading_term(states: Sequence[SpectralState], tail: float = DEFAULT_TAIL,
                         dominance: float = DOMINANCE) -> LeadingTerm:
    """
    Fit mu_1 and q_1 on the last ``tail`` fraction of the stored window.

    Raises TransientNotDecayedError when the lowest occupied shell carries less
    than ``dominance`` of the energy anywhere in the window.
    """
    if len(states) < 3:
        raise InvalidInputError("Need at least three stored states to extract a decay rate")
    t_first, t_last = states[0].t, states[-1].t
    start = t_last - tail * (t_last - t_first)
    window = [s for s in states if s.t >= start]
    if len(window) < 3:
        raise InvalidInputError(f"Only {len(window)} states in the tail window; lower the store stride")

    shell = lowest_occupied_shell(window[-1])
    amplitudes, ratios = [], []
    for s in window:
        energies = _shell_energies(s)
        total = sum(energies.values())
        shell_energy = energies.get(shell, 0.0)
        ratios.append(shell_energy / total if total > 0 else 0.0)
        amplitudes.append(math.sqrt(shell_energy))
    weakest = min(ratios)
    if weakest < dominance:
        raise TransientNotDecayedError(
            f"Lowest shell |k|^2={shell:g} holds only {weakest:.3f} of the energy in the tail window "
            f"(needs {dominance}); simulate longer"
        )

    times = np.array([s.t for s in window])
    fit = fit_decay_rate(times, amplitudes, floor=0.0, min_points=min(10, len(window)))
    predicted = fit.intercept - fit.slope * times
    rms = float(np.sqrt(np.mean((np.log(amplitudes) - predicted) ** 2)))
    mu_hat = fit.slope

    t_ref = window[0].t
    q1 = _scaled(shell_projection(window[0], shell), math.exp(mu_hat * t_ref))
    q1_late = _scaled(shell_projection(window[-1], shell), math.exp(mu_hat * window[-1].t))
    diff = max((np.max(np.abs(q1_late.modes[k] - q1.modes[k])) for k in q1.modes), default=0.0)
    size = max((np.max(np.abs(c)) for c in q1.modes.values()), default=1.0)
    sensitivity = float(diff / size) if size else 0.0

    logger.info(f"Leading shell |k|^2={shell:g}: mu_hat={mu_hat:.6g} (r2={fit.r2:.6f}), "
                f"dominance {weakest:.4f}, t_ref sensitivity {sensitivity:.2e}")
    first = states[0]
    return LeadingTerm(
        mu_hat=mu_hat, q1=q1, t_ref=t_ref, shell=shell, fit=fit, fit_rms=rms,
        dominance=weakest, t_ref_sensitivity=sensitivity,
        mean_flow=tuple(first.mean_flow), nu=first.nu, periods=tuple(first.periods),
    )


def _reference_scale(periods: Sequence[float]) -> Tuple[float, List[Fraction]]:
    """(2 pi / L_ref)^2 with L_ref the first period, and rational aspect ratios"""
    l_ref = periods[0]
    aspect = [Fraction(p / l_ref).limit_denominator(1000) for p in periods]
    return (2.0 * math.pi / l_ref) ** 2, aspect


def handoff_semigroup(leading: LeadingTerm, n_cap: int) -> Tuple[Semigroup, bool]:
    """
    Semigroup generated by the extracted rate.

    When mu_hat lies within 5% of nu * Lambda for a Stokes eigenvalue Lambda
    of the box, the exact eigenvalue is used; otherwise mu_hat itself,
    rationalized. Returns the semigroup and whether it was snapped.
    """
    unit, aspect = _reference_scale(leading.periods)
    scale = Fraction(leading.nu * unit).limit_denominator(10 ** 12)
    for eigenvalue in periodic_stokes_generators(2, STOKES_COUNT, aspect):
        candidate = float(scale * eigenvalue)
        if abs(leading.mu_hat - candidate) <= SNAP_RELATIVE * candidate:
            logger.info(f"Snapped mu_hat={leading.mu_hat:.6g} to nu*Lambda={candidate:.6g} (Lambda={eigenvalue})")
            return build_semigroup([eigenvalue], scale, n_cap), True
    logger.warning(f"mu_hat={leading.mu_hat:.6g} is not within 5% of any nu*Lambda; using it unsnapped")
    return build_semigroup([1], Fraction(leading.mu_hat).limit_denominator(10 ** 9), n_cap), False


def handoff_field_expansion(leading: LeadingTerm, n_cap: int = 8) -> FieldExpansion:
    """One-term trig FieldExpansion q_1 e^{-mu_1 t} with the simulated mean flow"""
    sg, _ = handoff_semigroup(leading, n_cap)
    term = ExpansionTerm(n=1, time_coeffs=(leading.q1,))
    return FieldExpansion(dim=2, sg=sg, terms={1: term}, order=1, kind="trig",
                          periods=tuple(leading.periods), mean_flow=tuple(leading.mean_flow))
