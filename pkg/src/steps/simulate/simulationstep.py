"""
Simulate a decaying 2D periodic flow, checkpoint it and extract its leading term
"""
from pathlib import Path
from typing import Any, Dict, List

from ...config.validation import ValidationError
from ...core.base import PipelineStep
from ...expansion.serialization import field_expansion_to_json, semigroup_to_json
from ...spectral2d.checkpoint import write_checkpoint
from ...spectral2d.extraction import extract_leading_term, handoff_field_expansion, handoff_semigroup
from ...spectral2d.initial import initial_state
from ...spectral2d.interpolation import VelocityInterpolator, interpolation_error_estimate
from ...spectral2d.solver import energy_series, simulate
from ...utils.utils import provenance, save_json, write_csv
from .dependencies import check_simulation_dependencies
from .environment import get_required_variables, validate_variables


class SimulationStep(PipelineStep):
    """Runs the spectral solver and hands the extracted (mu_1, q_1) to later steps"""

    section = 'simulation'

    def __init__(self):
        super().__init__("simulate")
        self.required_vars = get_required_variables()

    def _check_dependencies(self) -> List[str]:
        return check_simulation_dependencies()

    def _validate_settings(self, settings: Dict[str, Any]) -> None:
        if not validate_variables(settings):
            raise ValidationError("Invalid simulation settings", 'simulation')

    def _write_checkpoints(self, states, stride: int, out_dir: Path) -> int:
        directory = out_dir / 'checkpoints'
        indices = list(range(0, len(states), stride)) if stride else []
        if len(states) - 1 not in indices:
            indices.append(len(states) - 1)
        for index in indices:
            write_checkpoint(states[index], directory, index)
        self.logger.info(f"Wrote {len(indices)} checkpoints to {directory}")
        return len(indices)

    def _run(self, settings: Dict[str, Any], context: Dict[str, Any]) -> bool:
        out_dir = Path(context['out_dir'])
        config = context['config']

        initial = initial_state(settings['initial'])
        states = simulate(initial, settings['t_end'], dt=settings['dt'],
                          store_stride=settings['store_stride'], cfl=settings['cfl'],
                          max_dt=settings['max_dt'])
        context['states'] = states
        context['velocity'] = VelocityInterpolator(states)
        context['t_max'] = states[-1].t

        n_checkpoints = self._write_checkpoints(states, settings['checkpoint_stride'], out_dir)
        energy = energy_series(states)
        context['outputs']['energy'] = write_csv(out_dir / 'energy.csv', ['t', 'energy'],
                                                 [(float(t), float(e)) for t, e in energy])

        interpolation_error = interpolation_error_estimate(states)
        if interpolation_error > settings['interpolation_tolerance']:
            self.logger.warning(
                f"Estimated time-interpolation error {interpolation_error:.2e} exceeds "
                f"{settings['interpolation_tolerance']:g}; lower store_stride"
            )

        leading = extract_leading_term(states, tail=settings['tail'], dominance=settings['dominance'])
        sg, snapped = handoff_semigroup(leading, settings['n_cap'])
        fe = handoff_field_expansion(leading, settings['n_cap'])
        context['field_expansion'] = fe
        context['leading'] = leading

        report = {
            'leading': leading.to_json(),
            'snapped': snapped,
            'semigroup': semigroup_to_json(sg),
            'stored_states': len(states),
            'checkpoints': n_checkpoints,
            'interpolation_error_estimate': interpolation_error,
            'final_energy': states[-1].energy(),
            'mean_flow_drift': max(abs(a - b) for a, b in zip(states[-1].mean_flow, initial.mean_flow)),
            'config': settings,
            'provenance': provenance(config),
        }
        context['outputs']['extraction'] = save_json(out_dir / 'extraction.json', report)
        if settings['handoff']:
            handoff = {'semigroup': semigroup_to_json(sg), 'field': field_expansion_to_json(fe)}
            context['outputs']['handoff'] = save_json(out_dir / 'handoff_field.json', handoff)

        context['results']['simulate'] = [
            f"stored states: {len(states)} up to t={states[-1].t:g}",
            f"mu_hat: {leading.mu_hat:.8g} (shell |k|^2={leading.shell:g}, r2={leading.fit.r2:.8f})",
            f"snapped to Stokes eigenvalue: {'yes' if snapped else 'no'}",
            f"dominance: {leading.dominance:.6f}",
            f"t_ref sensitivity: {leading.t_ref_sensitivity:.2e}",
            f"interpolation error estimate: {interpolation_error:.2e}",
        ]
        return True
