"""
Check every truncation order of the computed expansion against the trajectory oracle
"""
from pathlib import Path
from typing import Any, Dict, List

from ...config.validation import ValidationError
from ...core.base import PipelineStep
from ...expansion.engine import perturb_zeta
from ...expansion.serialization import field_hash, trajectory_expansion_from_json
from ..expand.expansionstep import load_field_expansion
from ...oracle.verification import default_horizon, verify_expansion, write_error_curves
from ...utils.utils import config_hash, load_json, provenance, save_json
from .dependencies import check_verification_dependencies
from .environment import get_required_variables, validate_variables


class VerificationStep(PipelineStep):
    """Runs verify_expansion and writes verification.json and error_curves.csv"""

    section = 'verification'

    def __init__(self):
        super().__init__("verify")
        self.required_vars = get_required_variables()

    def _check_dependencies(self) -> List[str]:
        return check_verification_dependencies()

    def _validate_settings(self, settings: Dict[str, Any]) -> None:
        if not validate_variables(settings):
            raise ValidationError("Invalid verification settings", 'verification')

    def _expansion(self, context: Dict[str, Any]):
        te = context.get('expansion')
        if te is not None:
            return te
        path = context['config'].get('expansion_file')
        if path is None:
            raise ValidationError("No expansion computed and no 'expansion_file' given", 'expansion_file')
        path = Path(path)
        if context.get('config_dir') is not None and not path.is_absolute():
            path = Path(context['config_dir']) / path
        te = trajectory_expansion_from_json(load_json(path))
        context['expansion'] = te
        return te

    def _horizon(self, settings: Dict[str, Any], mu1: float, t0: float, context: Dict[str, Any]) -> float:
        horizon = settings['horizon'] or default_horizon(mu1, t0)
        t_max = context.get('t_max')
        if t_max is not None and horizon > t_max:
            self.logger.warning(f"Horizon {horizon:g} is beyond the simulated window; using t={t_max:g}")
            horizon = t_max
        return horizon

    def _run(self, settings: Dict[str, Any], context: Dict[str, Any]) -> bool:
        config = context['config']
        te = self._expansion(context)
        fe = context.get('field_expansion')
        if fe is None:
            fe = load_field_expansion(config, context.get('config_dir'))
            context['field_expansion'] = fe
        x0 = context.get('x0') or config.get('trajectory', {}).get('x0')
        if x0 is None:
            raise ValidationError("Verification needs trajectory.x0", 'trajectory.x0')
        t0 = context.get('t0', config.get('trajectory', {}).get('t0', 0.0))

        fault = settings['fault']
        if fault is not None:
            te = perturb_zeta(te, fault['n'], fault['delta'])

        horizon = self._horizon(settings, float(te.sg.mu(1)), t0, context)
        report = verify_expansion(
            fe, te, x0, horizon=horizon, tol=settings['tol'], t0=t0,
            velocity=context.get('velocity'), orders=settings['orders'],
            n_grid=settings['n_grid'], tail_fraction=settings['tail_fraction'],
        )
        report.fault = fault
        context['verification'] = report

        out_dir = Path(context['out_dir'])
        fingerprint = field_hash(fe)
        data = report.to_json()
        data['config'] = settings
        data['provenance'] = provenance(config, {'field_hash': fingerprint})
        context['outputs']['verification'] = save_json(out_dir / 'verification.json', data)
        header = {
            'config_hash': config_hash(config),
            'field_hash': fingerprint,
            'tol': settings['tol'],
            'noise_floor': report.settings['noise_floor'],
        }
        context['outputs']['error_curves'] = write_error_curves(out_dir / 'error_curves.csv', report, header)

        lines = [f"x* bound: {report.limit.bound:.3e} at t_end={report.limit.t_end:g}"]
        if fault is not None:
            lines.append(f"fault injected: zeta_{fault['n']} + {fault['delta']:g}")
        for result in report.orders:
            slope = f"{result.fit.slope:.4f}" if result.fit else "n/a"
            lines.append(f"N={result.N}: {result.status} (slope {slope}, required {result.required_slope:.4f})")
        lines.append(f"overall: {'pass' if report.passed else 'FAIL'}")
        context['results']['verify'] = lines
        return True
