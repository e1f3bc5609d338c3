"""
Resolve the velocity expansion, fix the limit point and compute zeta_1..zeta_N
"""
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from ...config.validation import ValidationError
from ...config.yaml_loader import YamlConfigLoader
from ...core.base import PipelineStep
from ...expansion.engine import compute_expansion
from ...expansion.field import FieldExpansion, eval_velocity, random_field_expansion
from ...expansion.semigroup import fraction_string
from ...expansion.serialization import (
    field_expansion_from_json,
    scalar_from_json,
    semigroup_from_config,
    trajectory_expansion_to_json,
)
from ...oracle.integrator import integrate_trajectory
from ...oracle.limit import estimate_limit
from ...oracle.verification import default_horizon
from ...utils.environment import get_environment_manager
from ...utils.utils import provenance, save_json
from .dependencies import check_expansion_dependencies
from .environment import get_required_variables, get_trajectory_variables, validate_variables


def load_field_expansion(config: Dict[str, Any], base_dir: Path = None) -> FieldExpansion:
    """
    Build the velocity expansion a run config describes.

    ``field_file`` points at a JSON document with ``semigroup`` and ``field``
    blocks (the simulation hand-off format); otherwise the inline
    ``semigroup`` block is combined with ``field`` or a seeded ``fixture``.
    """
    loader = YamlConfigLoader()
    if 'field_file' in config:
        path = Path(config['field_file'])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        data = loader.load_file(path)
        if not isinstance(data, dict) or 'semigroup' not in data or 'field' not in data:
            raise ValidationError(f"{path} needs 'semigroup' and 'field' blocks", 'field_file')
        loader.validate_schema(data['field'], 'field_schema.json', 'field')
        return field_expansion_from_json(data['field'], semigroup_from_config(data['semigroup']))

    sg = semigroup_from_config(config['semigroup'])
    if config['mode'] == 'fixture':
        fixture = config['fixture']
        seed = fixture.get('seed', config.get('seed', 0))
        rng = np.random.default_rng(seed)
        return random_field_expansion(
            rng, fixture['dim'], sg, fixture['order'],
            max_time_degree=fixture.get('max_time_degree', 1),
            max_space_degree=fixture.get('max_space_degree', 2),
        )
    return field_expansion_from_json(config['field'], sg)


class ExpansionStep(PipelineStep):
    """Computes the trajectory expansion and writes expansion.json"""

    section = 'expansion'

    def __init__(self):
        super().__init__("expand")
        self.required_vars = get_required_variables()

    def _check_dependencies(self) -> List[str]:
        return check_expansion_dependencies()

    def _trajectory_settings(self, context: Dict[str, Any]) -> Dict[str, Any]:
        section = context['config'].get('trajectory', {})
        trajectory = get_environment_manager().resolve_vars(get_trajectory_variables(), section)
        context.setdefault('resolved', {})['trajectory'] = trajectory
        return trajectory

    def _limit_point(self, fe: FieldExpansion, velocity, trajectory: Dict[str, Any],
                     tol: float, context: Dict[str, Any]):
        """Configured x* (exact when given as integers or "p/q"), else the oracle estimate"""
        if trajectory['x_star'] is not None:
            self.logger.info("Using the configured limit point")
            return tuple(scalar_from_json(c) for c in trajectory['x_star']), {'source': 'config'}

        mu1 = fe.sg.mu(1)
        t0 = trajectory['t0']
        horizon = trajectory['horizon'] or default_horizon(float(mu1), t0)
        t_max = context.get('t_max')
        if t_max is not None and horizon > t_max:
            self.logger.warning(f"Horizon {horizon:g} is beyond the simulated window; using t={t_max:g}")
            horizon = t_max
        samples = integrate_trajectory(velocity, trajectory['x0'], t0, horizon, tol=tol)
        limit = estimate_limit(samples.comoving(fe.mean_flow), mu1, trajectory['x_tol'])
        info = {'source': 'oracle', 'limit': limit.to_json(), 'integrator': samples.stats()}
        return tuple(float(c) for c in limit.x_star), info

    def _run(self, settings: Dict[str, Any], context: Dict[str, Any]) -> bool:
        config = context['config']
        trajectory = self._trajectory_settings(context)
        if not validate_variables(settings, trajectory):
            raise ValidationError("Invalid expansion settings", 'expansion')

        fe = context.get('field_expansion')
        if fe is None:
            fe = load_field_expansion(config, context.get('config_dir'))
            context['field_expansion'] = fe
        velocity = context.get('velocity')
        if velocity is None:
            def velocity(x, t):
                return eval_velocity(fe, x, t, fe.order)
            context['velocity'] = velocity

        if trajectory['x0'] is not None and len(trajectory['x0']) != fe.dim:
            raise ValidationError(f"x0 must have {fe.dim} components", 'trajectory.x0')

        order = settings['order'] if settings['order'] is not None else min(fe.order, fe.sg.n_cap)
        x_star, limit_info = self._limit_point(fe, velocity, trajectory, settings['tol'], context)
        te = compute_expansion(fe, x_star, order)
        context['expansion'] = te
        context['x0'] = trajectory['x0']
        context['t0'] = trajectory['t0']

        resolved = {'expansion': dict(settings, order=order), 'trajectory': trajectory}
        report = trajectory_expansion_to_json(te, provenance(config, {'limit_point': limit_info,
                                                                      'settings': resolved}), fe=fe)
        context['outputs']['expansion'] = save_json(Path(context['out_dir']) / 'expansion.json', report)

        lines = [f"order N={order}, {'exact' if te.exact else 'float'} arithmetic",
                 f"x*: {report['x_star']} ({limit_info['source']})"]
        for n in sorted(te.zetas):
            lines.append(f"mu_{n} = {fraction_string(te.sg.mu(n))}: zeta_{n} degree {te.zetas[n].degree}, "
                         f"residual {te.residuals.get(n, 0.0):.1e}")
        context['results']['expand'] = lines
        return True
