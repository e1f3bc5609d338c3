from typing import Any, Dict, List
import logging

logger = logging.getLogger("lagexp.step.simulate.environment")


def get_required_variables() -> List[Dict]:
    """
    Define the settings read from the 'simulation' config section

    Returns:
        List[Dict]: List of dictionaries describing each setting
    """
    return [
        {
            'name': 'initial',
            'description': 'Initial condition block (preset, M, nu, ...)'
        },
        {
            'name': 't_end',
            'description': 'Final simulated time',
            'default': 200.0
        },
        {
            'name': 'dt',
            'description': 'Time step; by default the CFL limit of the initial state',
            'required': False
        },
        {
            'name': 'store_stride',
            'description': 'Keep every n-th step for interpolation and extraction',
            'default': 1
        },
        {
            'name': 'cfl',
            'description': 'CFL number',
            'default': 0.5
        },
        {
            'name': 'max_dt',
            'description': 'Upper bound on the automatic time step',
            'default': 0.1
        },
        {
            'name': 'checkpoint_stride',
            'description': 'Write every n-th stored state as a checkpoint (0: last state only)',
            'default': 0
        },
        {
            'name': 'tail',
            'description': 'Fraction of the stored window used for the decay fit',
            'default': 0.5
        },
        {
            'name': 'dominance',
            'description': 'Energy share the lowest shell must hold in the fit window',
            'default': 0.99
        },
        {
            'name': 'n_cap',
            'description': 'Semigroup cap of the handed-off expansion',
            'default': 8
        },
        {
            'name': 'handoff',
            'description': 'Write the one-term field expansion for the expansion step',
            'default': True
        },
        {
            'name': 'interpolation_tolerance',
            'description': 'Warn when the estimated time-interpolation error exceeds this',
            'default': 1e-6
        }
    ]


def validate_variables(settings: Dict[str, Any]) -> bool:
    """
    Validate the resolved simulation settings

    Args:
        settings: Dictionary of resolved settings

    Returns:
        bool: True if all settings are valid, False otherwise
    """
    initial = settings.get('initial')
    if not isinstance(initial, dict) or 'preset' not in initial:
        logger.error("Simulation needs an 'initial' block with a preset")
        return False

    if settings['dt'] is not None and settings['dt'] > settings['t_end']:
        logger.error(f"Time step {settings['dt']} is longer than the run ({settings['t_end']})")
        return False

    if settings['tail'] <= 0 or settings['tail'] > 1:
        logger.error(f"Tail fraction must lie in (0, 1], got {settings['tail']}")
        return False

    return True
