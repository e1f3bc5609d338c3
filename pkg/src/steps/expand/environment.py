from typing import Any, Dict, List
import logging

logger = logging.getLogger("lagexp.step.expand.environment")


def get_required_variables() -> List[Dict]:
    """
    Define the settings read from the 'expansion' config section

    Returns:
        List[Dict]: List of dictionaries describing each setting
    """
    return [
        {
            'name': 'order',
            'description': 'Expansion order N; defaults to the number of known field terms',
            'required': False
        },
        {
            'name': 'tol',
            'description': 'Integrator tolerance for the limit-point oracle',
            'default': 1e-10
        }
    ]


def get_trajectory_variables() -> List[Dict]:
    """Settings of the 'trajectory' section shared by the expansion and verification steps"""
    return [
        {
            'name': 'x0',
            'description': 'Initial particle position',
            'required': False
        },
        {
            'name': 't0',
            'description': 'Initial time',
            'default': 0.0
        },
        {
            'name': 'x_star',
            'description': 'Known limit point; skips the oracle estimate',
            'required': False
        },
        {
            'name': 'horizon',
            'description': 'Final time of the limit-point trajectory',
            'required': False
        },
        {
            'name': 'x_tol',
            'description': 'Largest acceptable a posteriori bound on x*',
            'required': False
        }
    ]


def validate_variables(settings: Dict[str, Any], trajectory: Dict[str, Any]) -> bool:
    """
    Validate the resolved expansion and trajectory settings

    Args:
        settings: Resolved 'expansion' settings
        trajectory: Resolved 'trajectory' settings

    Returns:
        bool: True if all settings are valid, False otherwise
    """
    if trajectory['x_star'] is None and trajectory['x0'] is None:
        logger.error("Either trajectory.x_star or trajectory.x0 is needed to fix the limit point")
        return False

    if settings['order'] is not None and settings['order'] < 0:
        logger.error(f"Expansion order must be non-negative, got {settings['order']}")
        return False

    return True
