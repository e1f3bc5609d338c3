from typing import Any, Dict, List
import logging

logger = logging.getLogger("lagexp.step.verify.environment")


def get_required_variables() -> List[Dict]:
    """
    Define the settings read from the 'verification' config section

    Returns:
        List[Dict]: List of dictionaries describing each setting
    """
    return [
        {
            'name': 'tol',
            'description': 'Reference integrator tolerance; also sets the noise floor',
            'default': 1e-10
        },
        {
            'name': 'horizon',
            'description': 'Final time; by default e^(-mu_1 t) reaches 1e-9',
            'required': False
        },
        {
            'name': 'n_grid',
            'description': 'Number of log-spaced sample times',
            'default': 2000
        },
        {
            'name': 'tail_fraction',
            'description': 'Part of the above-floor window used for slope fits',
            'default': 0.5
        },
        {
            'name': 'orders',
            'description': 'Truncation orders to check; all computed orders by default',
            'required': False
        },
        {
            'name': 'fault',
            'description': 'Inject {n, delta} into zeta_n before verifying',
            'required': False
        }
    ]


def validate_variables(settings: Dict[str, Any]) -> bool:
    """
    Validate the resolved verification settings

    Args:
        settings: Dictionary of resolved settings

    Returns:
        bool: True if all settings are valid, False otherwise
    """
    if not 0 < settings['tail_fraction'] <= 1:
        logger.error(f"tail_fraction must lie in (0, 1], got {settings['tail_fraction']}")
        return False

    fault = settings['fault']
    if fault is not None and ('n' not in fault or 'delta' not in fault):
        logger.error("A fault needs both 'n' and 'delta'")
        return False

    return True
