import logging
from typing import List

from ...utils.utils import missing_modules

logger = logging.getLogger("lagexp.step.verify.dependencies")

REQUIRED_MODULES = ['numpy', 'scipy.integrate']


def check_verification_dependencies() -> List[str]:
    """
    Check the packages the trajectory oracle needs

    Returns:
        List[str]: Modules that failed to import
    """
    missing = missing_modules(REQUIRED_MODULES)
    if not missing:
        from scipy.integrate import DOP853
        logger.debug(f"Reference integrator: {DOP853.__name__}")
    return missing
