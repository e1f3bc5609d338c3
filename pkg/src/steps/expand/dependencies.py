import logging
from typing import List

from ...utils.utils import missing_modules

logger = logging.getLogger("lagexp.step.expand.dependencies")

REQUIRED_MODULES = ['numpy', 'scipy.integrate']


def check_expansion_dependencies() -> List[str]:
    """
    Check the packages the expansion engine and limit oracle need

    Returns:
        List[str]: Modules that failed to import
    """
    missing = missing_modules(REQUIRED_MODULES)
    if missing:
        logger.warning(f"Cannot import: {', '.join(missing)}")
    return missing
