import logging
from typing import List

from ...utils.utils import missing_modules

logger = logging.getLogger("lagexp.step.simulate.dependencies")

REQUIRED_MODULES = ['numpy']


def check_simulation_dependencies() -> List[str]:
    """
    Check the packages the spectral solver needs

    Returns:
        List[str]: Modules that failed to import
    """
    missing = missing_modules(REQUIRED_MODULES)
    if not missing:
        import numpy
        logger.debug(f"numpy {numpy.__version__} available, FFT backend numpy.fft")
    return missing
