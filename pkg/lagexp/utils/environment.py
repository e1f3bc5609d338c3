import logging

from src.utils.environment import get_environment_manager


def resolve_log_level(verbose: bool = False) -> int:
    """DEBUG under --verbose, otherwise LAGEXP_LOG_LEVEL from the environment or .env"""
    if verbose:
        return logging.DEBUG
    name = get_environment_manager().log_level()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.INFO
