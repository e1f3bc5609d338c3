import os
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional
from dotenv import load_dotenv

logger = logging.getLogger("lagexp.utils.environment")

LOG_LEVEL_VAR = 'LAGEXP_LOG_LEVEL'


class EnvironmentManager:
    """Resolves step settings from the run config and reads the log level from the environment"""

    def __init__(self, env_file_path: Optional[str] = None):
        """
        Initialize environment manager

        Args:
            env_file_path: Path to .env file, defaults to current directory
        """
        self.env_file = Path(env_file_path) if env_file_path else Path('.env')
        self._loaded = False

    def load(self) -> None:
        """Load the .env file once; existing environment variables win"""
        if not self._loaded and self.env_file.exists():
            load_dotenv(dotenv_path=self.env_file, override=False)
            logger.debug(f"Loaded environment from {self.env_file}")
        self._loaded = True

    def log_level(self, default: str = 'INFO') -> str:
        self.load()
        return os.getenv(LOG_LEVEL_VAR, default).upper()

    def resolve_vars(self, required_vars: List[Dict], section: Dict[str, Any]) -> Dict[str, Any]:
        """
        Take each variable from the config section, falling back to its default

        Args:
            required_vars: List of dictionaries describing the step's settings
                Example: [
                    {
                        'name': 'tol',
                        'description': 'Integrator tolerance',
                        'default': 1e-10
                    },
                    {
                        'name': 'horizon',
                        'description': 'Final time of the reference trajectory',
                        'required': False
                    }
                ]
            section: The config section the step reads

        Returns:
            Dictionary with variable names and their resolved values
        """
        values = {}
        for var_config in required_vars:
            name = var_config['name']
            if name in section and section[name] is not None:
                values[name] = section[name]
            elif 'default' in var_config:
                values[name] = var_config['default']
                logger.debug(f"Using default {name}={var_config['default']!r}")
            elif var_config.get('required', True):
                raise KeyError(f"Missing required setting '{name}': {var_config.get('description', '')}")
            else:
                values[name] = None
        return values


def get_environment_manager(env_file_path: Optional[str] = None) -> EnvironmentManager:
    """
    Get or create an EnvironmentManager instance

    Args:
        env_file_path: Optional path to .env file

    Returns:
        EnvironmentManager instance
    """
    if not hasattr(get_environment_manager, 'instance') or \
       (env_file_path and get_environment_manager.instance.env_file != Path(env_file_path)):
        get_environment_manager.instance = EnvironmentManager(env_file_path)
    return get_environment_manager.instance
