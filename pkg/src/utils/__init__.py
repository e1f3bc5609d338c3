"""
Utilities package for lagexp
"""
from .environment import get_environment_manager, EnvironmentManager
from .utils import (
    canonical_json,
    config_hash,
    save_json,
    load_json,
    write_csv,
    module_versions,
    provenance,
    missing_modules
)

__all__ = [
    'get_environment_manager',
    'EnvironmentManager',
    'canonical_json',
    'config_hash',
    'save_json',
    'load_json',
    'write_csv',
    'module_versions',
    'provenance',
    'missing_modules'
]
