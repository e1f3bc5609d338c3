"""
Validation utilities for run configurations.

JSON Schema covers shapes and types; the checks here cover what the schema
cannot express (cross-field consistency, rational strings).
"""
from fractions import Fraction
from typing import Any, Dict, Optional


class ValidationError(Exception):
    """Raised when configuration validation fails."""
    def __init__(self, message: str, path: str = None):
        self.message = message
        self.path = path
        super().__init__(f"{message} (at {path})" if path else message)


def validate_required(value: Any, field_name: str, path: str = None) -> None:
    """Validate that a required field is present and not None."""
    if value is None:
        raise ValidationError(f"Required field '{field_name}' is missing", path)


def validate_positive(value: Any, field_name: str, path: str = None) -> None:
    """Validate that a field is a number greater than zero."""
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise ValidationError(f"Field '{field_name}' must be a positive number", path)


def validate_fraction(value: Any, field_name: str, path: str = None) -> Fraction:
    """Validate an exact rational given as an int or a "p/q" string."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"Field '{field_name}' must be an integer or a \"p/q\" string", path)
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"Field '{field_name}' is not a rational number: {value!r}", path)


def validate_vector(value: Any, field_name: str, dim: int, path: str = None) -> None:
    """Validate that a field is a list of ``dim`` components."""
    if not isinstance(value, list) or len(value) != dim:
        raise ValidationError(f"Field '{field_name}' must be a list of {dim} components", path)


def validate_run_config(config: Dict[str, Any]) -> None:
    """Cross-field checks of a schema-valid run config."""
    mode = config['mode']
    trajectory = config.get('trajectory', {})

    if mode == 'analytic-field' and 'field' not in config and 'field_file' not in config:
        raise ValidationError("Mode 'analytic-field' needs a 'field' block or a 'field_file'", 'field')
    if mode == 'fixture' and 'fixture' not in config:
        raise ValidationError("Mode 'fixture' needs a 'fixture' block", 'fixture')
    if mode == 'simulate-2d' and 'simulation' not in config:
        raise ValidationError("Mode 'simulate-2d' needs a 'simulation' block", 'simulation')

    if mode != 'simulate-2d' and 'field_file' not in config:
        validate_required(config.get('semigroup'), 'semigroup', 'semigroup')
        semigroup = config['semigroup']
        for i, g in enumerate(semigroup.get('generators', [])):
            validate_fraction(g, 'generators', f"semigroup.generators[{i}]")
        if 'nu' in semigroup:
            validate_fraction(semigroup['nu'], 'nu', 'semigroup.nu')

    dim = _config_dim(config)
    if dim is not None:
        for key in ('x0', 'x_star'):
            if key in trajectory:
                validate_vector(trajectory[key], key, dim, f"trajectory.{key}")

    fault = config.get('verification', {}).get('fault')
    order = config.get('expansion', {}).get('order')
    if fault and order is not None and fault['n'] > order:
        raise ValidationError(f"Fault order {fault['n']} exceeds the expansion order {order}",
                              'verification.fault.n')


def _config_dim(config: Dict[str, Any]) -> Optional[int]:
    if 'field' in config:
        return config['field'].get('dim')
    if 'fixture' in config:
        return config['fixture'].get('dim')
    if config['mode'] == 'simulate-2d':
        return 2
    return None
