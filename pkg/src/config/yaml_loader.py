import os
import json
import logging
from pathlib import Path
from typing import Dict, Any, Optional
import yaml
from jsonschema import Draft7Validator

from .validation import ValidationError, validate_run_config

logger = logging.getLogger("lagexp.config")

SCHEMA_DIR = Path(__file__).parent / "schemas"

# Config section -> schema validating it, besides the top-level run schema
SECTION_SCHEMAS = {
    'field': 'field_schema.json',
    'simulation': 'simulation_schema.json',
}


class YamlConfigLoader:
    """Loads and validates YAML (or JSON) run configurations"""

    def __init__(self, schema_dir: Optional[Path] = None):
        self.schema_dir = Path(schema_dir) if schema_dir else SCHEMA_DIR

    def _replace_env_vars(self, value: Any) -> Any:
        """Replace environment variables in string values"""
        if isinstance(value, str):
            # Replace ${VAR} with environment variable
            if value.startswith("${") and value.endswith("}"):
                env_var = value[2:-1]
                return os.environ.get(env_var, value)
            return value
        elif isinstance(value, dict):
            return {k: self._replace_env_vars(v) for k, v in value.items()}
        elif isinstance(value, list):
            return [self._replace_env_vars(v) for v in value]
        return value

    def load_file(self, config_file: Path) -> Any:
        """Parse a YAML or JSON file with ${VAR} substitution"""
        config_file = Path(config_file)
        if not config_file.exists():
            raise ValidationError(f"Config file not found: {config_file}")
        with open(config_file, 'r') as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ValidationError(f"Error parsing {config_file.name}: {str(e)}")
        return self._replace_env_vars(data)

    def load_config(self, config_file: Path) -> Dict[str, Any]:
        """Load, substitute and validate a run config"""
        config = self.load_file(config_file)
        if not isinstance(config, dict):
            raise ValidationError(f"{config_file} does not contain a mapping")
        self.validate(config)
        logger.debug(f"Loaded run config '{config.get('name', config_file)}' ({config['mode']})")
        return config

    def load_schema(self, schema_file: str) -> Dict[str, Any]:
        schema_path = self.schema_dir / schema_file
        if not schema_path.exists():
            raise ValidationError(f"Schema file not found: {schema_path}")
        with open(schema_path, 'r') as f:
            try:
                return json.load(f)
            except json.JSONDecodeError as e:
                raise ValidationError(f"Error parsing schema {schema_file}: {str(e)}")

    def validate_schema(self, instance: Any, schema_file: str, path: str = None) -> None:
        """Validate against a JSON schema, reporting the first error by location"""
        validator = Draft7Validator(self.load_schema(schema_file))
        errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.path))
        if errors:
            first = errors[0]
            location = '.'.join(str(p) for p in first.path)
            if path:
                location = f"{path}.{location}" if location else path
            raise ValidationError(f"Configuration validation failed: {first.message}", location or None)

    def validate(self, config: Dict[str, Any]) -> None:
        self.validate_schema(config, 'run_config_schema.json')
        for section, schema_file in SECTION_SCHEMAS.items():
            if section in config:
                self.validate_schema(config[section], schema_file, section)
        validate_run_config(config)
