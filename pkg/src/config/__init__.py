"""
Run configuration: loading, schema validation and packaged fixture templates
"""
from .validation import ValidationError
from .yaml_loader import YamlConfigLoader

__all__ = ['ValidationError', 'YamlConfigLoader']
