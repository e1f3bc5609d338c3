"""
Shared helpers for the pipeline steps: JSON/CSV output, config hashing
and version stamps
"""
import csv
import json
import hashlib
import logging
import importlib
from fractions import Fraction
from typing import Dict, Any, Iterable, List, Optional, Sequence
from pathlib import Path

logger = logging.getLogger("lagexp.utils")

PACKAGE_VERSION = "0.1.0"
VERSIONED_MODULES = ['numpy', 'scipy', 'yaml', 'jsonschema', 'click']


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if hasattr(value, 'tolist'):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def canonical_json(data: Any) -> str:
    """Key-sorted compact JSON, the input to config hashes"""
    return json.dumps(data, sort_keys=True, separators=(',', ':'), default=_default)


def config_hash(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode('utf-8')).hexdigest()


def save_json(path: Path, data: Dict[str, Any]) -> Path:
    """
    Save a report as indented, key-sorted JSON

    Args:
        path: Output file
        data: Report dictionary

    Returns:
        The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True, default=_default)
        f.write('\n')
    logger.debug(f"Wrote {path}")
    return path


def load_json(path: Path) -> Dict[str, Any]:
    """
    Load a JSON file

    Args:
        path: Path to the file

    Returns:
        Parsed dictionary
    """
    with open(path, 'r') as f:
        return json.load(f)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]],
              comment: Optional[str] = None) -> Path:
    """Write rows with round-trip float formatting and an optional leading '#' comment"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        if comment:
            f.write(f"# {comment}\n")
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return path


def module_versions() -> Dict[str, str]:
    """Versions of lagexp and its numerical dependencies, for report provenance"""
    versions = {'lagexp': PACKAGE_VERSION}
    for name in VERSIONED_MODULES:
        try:
            module = importlib.import_module(name)
            versions[name] = getattr(module, '__version__', 'unknown')
        except ImportError:
            versions[name] = 'missing'
    return versions


def provenance(config: Dict[str, Any], extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    block = {'config_hash': config_hash(config), 'versions': module_versions()}
    block.update(extra or {})
    return block


def missing_modules(names: Sequence[str]) -> List[str]:
    """Names from ``names`` that fail to import"""
    missing = []
    for name in names:
        try:
            importlib.import_module(name)
        except ImportError:
            missing.append(name)
    return missing
