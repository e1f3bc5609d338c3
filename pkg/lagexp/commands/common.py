"""
Options, config loading and error mapping shared by the lagexp commands
"""
import functools
from pathlib import Path
from typing import Any, Dict, List, Optional

import click

from src.config.validation import ValidationError
from src.config.yaml_loader import YamlConfigLoader
from src.core.errors import (
    CFLViolationError,
    DerivativeOrderError,
    FieldSchemaError,
    HorizonInsufficientError,
    IndexOutOfRangeError,
    IntegrationError,
    InvalidInputError,
    MissingTermError,
    SimulationBlowupError,
    TransientNotDecayedError,
)
from src.core.orchestrator import StepOrchestrator
from ..utils.environment import resolve_log_level
from ..utils.logger import get_logger

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_OUT = 'out'

# Errors caused by the run config rather than by the computation
CONFIG_ERRORS = (
    ValidationError,
    FieldSchemaError,
    InvalidInputError,
    IndexOutOfRangeError,
    DerivativeOrderError,
    MissingTermError,
)

REMEDIATION = {
    CFLViolationError: "lower simulation.dt or simulation.cfl",
    SimulationBlowupError: "lower simulation.dt; check the initial amplitude and viscosity",
    TransientNotDecayedError: "raise simulation.t_end so the lowest shell dominates",
    HorizonInsufficientError: "raise trajectory.horizon or loosen trajectory.x_tol",
    IntegrationError: "check the velocity field for blow-up along the trajectory",
}


class ConfigError(click.ClickException):
    """Bad config or arguments; exits with status 2"""
    exit_code = EXIT_USAGE


class PipelineError(click.ClickException):
    exit_code = EXIT_FAILED


def common_options(func):
    """--config --out --order --seed --tol and -v, shared by the pipeline commands"""
    @click.option('--config', 'config_path', type=click.Path(dir_okay=False, path_type=Path),
                  required=True, help='Run configuration (YAML or JSON)')
    @click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path),
                  help='Output directory (overrides output.directory)')
    @click.option('--order', type=int, help='Expansion order N (overrides expansion.order)')
    @click.option('--seed', type=int, help='Seed for randomized fixtures and initial conditions')
    @click.option('--tol', type=float, help='Integrator tolerance (overrides expansion.tol and verification.tol)')
    @click.option('-v', '--verbose', is_flag=True, help='Log at DEBUG level')
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)
    return wrapper


def setup_command_logging(verbose: bool, out_dir: Optional[Path] = None):
    """Route all lagexp.* loggers to stderr (and out_dir/lagexp.log)"""
    log_file = Path(out_dir) / 'lagexp.log' if out_dir else None
    logger = get_logger('lagexp', level=resolve_log_level(verbose), log_file=log_file)
    logger.log_environment()
    return logger


def apply_overrides(config: Dict[str, Any], out_dir: Optional[Path] = None, order: Optional[int] = None,
                    seed: Optional[int] = None, tol: Optional[float] = None) -> Dict[str, Any]:
    """Write command-line flags into the config before validation"""
    config = dict(config)
    if out_dir is not None:
        config['output'] = dict(config.get('output', {}), directory=str(out_dir))
    if order is not None:
        config['expansion'] = dict(config.get('expansion', {}), order=order)
    if tol is not None:
        config['expansion'] = dict(config.get('expansion', {}), tol=tol)
        config['verification'] = dict(config.get('verification', {}), tol=tol)
    if seed is not None:
        config['seed'] = seed
        if 'fixture' in config:
            config['fixture'] = dict(config['fixture'], seed=seed)
        initial = config.get('simulation', {}).get('initial')
        if initial is not None and initial.get('preset') == 'random':
            config['simulation'] = dict(config['simulation'], initial=dict(initial, seed=seed))
    return config


def load_run_config(config_path: Path, **overrides) -> Dict[str, Any]:
    """Load the config, apply flag overrides and validate; config problems raise ConfigError"""
    loader = YamlConfigLoader()
    try:
        config = loader.load_file(config_path)
        if not isinstance(config, dict):
            raise ValidationError(f"{config_path} does not contain a mapping")
        config = apply_overrides(config, **overrides)
        loader.validate(config)
    except ValidationError as e:
        raise ConfigError(str(e))
    return config


def output_directory(config: Dict[str, Any]) -> Path:
    return Path(config.get('output', {}).get('directory', DEFAULT_OUT))


def require_mode(config: Dict[str, Any], allowed: List[str], command: str, hint: str = '') -> None:
    if config['mode'] not in allowed:
        message = f"'{command}' does not run in mode '{config['mode']}' (allowed: {', '.join(allowed)})"
        raise ConfigError(f"{message}; {hint}" if hint else message)


def run_pipeline(orchestrator: StepOrchestrator) -> None:
    """Execute the steps; a failed step raises ConfigError or PipelineError with a hint"""
    if orchestrator.execute():
        return
    error = orchestrator.error
    step = orchestrator.failed_step.name if orchestrator.failed_step else 'pipeline'
    if error is None:
        raise PipelineError(f"Step '{step}' failed; rerun with -v for details")
    if isinstance(error, CONFIG_ERRORS):
        raise ConfigError(f"{step}: {error}")
    for error_type, hint in REMEDIATION.items():
        if isinstance(error, error_type):
            raise PipelineError(f"{step}: {error} (hint: {hint})")
    raise PipelineError(f"{step}: {type(error).__name__}: {error}")


def new_orchestrator(config: Dict[str, Any], config_path: Path, command: str) -> StepOrchestrator:
    orchestrator = StepOrchestrator(config, output_directory(config), command)
    orchestrator.context['config_dir'] = Path(config_path).resolve().parent
    return orchestrator
