#!/usr/bin/env python3
import click
import importlib
import sys
from .utils.environment import resolve_log_level
from .utils.logger import get_logger

__version__ = "0.1.0"

logger = get_logger("lagexp", level=resolve_log_level())


@click.group()
@click.version_option(__version__, prog_name="lagexp")
def cli():
    """Asymptotic expansions of Lagrangian trajectories in decaying flows"""
    logger.debug("Starting lagexp CLI")

    dependencies = ['numpy', 'scipy', 'yaml', 'jsonschema']
    dependency_status = logger.check_dependencies(dependencies)
    for name, available in dependency_status.items():
        if not available:
            click.echo(f"WARNING: {name} is not importable; install the packages in requirements.txt", err=True)


commands_to_import = [
    ('semigroup', '.commands.semigroup'),
    ('expand', '.commands.expand'),
    ('verify', '.commands.verify'),
    ('simulate', '.commands.simulate'),
    ('fixtures', '.commands.fixtures'),
]

for cmd_name, module_path in commands_to_import:
    try:
        module = importlib.import_module(module_path, package='lagexp')
        cli.add_command(getattr(module, cmd_name))
    except ImportError as e:
        logger.error(f"Failed to import {cmd_name} command: {e}")
    except Exception as e:
        logger.exception(e, f"Error importing {cmd_name} command")

if __name__ == "__main__":
    try:
        cli()
    except Exception as e:
        logger.exception(e, "Unhandled exception in CLI")
        sys.exit(1)
