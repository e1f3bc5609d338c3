from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from src.config.fixtures import available_fixtures, write_fixtures
from src.config.validation import ValidationError
from .common import ConfigError, setup_command_logging


@click.command()
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=Path('fixtures'),
              show_default=True, help='Directory receiving the rendered configs')
@click.option('--seed', type=int, default=0, show_default=True, help='Seed written into randomized fixtures')
@click.option('--name', 'names', multiple=True, help='Fixture to render (repeatable); all by default')
@click.option('--list', 'list_only', is_flag=True, help='Only list the packaged fixtures')
@click.option('-v', '--verbose', is_flag=True, help='Log at DEBUG level')
def fixtures(out_dir, seed, names, list_only, verbose):
    """Render the packaged fixture run configs"""
    logger = setup_command_logging(verbose)
    if list_only:
        for name in available_fixtures():
            click.echo(name)
        return

    try:
        written = write_fixtures(out_dir, seed, list(names) or None)
    except ValidationError as e:
        raise ConfigError(str(e))

    table = Table(title=f"Fixtures (seed {seed})")
    table.add_column('fixture')
    table.add_column('config')
    for path in written:
        table.add_row(path.stem, str(path))
    Console().print(table)
    logger.info(f"Rendered {len(written)} fixtures into {out_dir}")
