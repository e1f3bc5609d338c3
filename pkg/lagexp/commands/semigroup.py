from pathlib import Path
from typing import Any, Dict, List

import click
from rich.console import Console
from rich.table import Table

from src.core.errors import InvalidInputError
from src.expansion.semigroup import Semigroup, decompositions, fraction_string, s_index
from src.expansion.serialization import semigroup_from_config, semigroup_to_json
from src.utils.utils import provenance, save_json
from .common import ConfigError, load_run_config, setup_command_logging


def exponent_table(sg: Semigroup) -> List[Dict[str, Any]]:
    """One row per exponent: n, mu_n as fraction and decimal, s_n and decomposition count"""
    rows = []
    for n in range(1, sg.n_cap + 1):
        mu = sg.mu(n)
        rows.append({
            'n': n,
            'mu': fraction_string(mu),
            'mu_decimal': float(mu),
            's_n': s_index(sg, n),
            'decompositions': len(decompositions(sg, n)),
        })
    return rows


@click.command()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False, path_type=Path), required=True,
              help='Run configuration with a semigroup block')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=Path),
              help='Also write semigroup.json here')
@click.option('--order', type=int, help='Number of exponents to list (overrides semigroup.n_cap)')
@click.option('-v', '--verbose', is_flag=True, help='Log at DEBUG level')
def semigroup(config_path, out_dir, order, verbose):
    """List the exponents mu_n of the configured semigroup"""
    logger = setup_command_logging(verbose)
    config = load_run_config(config_path)
    block = config.get('semigroup')
    if block is None:
        raise ConfigError(f"{config_path} has no 'semigroup' block")
    if order is not None:
        block = dict(block, n_cap=order)

    try:
        sg = semigroup_from_config(block)
    except InvalidInputError as e:
        raise ConfigError(str(e))
    rows = exponent_table(sg)

    table = Table(title=f"Exponents generated by {', '.join(str(g) for g in sg.generators)} (nu={sg.nu})")
    table.add_column('n', justify='right')
    table.add_column('mu_n')
    table.add_column('decimal', justify='right')
    table.add_column('s_n', justify='right')
    table.add_column('decompositions', justify='right')
    for row in rows:
        table.add_row(str(row['n']), row['mu'], f"{row['mu_decimal']:.10g}", str(row['s_n']),
                      str(row['decompositions']))
    Console().print(table)

    if out_dir is not None:
        report = {'semigroup': semigroup_to_json(sg), 'table': rows, 'provenance': provenance(config)}
        path = save_json(Path(out_dir) / 'semigroup.json', report)
        logger.info(f"Exponent table written to {path}")
