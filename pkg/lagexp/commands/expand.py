import click
from rich.console import Console
from rich.table import Table

from src.expansion.polyvec import poly_eval
from src.expansion.semigroup import fraction_string
from src.steps.expand import ExpansionStep
from .common import (
    common_options,
    load_run_config,
    new_orchestrator,
    output_directory,
    require_mode,
    run_pipeline,
    setup_command_logging,
)


def zeta_table(te) -> Table:
    table = Table(title=f"Trajectory expansion to N={te.N} ({'exact' if te.exact else 'float'})")
    table.add_column('n', justify='right')
    table.add_column('mu_n')
    table.add_column('degree', justify='right')
    table.add_column('zeta_n(0)')
    for n in sorted(te.zetas):
        zeta = te.zetas[n]
        value = poly_eval(zeta, 0)
        table.add_row(str(n), fraction_string(te.sg.mu(n)), str(zeta.degree),
                      ', '.join(str(c) for c in value))
    return table


@click.command()
@common_options
def expand(config_path, out_dir, order, seed, tol, verbose):
    """Compute the trajectory expansion zeta_1..zeta_N for a configured velocity field"""
    config = load_run_config(config_path, out_dir=out_dir, order=order, seed=seed, tol=tol)
    require_mode(config, ['analytic-field', 'fixture'], 'expand',
                 hint="run 'lagexp simulate' and point field_file at its handoff_field.json")
    logger = setup_command_logging(verbose, output_directory(config))

    orchestrator = new_orchestrator(config, config_path, 'expand')
    orchestrator.add_step(ExpansionStep())
    run_pipeline(orchestrator)

    te = orchestrator.context['expansion']
    Console().print(zeta_table(te))
    logger.info(f"Expansion written to {orchestrator.context['outputs']['expansion']}")
