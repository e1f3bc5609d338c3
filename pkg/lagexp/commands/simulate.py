import click
from rich.console import Console
from rich.table import Table

from src.steps.simulate import SimulationStep
from .common import (
    common_options,
    load_run_config,
    new_orchestrator,
    output_directory,
    require_mode,
    run_pipeline,
    setup_command_logging,
)


@click.command()
@common_options
def simulate(config_path, out_dir, order, seed, tol, verbose):
    """Simulate a decaying 2D flow, write checkpoints and extract (mu_1, q_1)"""
    config = load_run_config(config_path, out_dir=out_dir, order=order, seed=seed, tol=tol)
    require_mode(config, ['simulate-2d'], 'simulate')
    logger = setup_command_logging(verbose, output_directory(config))

    orchestrator = new_orchestrator(config, config_path, 'simulate')
    orchestrator.add_step(SimulationStep())
    run_pipeline(orchestrator)

    leading = orchestrator.context['leading']
    table = Table(title="Leading term")
    table.add_column('quantity')
    table.add_column('value', justify='right')
    table.add_row('mu_hat', f"{leading.mu_hat:.8g}")
    table.add_row('nu |k|^2', f"{leading.nu * leading.shell:.8g}")
    table.add_row('shell |k|^2', f"{leading.shell:g}")
    table.add_row('dominance', f"{leading.dominance:.6f}")
    table.add_row('fit r2', f"{leading.fit.r2:.8f}")
    table.add_row('t_ref sensitivity', f"{leading.t_ref_sensitivity:.2e}")
    Console().print(table)
    for label, path in sorted(orchestrator.context['outputs'].items()):
        logger.info(f"{label}: {path}")
