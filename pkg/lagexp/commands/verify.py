import click
from rich.console import Console
from rich.table import Table

from src.steps.expand import ExpansionStep
from src.steps.simulate import SimulationStep
from src.steps.verify import VerificationStep
from .common import (
    EXIT_FAILED,
    common_options,
    load_run_config,
    new_orchestrator,
    output_directory,
    run_pipeline,
    setup_command_logging,
)


def verification_table(report) -> Table:
    table = Table(title=f"Verification (x* bound {report.limit.bound:.2e})")
    table.add_column('N', justify='right')
    table.add_column('status')
    table.add_column('slope', justify='right')
    table.add_column('required', justify='right')
    table.add_column('target', justify='right')
    table.add_column('sup error', justify='right')
    for result in report.orders:
        slope = f"{result.fit.slope:.4f}" if result.fit else 'n/a'
        target = f"{result.target_slope:.4f}" if result.target_slope is not None else '-'
        style = 'green' if result.passed else 'red'
        table.add_row(str(result.N), f"[{style}]{result.status}[/{style}]", slope,
                      f"{result.required_slope:.4f}", target, f"{result.sup_error:.3e}")
    return table


@click.command()
@common_options
@click.pass_context
def verify(ctx, config_path, out_dir, order, seed, tol, verbose):
    """Verify each truncation order against the reference trajectory; exit 1 on any failure"""
    config = load_run_config(config_path, out_dir=out_dir, order=order, seed=seed, tol=tol)
    logger = setup_command_logging(verbose, output_directory(config))

    orchestrator = new_orchestrator(config, config_path, 'verify')
    if config['mode'] == 'simulate-2d':
        orchestrator.add_step(SimulationStep())
    if config['mode'] == 'simulate-2d' or 'expansion_file' not in config:
        orchestrator.add_step(ExpansionStep())
    orchestrator.add_step(VerificationStep())
    run_pipeline(orchestrator)

    report = orchestrator.context['verification']
    Console().print(verification_table(report))
    if not report.passed:
        logger.error(f"Verification failed at orders {report.failed_orders()}")
        ctx.exit(EXIT_FAILED)
    logger.info("All requested orders passed")
