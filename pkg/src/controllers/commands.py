"""Command controller for running and validating configurations.

This module provides the `run` and `validate` commands. Commands stay
thin: they load the config, hand it to the services, and turn domain
errors into a styled message and an exit status.
"""

import logging
from typing import Optional

import click

from src.models.errors import (
    ConfigInvalidError,
    NonFiniteFieldError,
    NotAdditiveError,
    describe,
)
from src.models.run_config import ConfigReport
from src.services import config_service, run_service

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG_INVALID = 2
EXIT_NOT_ADDITIVE = 3
EXIT_NON_FINITE = 4


def exit_code_for(error: Exception) -> int:
    """Exit status for a failed command."""
    if isinstance(error, ConfigInvalidError):
        return EXIT_CONFIG_INVALID
    if isinstance(error, NotAdditiveError):
        return EXIT_NOT_ADDITIVE
    if isinstance(error, NonFiniteFieldError):
        return EXIT_NON_FINITE
    return EXIT_FAILURE


def _fail(error: Exception, config_path: str) -> None:
    logger.error(describe(error, config_path))
    click.secho(describe(error, config_path), fg='red', err=True)
    raise SystemExit(exit_code_for(error))


def render_report(report: ConfigReport) -> str:
    """Human-readable summary of a ConfigReport."""
    lines = [f"config: {report.source}"]
    if report.epsilon is not None:
        lines.append(f"epsilon = {report.epsilon!r}")
        lines.append(f"dt = {report.dt!r}")
        lines.append(f"n_steps = {report.n_steps}")
    if report.sigma_phase:
        lines.append("sigma_k = " + ', '.join(f"{s:g}" for s in report.sigma_phase))
    dec = report.decomposition
    if dec:
        lines.append(f"decomposition = {dec['label']} P={dec['P']}")
        for p, coeffs in enumerate(dec['components']):
            lines.append(f"  component {p}: " + ', '.join(f"{c:g}" for c in coeffs))
        lines.append("m_star = " + ', '.join(f"{m:g}" for m in dec['m_star']))
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    for error in report.errors:
        lines.append(f"error: {error}")
    lines.append("status: " + ('ok' if report.ok else 'invalid'))
    return '\n'.join(lines)


@click.command('run')
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.option('--output-dir', default=None, help='Directory for snapshots and diagnostics.')
@click.option('--snapshot-every', type=click.IntRange(min=0), default=None,
              help='Snapshot interval in steps (0: first and last only).')
@click.option('--quiet', is_flag=True, help='Only log warnings and errors.')
def run_command(config_path: str, output_dir: Optional[str], snapshot_every: Optional[int],
                quiet: bool) -> None:
    """Evolve the phases described by CONFIG_PATH and write outputs."""
    from src import init_logging
    init_logging(quiet)
    try:
        config = config_service.load_config(config_path)
        config = config.with_overrides(output_dir=output_dir, snapshot_every=snapshot_every)
        result = run_service.run(config)
    except ValueError as e:
        _fail(e, config_path)
        return
    if not quiet:
        click.secho(f"done: t = {result.final_state.time:g}, "
                    f"{len(result.series)} samples in {result.output_dir}", fg='green')


@click.command('validate')
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.option('--quiet', is_flag=True, help='Only print the status line.')
def validate_command(config_path: str, quiet: bool) -> None:
    """Check CONFIG_PATH without running it."""
    from src import init_logging
    init_logging(quiet)
    try:
        config = config_service.load_config(config_path)
    except ValueError as e:
        _fail(e, config_path)
        return
    report = config_service.validate_config(config)
    text = render_report(report)
    if quiet:
        text = text.splitlines()[-1]
    click.secho(text, fg=None if report.ok else 'red')
    if not report.ok:
        raise SystemExit(EXIT_CONFIG_INVALID)
