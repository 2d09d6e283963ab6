import logging
from logging.handlers import RotatingFileHandler
import os

import click

"""Command-line application initialization and configuration.

This module creates the click command group, registers the commands,
and sets up logging.
"""

LOG_FORMAT = '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'


def create_cli() -> click.Group:
    """Create and configure the command group.

    Returns:
        click.Group with the `run` and `validate` commands
    """
    @click.group(name='mobiflow')
    def cli() -> None:
        """Multiphase mean curvature flow with arbitrary mobilities."""

    _register_commands(cli)
    return cli


def _register_commands(cli: click.Group) -> None:
    """Attach the command controllers to the group.

    Args:
        cli: Command group
    """
    from src.controllers.commands import run_command, validate_command
    cli.add_command(run_command)
    cli.add_command(validate_command)


def init_logging(quiet: bool = False) -> None:
    """Configure package logging.

    Console output at INFO (WARNING when quiet) plus a rotating log file
    under MOBIFLOW_LOG_DIR. Calling it again replaces the handlers.

    Args:
        quiet: Only report warnings and errors on the console
    """
    logger = logging.getLogger('src')
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    level_name = os.getenv('MOBIFLOW_LOG_LEVEL', 'INFO').upper()
    level = getattr(logging, level_name, logging.INFO)
    formatter = logging.Formatter(LOG_FORMAT)

    console = logging.StreamHandler()
    console.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    console.setLevel(logging.WARNING if quiet else level)
    logger.addHandler(console)

    log_dir = os.getenv('MOBIFLOW_LOG_DIR', 'logs')
    if not os.path.exists(log_dir):
        os.makedirs(log_dir)
    file_handler = RotatingFileHandler(
        os.path.join(log_dir, 'mobiflow.log'),
        maxBytes=10240000,  # 10MB
        backupCount=10
    )
    file_handler.setFormatter(formatter)
    file_handler.setLevel(level)
    logger.addHandler(file_handler)

    logger.setLevel(min(level, logging.INFO))
    logger.info('mobiflow startup')
