from src import create_cli

"""Command-line entry point.

This module serves as the entry point for the mobiflow commands.
It builds the command group created in the src package.

    python run.py run configs/two_circles.toml
    python run.py validate configs/two_circles.toml
"""


cli = create_cli()

if __name__ == '__main__':
    cli()
