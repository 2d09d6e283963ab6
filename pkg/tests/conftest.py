"""Shared fixtures: small grids, mobility and tension sets, initial states."""

import logging
import textwrap

import numpy as np
import pytest

from src.models.grid import SpectralGrid
from src.models.mobility import MobilitySet
from src.models.shape import Ball
from src.models.solver_params import SolverParams
from src.models.tension import TensionSet
from src.services import geometry_service, mobility_service


@pytest.fixture(autouse=True)
def log_dir(tmp_path, monkeypatch):
    """Keep rotating log files out of the working tree."""
    path = tmp_path / 'logs'
    monkeypatch.setenv('MOBIFLOW_LOG_DIR', str(path))
    yield path
    logger = logging.getLogger('src')
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()


@pytest.fixture
def unit_grid():
    """32 x 32 grid on [-0.5, 0.5]^2."""
    return SpectralGrid.centered_cube(2, 32)


@pytest.fixture
def fine_grid():
    return SpectralGrid.centered_cube(2, 64)


@pytest.fixture
def homogeneous_mobility():
    return MobilitySet.from_pairs(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])


@pytest.fixture
def circles_mobility():
    """(m_12, m_13, m_23) = (1, 1, 1/4), not harmonically additive."""
    return MobilitySet.from_pairs(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 0.25)])


@pytest.fixture
def equal_tensions():
    return TensionSet.from_phase([0.5, 0.5, 0.5])


@pytest.fixture
def circles_state(fine_grid):
    """Two disks of radius 0.2 at (+-0.25, 0) plus the ambient phase."""
    shapes = [Ball(center=(-0.25, 0.0), radius=0.2), Ball(center=(0.25, 0.0), radius=0.2)]
    epsilon = 1.5 / fine_grid.max_size
    return geometry_service.init_phases(fine_grid, shapes, epsilon)


@pytest.fixture
def circles_params(fine_grid):
    k = fine_grid.max_size
    return SolverParams(epsilon=1.5 / k, dt=0.25 / k ** 2, n_steps=20)


@pytest.fixture
def circles_decomposition(circles_mobility):
    return mobility_service.canonical_decomposition(circles_mobility)


@pytest.fixture
def write_config(tmp_path):
    """Write TOML text to tmp_path/<name> and return the path as a string."""

    def _write(text, name='run.toml'):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text), encoding='utf-8')
        return str(path)

    return _write


SMALL_RUN = """
    [grid]
    dim = 2
    sizes = 32

    [phases]
    count = 3

    [tensions]
    pairs = [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]]

    [mobilities]
    pairs = [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 0.25]]

    [solver]
    epsilon = "1.5/K"
    dt = "0.25/K^2"
    n_steps = 6

    [output]
    directory = "{output}"
    snapshot_every = 3
    diagnostic_every = 2

    [[shapes]]
    type = "ball"
    center = [-0.25, 0.0]
    radius = 0.15

    [[shapes]]
    type = "ball"
    center = [0.25, 0.0]
    radius = 0.15
"""


@pytest.fixture
def small_run_text(tmp_path):
    """TOML text of a six-step, 32 x 32 two-circle run writing into tmp_path/out."""
    return SMALL_RUN.format(output=(tmp_path / 'out').as_posix())


@pytest.fixture
def small_run_config(write_config, small_run_text):
    return write_config(small_run_text)


@pytest.fixture
def random_fields():
    """Factory for random positive fields summing to one at every node."""

    def _make(grid, n_phases, seed=0):
        rng = np.random.default_rng(seed)
        raw = rng.uniform(0.05, 1.0, size=(n_phases,) + grid.sizes)
        return raw / raw.sum(axis=0)

    return _make
