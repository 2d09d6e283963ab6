"""Every configuration under configs/ validates and takes a few steps."""

import glob
import os

import numpy as np
import pytest

from seed.seed_raster import LABELS, build_labels
from src.services import config_service, diagnostics_service, output_service
from src.services.solver_service import Stepper

CONFIG_DIR = os.path.join(os.path.dirname(__file__), os.pardir, 'configs')
CONFIG_NAMES = sorted(os.path.basename(p) for p in glob.glob(os.path.join(CONFIG_DIR, '*.toml')))


def load(name):
    return config_service.load_config(os.path.join(CONFIG_DIR, name))


def advance(setup, n_steps):
    state = config_service.initial_state(setup)
    stepper = Stepper(setup.config.grid, setup.tensions, setup.decomposition, setup.params)
    start = state
    for _ in range(n_steps):
        state = stepper.step(state)
    return start, state


def test_every_experiment_is_shipped():
    for name in ['three_d_contrasted_m111.toml', 'three_d_contrasted_m011.toml',
                 'three_d_contrasted_m010.toml', 'raster_demo.toml']:
        assert name in CONFIG_NAMES


@pytest.mark.parametrize('name', CONFIG_NAMES)
def test_validates(name):
    report = config_service.validate_config(load(name))
    assert report.ok, report.errors


@pytest.mark.parametrize('name, frozen', [
    ('three_d_contrasted_m111.toml', None),
    ('three_d_contrasted_m011.toml', None),
    ('three_d_contrasted_m010.toml', 1),
])
def test_three_dimensional_contrasted_runs_start(name, frozen):
    setup = config_service.prepare(load(name))
    assert setup.config.grid.sizes == (64, 64, 64)
    start, state = advance(setup, 3)
    assert state.step == 3
    assert diagnostics_service.constraint_error(state) <= 1e-12
    assert diagnostics_service.phase_mass(state, 0) < diagnostics_service.phase_mass(start, 0)
    if frozen is not None:
        np.testing.assert_array_equal(state.fields[frozen], start.fields[frozen])


class TestRasterDemo:
    def test_label_image_matches_the_seed_script(self):
        path = os.path.join(CONFIG_DIR, 'data', 'demo_labels.pgm')
        np.testing.assert_array_equal(output_service.read_image(path), build_labels())
        sidecar = output_service.read_json(output_service.sidecar_path(path))
        assert sidecar == {'labels': LABELS}

    def test_phases_follow_the_labels(self):
        setup = config_service.prepare(load('raster_demo.toml'))
        start, state = advance(setup, 2)
        labels = build_labels()
        # inside the L-shape, inside the disk, far in the background
        assert start.fields[0][40, 24] > 0.9
        assert start.fields[1][48, 88] > 0.9
        assert start.fields[2][120, 120] > 0.9
        assert labels[40, 24] == 200 and labels[48, 88] == 100 and labels[120, 120] == 0
        assert diagnostics_service.constraint_error(state) <= 1e-12
