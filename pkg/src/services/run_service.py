"""Batch run orchestration.

Builds the initial state from a RunConfig, evolves it with snapshot and
diagnostic hooks, and writes:

    diagnostics.csv
    fields_<step>_<phase>.raw + .json   (phase is 1-based)
    composite_<step>.pgm                (3D: mid-plane of the last axis)
    composite_<step>_axis<a>.pgm        (3D: one per configured slice axis)
"""

import logging
import os
from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.models.errors import NonFiniteFieldError
from src.models.phase_state import PhaseState
from src.models.run_config import RunConfig
from src.models.time_series import TimeSeries
from src.services import config_service, diagnostics_service, output_service
from src.services.solver_service import StepHook, evolve

logger = logging.getLogger(__name__)

DIAGNOSTICS_FILE = 'diagnostics.csv'


@dataclass
class RunResult:
    """What a finished run produced."""

    final_state: PhaseState
    series: TimeSeries
    output_dir: str
    files: List[str] = field(default_factory=list)


def field_path(output_dir: str, step: int, phase: int) -> str:
    return os.path.join(output_dir, f'fields_{step:06d}_{phase}.raw')


def composite_path(output_dir: str, step: int, axis: int = -1) -> str:
    suffix = f'_axis{axis}' if axis >= 0 else ''
    return os.path.join(output_dir, f'composite_{step:06d}{suffix}.pgm')


def composite_slices(fields: np.ndarray, slice_axes=()) -> List[tuple]:
    """(axis, 2D phase stack) pairs to render; axis -1 is the default view.

    In 2D the default view is the whole grid. In 3D it is the mid-plane
    normal to the last axis, followed by the mid-plane normal to each
    requested axis.
    """
    dim = fields.ndim - 1
    if dim == 2:
        return [(-1, fields)]
    last = fields.shape[-1]
    views = [(-1, fields[..., last // 2])]
    for axis in slice_axes:
        views.append((axis, np.take(fields, fields.shape[axis + 1] // 2, axis=axis + 1)))
    return views


def write_snapshot(state: PhaseState, config: RunConfig, output_dir: str) -> List[str]:
    """Write every phase field and the composite image(s) of one state."""
    written = []
    for k in range(state.n_phases):
        path = field_path(output_dir, state.step, k + 1)
        sidecar = output_service.snapshot_sidecar(state.grid, state.time, state.step, k + 1)
        output_service.write_raw_field(path, state.fields[k], sidecar)
        written.append(path)
    for axis, stack in composite_slices(state.fields, config.slice_axes):
        path = composite_path(output_dir, state.step, axis)
        image = output_service.composite_image(stack, config.composite_weights)
        output_service.write_image(path, image)
        written.append(path)
    logger.debug("Snapshot at step %d written to %s", state.step, output_dir)
    return written


def run(config: RunConfig) -> RunResult:
    """Execute a configured run and write its artifacts.

    Args:
        config: Parsed run configuration

    Returns:
        RunResult with the final state and the diagnostic time series

    Raises:
        ConfigInvalidError: On unresolvable parameters or shapes
        NotAdditiveError: If the tensions have no additive split
        NonFiniteFieldError: If the evolution blows up; diagnostics gathered
            so far are still written
    """
    setup = config_service.prepare(config)
    state = config_service.initial_state(setup)
    output_dir = config.output_dir
    os.makedirs(output_dir, exist_ok=True)
    logger.info("Run %s: %d phases, %d steps, output in %s",
                config.source or '<config>', state.n_phases, setup.params.n_steps, output_dir)

    series = TimeSeries(n_phases=state.n_phases)
    files: List[str] = []

    def on_snapshot(_step: int, current: PhaseState) -> None:
        files.extend(write_snapshot(current, config, output_dir))

    def on_diagnostic(_step: int, current: PhaseState) -> None:
        series.append(diagnostics_service.sample(current, setup.tensions, setup.params.epsilon))

    hooks = [
        StepHook(every=config.snapshot_every, callback=on_snapshot),
        StepHook(every=config.diagnostic_every, callback=on_diagnostic),
    ]
    csv_path = os.path.join(output_dir, DIAGNOSTICS_FILE)
    try:
        final = evolve(state, setup.tensions, setup.decomposition, setup.params, hooks)
    except NonFiniteFieldError:
        output_service.write_time_series(csv_path, series)
        raise
    output_service.write_time_series(csv_path, series)
    files.append(csv_path)
    logger.info("Run finished at t=%g (%d diagnostic samples)", final.time, len(series))
    return RunResult(final_state=final, series=series, output_dir=output_dir, files=files)
