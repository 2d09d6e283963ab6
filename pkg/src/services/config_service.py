"""Configuration service: load TOML run files and resolve them into
solver inputs.
"""

import logging
import math
import os
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
import warnings
from dataclasses import dataclass
from typing import List

from src.models.errors import ConfigInvalidError, NotAdditiveError, ShapeOverlapWarning
from src.models.mobility import HarmonicDecomposition
from src.models.phase_state import PhaseState
from src.models.run_config import ConfigReport, RunConfig, parse_scaled
from src.models.shape import Shape
from src.models.solver_params import DecompositionMode, SolverParams
from src.models.tension import TensionSet
from src.services import geometry_service, mobility_service, tension_service

logger = logging.getLogger(__name__)

STEP_ROUNDING = 1e-9


@dataclass(frozen=True, eq=False)
class RunSetup:
    """Everything a run needs, resolved from a RunConfig."""

    config: RunConfig
    params: SolverParams
    tensions: TensionSet
    decomposition: HarmonicDecomposition
    shapes: List[Shape]


def load_config(path: str) -> RunConfig:
    """Read and parse a TOML run file.

    Args:
        path: Config file path

    Returns:
        RunConfig

    Raises:
        ConfigInvalidError: If the file is missing, not valid TOML, or fails
            structural checks
    """
    if not os.path.isfile(path):
        raise ConfigInvalidError(path, "config file not found")
    with open(path, 'rb') as handle:
        try:
            data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as e:
            raise ConfigInvalidError(path, f"invalid TOML ({e})")
    config = RunConfig.from_dict(data, source=path)
    logger.debug("Loaded %s: %d phases on %s", path, config.n_phases, config.grid)
    return config


def resolve_n_steps(config: RunConfig, dt: float) -> int:
    """Step count: given directly, or the smallest count reaching t_end."""
    if config.n_steps is not None:
        return config.n_steps
    return int(math.ceil(config.t_end / dt - STEP_ROUNDING))


def resolve_params(config: RunConfig) -> SolverParams:
    """Resolve symbolic epsilon and dt against K = largest grid size."""
    k = config.grid.max_size
    epsilon = parse_scaled(config.epsilon_spec, k, 1, 'solver.epsilon')
    dt = parse_scaled(config.dt_spec, k, 2, 'solver.dt')
    return SolverParams(
        epsilon=epsilon,
        dt=dt,
        alpha=config.alpha,
        beta=config.beta,
        n_steps=resolve_n_steps(config, dt),
        decomposition=config.decomposition,
        components=config.components,
    )


def build_shapes(config: RunConfig) -> List[Shape]:
    base_dir = os.path.dirname(os.path.abspath(config.source)) if config.source else '.'
    return [
        geometry_service.shape_from_dict(table, config.grid, f"shapes[{i}]", base_dir, phase=i)
        for i, table in enumerate(config.shapes)
    ]


def prepare(config: RunConfig) -> RunSetup:
    """Resolve parameters, split tensions, decompose mobilities and build shapes.

    Raises:
        ConfigInvalidError: On bad parameters or shapes
        NotAdditiveError: If the tensions are not additive
    """
    params = resolve_params(config)
    tensions = tension_service.split_tensions(config.sigma_pairs)
    decomposition = mobility_service.build_decomposition(
        config.mobility, config.decomposition, config.components
    )
    return RunSetup(config=config, params=params, tensions=tensions,
                    decomposition=decomposition, shapes=build_shapes(config))


def initial_state(setup: RunSetup) -> PhaseState:
    return geometry_service.init_phases(setup.config.grid, setup.shapes, setup.params.epsilon)


def validate_config(config: RunConfig) -> ConfigReport:
    """Run every structural check without evolving anything.

    Failures are collected in the report instead of raised.
    """
    report = ConfigReport(source=config.source)
    try:
        params = resolve_params(config)
    except ConfigInvalidError as e:
        report.fail(str(e))
        return report
    report.epsilon = params.epsilon
    report.dt = params.dt
    report.n_steps = params.n_steps

    try:
        tensions = tension_service.split_tensions(config.sigma_pairs)
        report.sigma_phase = tensions.sigma_phase.tolist()
    except NotAdditiveError as e:
        report.fail(f"tensions not additive: {e.reason}")

    try:
        dec = mobility_service.build_decomposition(config.mobility, config.decomposition,
                                                   config.components)
        check = mobility_service.validate(dec, config.mobility)
        report.decomposition = {**dec.to_dict(), 'validation': check.to_dict()}
        if not check.passed:
            report.fail("decomposition does not reproduce the mobilities: "
                        + '; '.join(check.reasons))
        if config.decomposition is DecompositionMode.SPARSE and dec.label != 'sparse':
            report.warnings.append(
                f"mobilities are not harmonically additive; fell back to canonical P={dec.size}"
            )
    except (NotAdditiveError, ValueError) as e:
        report.fail(f"mobility decomposition: {e}")

    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always', ShapeOverlapWarning)
            geometry_service.init_phases(config.grid, build_shapes(config), params.epsilon)
        report.warnings.extend(str(w.message) for w in caught
                               if issubclass(w.category, ShapeOverlapWarning))
    except ValueError as e:
        report.fail(str(e))

    logger.info("Validated %s: %s", config.source or '<config>', 'ok' if report.ok else 'failed')
    return report
