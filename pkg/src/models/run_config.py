"""Run configuration model.

This module defines RunConfig, the parsed form of a TOML run file, and
the parsing of the symbolic parameter forms 'c/K' and 'c/K^2' used for
epsilon and dt.
"""

import re
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.models.errors import ConfigInvalidError
from src.models.grid import SpectralGrid
from src.models.mobility import MobilitySet, check_symmetric_matrix, pairs_to_matrix
from src.models.solver_params import MACHINE_EPSILON, DecompositionMode

ScaledSpec = Union[float, str]

_SCALED = re.compile(
    r'^\s*(?P<coeff>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)?\s*\*?\s*/\s*K\s*'
    r'(?P<power>\^\s*2|\*\*\s*2|²)?\s*$'
)


def parse_scaled(spec: ScaledSpec, k: int, power: int, path: str) -> float:
    """Resolve an absolute value or a symbolic 'c/K' / 'c/K^2' form.

    Args:
        spec: Number, or string such as '1.5/K' or '0.25/K^2'
        k: Grid size K
        power: Expected power of K (1 for epsilon, 2 for dt)
        path: Config path used in error messages

    Returns:
        Positive resolved value

    Raises:
        ConfigInvalidError: On malformed strings, wrong powers, or
            non-positive results
    """
    if isinstance(spec, bool):
        raise ConfigInvalidError(path, "expected a number or a 'c/K' form")
    if isinstance(spec, (int, float)):
        value = float(spec)
    else:
        text = str(spec)
        try:
            value = float(text)
        except ValueError:
            match = _SCALED.match(text)
            if not match:
                raise ConfigInvalidError(path, f"cannot parse {text!r}")
            found = 2 if match.group('power') else 1
            if found != power:
                expected = 'c/K' if power == 1 else 'c/K^2'
                raise ConfigInvalidError(path, f"{text!r} should have the form {expected}")
            coeff = float(match.group('coeff')) if match.group('coeff') else 1.0
            value = coeff / float(k) ** power
    if not np.isfinite(value) or value <= 0.0:
        raise ConfigInvalidError(path, f"must be positive, got {value}")
    return value


def _require(table: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in table:
        raise ConfigInvalidError(f"{path}.{key}" if path else key, "missing required field")
    return table[key]


def _table(data: Mapping[str, Any], key: str) -> Mapping[str, Any]:
    value = data.get(key, {})
    if not isinstance(value, Mapping):
        raise ConfigInvalidError(key, "expected a table")
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool):
        raise ConfigInvalidError(path, "expected a number")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigInvalidError(path, f"expected a number, got {value!r}")
    if not np.isfinite(number):
        raise ConfigInvalidError(path, f"must be finite, got {number}")
    return number


def _integer(value: Any, path: str) -> int:
    number = _number(value, path)
    if not number.is_integer():
        raise ConfigInvalidError(path, f"expected an integer, got {value!r}")
    return int(number)


def _float_list(value: Any, path: str, length: Optional[int] = None) -> Tuple[float, ...]:
    if not isinstance(value, (list, tuple)):
        raise ConfigInvalidError(path, "expected a list of numbers")
    try:
        result = tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigInvalidError(path, "expected a list of numbers")
    if not all(np.isfinite(result)):
        raise ConfigInvalidError(path, "entries must be finite")
    if length is not None and len(result) != length:
        raise ConfigInvalidError(path, f"expected {length} entries, got {len(result)}")
    return result


def _pair_matrix(table: Mapping[str, Any], n_phases: int, path: str, quantity: str) -> np.ndarray:
    if 'pairs' in table and 'matrix' in table:
        raise ConfigInvalidError(path, "give either 'pairs' or 'matrix', not both")
    if 'pairs' in table:
        if not isinstance(table['pairs'], (list, tuple)):
            raise ConfigInvalidError(f"{path}.pairs", "expected an array of [i, j, value]")
        return pairs_to_matrix(n_phases, table['pairs'], f"{path}.pairs", quantity)
    if 'matrix' in table:
        try:
            raw = np.asarray(table['matrix'], dtype=float)
        except (TypeError, ValueError):
            raise ConfigInvalidError(f"{path}.matrix", "expected a square array of numbers")
        matrix = check_symmetric_matrix(raw, f"{path}.matrix", quantity)
        if matrix.shape[0] != n_phases:
            raise ConfigInvalidError(f"{path}.matrix", f"expected {n_phases} x {n_phases} matrix")
        return matrix
    raise ConfigInvalidError(path, "missing 'pairs' or 'matrix'")


def default_composite_weights(n_phases: int) -> Tuple[float, ...]:
    """Weights (0, 2, 1, 3, 4, ...) so three phases show 2*u_2 + u_3."""
    weights = [0.0, 2.0, 1.0] + [float(k) for k in range(3, n_phases)]
    return tuple(weights[:n_phases])


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Parsed run configuration.

    Attributes:
        grid: Periodic grid
        n_phases: Number of phases N
        sigma_pairs: Symmetric matrix of surface tensions
        mobility: Validated mobility set
        decomposition: Decomposition mode
        components: Explicit-mode coefficient vectors
        epsilon_spec: Absolute epsilon or 'c/K'
        dt_spec: Absolute dt or 'c/K^2'
        alpha: Stabilization parameter
        beta: Projection regularization
        t_end: Final time (used when n_steps is None)
        n_steps: Explicit step count
        snapshot_every: Snapshot interval in steps (0 disables periodic snapshots)
        diagnostic_every: Diagnostic interval in steps (0 disables periodic samples)
        composite_weights: Channel weights c_k of the grayscale composite
        slice_axes: Extra slice axes for 3D composites
        shapes: Raw shape tables, one per non-ambient phase
        output_dir: Output directory
        source: Path the config was read from
    """

    grid: SpectralGrid
    n_phases: int
    sigma_pairs: np.ndarray
    mobility: MobilitySet
    decomposition: DecompositionMode = DecompositionMode.CANONICAL
    components: Optional[Tuple[Tuple[float, ...], ...]] = None
    epsilon_spec: ScaledSpec = '1.5/K'
    dt_spec: ScaledSpec = '0.25/K^2'
    alpha: float = 0.0
    beta: float = MACHINE_EPSILON
    t_end: Optional[float] = None
    n_steps: Optional[int] = None
    snapshot_every: int = 0
    diagnostic_every: int = 0
    composite_weights: Tuple[float, ...] = ()
    slice_axes: Tuple[int, ...] = ()
    shapes: Tuple[Dict[str, Any], ...] = field(default=())
    output_dir: str = 'output'
    source: str = ''

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], source: str = '') -> 'RunConfig':
        """Parse a configuration mapping (as produced by tomllib).

        Args:
            data: Parsed TOML document
            source: Path of the file, for reporting

        Returns:
            RunConfig with structural checks applied

        Raises:
            ConfigInvalidError: With the dotted path of the first bad field
        """
        grid_table = _table(data, 'grid')
        dim = _integer(_require(grid_table, 'dim', 'grid'), 'grid.dim')
        if dim not in (2, 3):
            raise ConfigInvalidError('grid.dim', f"must be 2 or 3, got {dim}")
        sizes = _require(grid_table, 'sizes', 'grid')
        if isinstance(sizes, int):
            sizes = [sizes] * dim
        sizes = _float_list(sizes, 'grid.sizes', dim)
        if any(not k.is_integer() or k < 2 for k in sizes):
            raise ConfigInvalidError('grid.sizes', "sizes must be integers >= 2")
        lengths = grid_table.get('lengths', [1.0] * dim)
        lengths = _float_list(lengths, 'grid.lengths', dim)
        if any(length <= 0.0 for length in lengths):
            raise ConfigInvalidError('grid.lengths', "lengths must be positive")
        origin = grid_table.get('origin', [-0.5 * length for length in lengths])
        origin = _float_list(origin, 'grid.origin', dim)
        grid = SpectralGrid(sizes=tuple(int(k) for k in sizes), lengths=lengths, origin=origin)

        phases_table = _table(data, 'phases')
        n_phases = _integer(_require(phases_table, 'count', 'phases'), 'phases.count')
        if n_phases < 2:
            raise ConfigInvalidError('phases.count', "at least two phases are required")

        sigma_pairs = _pair_matrix(_table(data, 'tensions'), n_phases, 'tensions', 'tension')
        mobility_matrix = _pair_matrix(_table(data, 'mobilities'), n_phases, 'mobilities',
                                       'mobility')
        mobility = MobilitySet.from_matrix(mobility_matrix, path='mobilities')

        solver = _table(data, 'solver')
        try:
            mode = DecompositionMode(solver.get('decomposition', 'canonical'))
        except ValueError:
            raise ConfigInvalidError('solver.decomposition',
                                     "must be one of canonical, sparse, explicit")
        components = None
        if mode is DecompositionMode.EXPLICIT:
            raw = _require(solver, 'components', 'solver')
            if not isinstance(raw, list) or not raw:
                raise ConfigInvalidError('solver.components', "expected a non-empty list")
            components = tuple(
                _float_list(c, f"solver.components[{p}]", n_phases) for p, c in enumerate(raw)
            )
            for p, c in enumerate(components):
                if any(v < 0.0 for v in c):
                    raise ConfigInvalidError(f"solver.components[{p}]",
                                             "coefficients must be nonnegative")
        alpha = _number(solver.get('alpha', 0.0), 'solver.alpha')
        if alpha < 0.0:
            raise ConfigInvalidError('solver.alpha', "must be nonnegative")
        beta = _number(solver.get('beta', MACHINE_EPSILON), 'solver.beta')
        if not beta > 0.0:
            raise ConfigInvalidError('solver.beta', "must be positive")
        t_end = solver.get('t_end')
        n_steps = solver.get('n_steps')
        if t_end is None and n_steps is None:
            raise ConfigInvalidError('solver', "give t_end or n_steps")
        if t_end is not None and n_steps is not None:
            raise ConfigInvalidError('solver', "give t_end or n_steps, not both")
        if n_steps is not None:
            n_steps = _integer(n_steps, 'solver.n_steps')
            if n_steps < 0:
                raise ConfigInvalidError('solver.n_steps', "must be a nonnegative integer")
        if t_end is not None:
            t_end = _number(t_end, 'solver.t_end')
            if t_end < 0.0:
                raise ConfigInvalidError('solver.t_end', "must be nonnegative")

        output = _table(data, 'output')
        weights = output.get('composite_weights')
        weights = (_float_list(weights, 'output.composite_weights', n_phases)
                   if weights is not None else default_composite_weights(n_phases))
        raw_axes = output.get('slice_axes', [])
        if not isinstance(raw_axes, (list, tuple)):
            raise ConfigInvalidError('output.slice_axes', "expected a list of axes")
        slice_axes = tuple(_integer(a, 'output.slice_axes') for a in raw_axes)
        for a in slice_axes:
            if not 0 <= a < dim:
                raise ConfigInvalidError('output.slice_axes', f"axis {a} outside [0, {dim})")
        snapshot_every = _integer(output.get('snapshot_every', 0), 'output.snapshot_every')
        diagnostic_every = _integer(output.get('diagnostic_every', 0), 'output.diagnostic_every')
        if snapshot_every < 0 or diagnostic_every < 0:
            raise ConfigInvalidError('output', "intervals must be nonnegative")

        shapes = data.get('shapes', [])
        if not isinstance(shapes, list) or any(not isinstance(s, Mapping) for s in shapes):
            raise ConfigInvalidError('shapes', "expected an array of tables")
        if len(shapes) != n_phases - 1:
            raise ConfigInvalidError(
                'shapes', f"expected {n_phases - 1} shapes (the last phase is ambient), "
                          f"got {len(shapes)}"
            )

        return cls(
            grid=grid,
            n_phases=n_phases,
            sigma_pairs=sigma_pairs,
            mobility=mobility,
            decomposition=mode,
            components=components,
            epsilon_spec=solver.get('epsilon', '1.5/K'),
            dt_spec=solver.get('dt', '0.25/K^2'),
            alpha=alpha,
            beta=beta,
            t_end=t_end,
            n_steps=n_steps,
            snapshot_every=snapshot_every,
            diagnostic_every=diagnostic_every,
            composite_weights=weights,
            slice_axes=slice_axes,
            shapes=tuple(dict(s) for s in shapes),
            output_dir=str(output.get('directory', 'output')),
            source=source,
        )

    def with_overrides(self, **changes: Any) -> 'RunConfig':
        """Copy with some fields replaced (CLI overrides); None values are ignored."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@dataclass
class ConfigReport:
    """Outcome of validating a run configuration without running it.

    Attributes:
        source: Config path
        ok: True when every check passed
        epsilon: Resolved interface width
        dt: Resolved time step
        n_steps: Resolved step count
        sigma_phase: Per-phase tensions from the additive split
        decomposition: Summary of the mobility decomposition
        errors: Failed checks
        warnings: Non-fatal findings (shape overlap, fallbacks)
    """

    source: str
    ok: bool = True
    epsilon: Optional[float] = None
    dt: Optional[float] = None
    n_steps: Optional[int] = None
    sigma_phase: List[float] = field(default_factory=list)
    decomposition: Dict[str, Any] = field(default_factory=dict)
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.ok = False
        self.errors.append(message)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'source': self.source,
            'ok': self.ok,
            'epsilon': self.epsilon,
            'dt': self.dt,
            'n_steps': self.n_steps,
            'sigma_phase': list(self.sigma_phase),
            'decomposition': dict(self.decomposition),
            'errors': list(self.errors),
            'warnings': list(self.warnings),
        }
