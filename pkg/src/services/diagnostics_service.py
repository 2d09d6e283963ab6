"""Diagnostics service: observables computed from phase states.

All functions are read-only over their inputs.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import ndimage

from src.models.errors import DimensionMismatchError
from src.models.phase_state import PhaseState
from src.models.tension import TensionSet
from src.models.time_series import DiagnosticRow
from src.services.potential_service import w
from src.services.spectral_service import spectral_gradient

logger = logging.getLogger(__name__)

EXTINCTION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RadiusEstimate:
    """Effective radius of one phase; extinct when its mass is not positive."""

    radius: float
    extinct: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {'radius': self.radius, 'extinct': self.extinct}


def phase_mass(state: PhaseState, i: int) -> float:
    """Grid quadrature of phase i: sum u_i * prod h_j."""
    state.check_index(i)
    return float(np.sum(state.fields[i]) * state.grid.cell_volume)


def effective_radius(state: PhaseState, i: int) -> RadiusEstimate:
    """Radius of the disk (2D) or ball (3D) with the mass of phase i.

    Args:
        state: Phase fields
        i: Phase index

    Returns:
        RadiusEstimate; radius 0 and extinct=True when the mass is <= 0
    """
    mass = phase_mass(state, i)
    if mass <= 0.0:
        return RadiusEstimate(radius=0.0, extinct=True)
    if state.grid.dim == 2:
        return RadiusEstimate(radius=float(np.sqrt(mass / np.pi)))
    return RadiusEstimate(radius=float(np.cbrt(3.0 * mass / (4.0 * np.pi))))


def exact_radius(r0: float, sigma: float, mobility: float, t: float) -> float:
    """Sharp-interface radius sqrt(r0^2 - 2 sigma m t) of a shrinking circle, 0 once extinct."""
    squared = r0 * r0 - 2.0 * sigma * mobility * t
    # round-off near the extinction time counts as extinct
    if squared <= EXTINCTION_TOLERANCE * r0 * r0:
        return 0.0
    return float(np.sqrt(squared))


def constraint_error(state: PhaseState) -> float:
    """Sup norm of 1 - sum_k u_k over the grid."""
    return float(np.max(np.abs(1.0 - state.total())))


def phase_energy(values: np.ndarray, grid, epsilon: float) -> float:
    """Integral of eps |grad u|^2 / 2 + W(u) / eps for a single field."""
    gradient = spectral_gradient(values, grid)
    density = 0.5 * epsilon * sum(g * g for g in gradient) + w(values) / epsilon
    return float(np.sum(density) * grid.cell_volume)


def cahn_hilliard_energy(state: PhaseState, tensions: TensionSet, epsilon: float) -> float:
    """Multiphase Cahn-Hilliard energy 1/2 sum_i sigma_i E_eps(u_i).

    Gradients are spectral and the integral is a grid quadrature. The result
    is clamped at zero so round-off never makes it negative.
    """
    if tensions.n_phases != state.n_phases:
        raise DimensionMismatchError(
            f"Tensions have {tensions.n_phases} phases, state has {state.n_phases}"
        )
    total = 0.0
    for sigma, values in zip(tensions.sigma_phase, state.fields):
        if sigma == 0.0:
            continue
        total += 0.5 * sigma * phase_energy(values, state.grid, epsilon)
    return max(total, 0.0)


def _dilate(mask: np.ndarray) -> np.ndarray:
    return ndimage.maximum_filter(mask, size=3, mode='wrap')


def _dilation_distance(source: np.ndarray, target: np.ndarray) -> float:
    """Smallest n such that n periodic dilations of source cover target."""
    reached = source.copy()
    steps = 0
    limit = max(source.shape)
    while not np.all(reached[target]):
        if steps > limit:
            return float('inf')
        reached = _dilate(reached)
        steps += 1
    return float(steps)


def interface_displacement(state_a: PhaseState, state_b: PhaseState, i: int) -> float:
    """Symmetric Hausdorff-type distance, in grid cells, between the
    1/2-superlevel sets of phase i in two states.

    Counts 3^d box dilations needed for each set to cover the other, on
    the periodic grid.

    Returns:
        0 when both sets are empty, inf when exactly one is
    """
    if state_a.grid != state_b.grid:
        raise DimensionMismatchError("States live on different grids")
    state_a.check_index(i)
    state_b.check_index(i)
    a = state_a.fields[i] >= 0.5
    b = state_b.fields[i] >= 0.5
    if not a.any() and not b.any():
        return 0.0
    if not a.any() or not b.any():
        return float('inf')
    return max(_dilation_distance(a, b), _dilation_distance(b, a))


def radius_slope(times: Sequence[float], radii: Sequence[float]) -> float:
    """Least-squares slope of R^2 against time.

    The sharp-interface law predicts -2 sigma m for a shrinking circle.
    """
    times = np.asarray(times, dtype=float)
    radii = np.asarray(radii, dtype=float)
    if times.size < 2:
        raise ValueError("At least two samples are needed to fit a slope")
    slope, _ = np.polyfit(times, radii ** 2, 1)
    return float(slope)


def level_crossing(values: Sequence[float], coords: Sequence[float],
                   level: float = 0.5) -> Optional[float]:
    """Position of the first crossing of `level` along a line of nodes.

    Linear interpolation between the two nodes that bracket the level.

    Args:
        values: Field samples along the line
        coords: Coordinates of the samples, increasing
        level: Level to locate

    Returns:
        Interpolated coordinate, or None when the level is never crossed
    """
    values = np.asarray(values, dtype=float)
    coords = np.asarray(coords, dtype=float)
    shifted = values - level
    for k in range(values.size - 1):
        lo, hi = shifted[k], shifted[k + 1]
        if lo == 0.0:
            return float(coords[k])
        if lo * hi < 0.0:
            return float(coords[k] + (coords[k + 1] - coords[k]) * lo / (lo - hi))
    if shifted[-1] == 0.0:
        return float(coords[-1])
    return None


def sample(state: PhaseState, tensions: TensionSet, epsilon: float) -> DiagnosticRow:
    """All observables of one state as a TimeSeries row."""
    n = state.n_phases
    row = DiagnosticRow(
        time=state.time,
        radii=tuple(effective_radius(state, k).radius for k in range(n)),
        masses=tuple(phase_mass(state, k) for k in range(n)),
        constraint_error=constraint_error(state),
        energy=cahn_hilliard_energy(state, tensions, epsilon),
    )
    logger.debug("t=%g constraint=%.3e energy=%.6g", row.time, row.constraint_error, row.energy)
    return row
