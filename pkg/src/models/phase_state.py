"""Phase state model.

A PhaseState holds the N phase fields u_k on a shared grid at one time.
The fields are stored as a single array of shape (N, K_1, ..., K_d).
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterator

import numpy as np

from src.models.errors import IndexOutOfRangeError, SizeMismatchError
from src.models.grid import ScalarField, SpectralGrid


@dataclass(frozen=True, eq=False)
class PhaseState:
    """Phase fields at one time step.

    Attributes:
        grid: Shared periodic grid
        fields: Array of shape (n_phases,) + grid.sizes
        time: Simulation time
        step: Number of steps taken to reach this state
    """

    grid: SpectralGrid
    fields: np.ndarray
    time: float = 0.0
    step: int = 0

    def __post_init__(self) -> None:
        if self.fields.ndim != self.grid.dim + 1 or tuple(self.fields.shape[1:]) != self.grid.sizes:
            raise SizeMismatchError(
                f"Phase array shape {self.fields.shape} does not match grid {self.grid.sizes}"
            )

    @classmethod
    def create(cls, grid: SpectralGrid, fields: np.ndarray, time: float = 0.0,
               step: int = 0) -> 'PhaseState':
        """Create a state owning a private copy of the fields."""
        return cls(grid=grid, fields=np.array(fields, dtype=float, copy=True), time=float(time),
                   step=int(step))

    @property
    def n_phases(self) -> int:
        return int(self.fields.shape[0])

    def check_index(self, phase: int) -> None:
        if not 0 <= phase < self.n_phases:
            raise IndexOutOfRangeError(f"Phase index {phase} outside [0, {self.n_phases})")

    def field(self, phase: int) -> ScalarField:
        """One phase as a ScalarField."""
        self.check_index(phase)
        return ScalarField(grid=self.grid, values=self.fields[phase])

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.fields)

    def total(self) -> np.ndarray:
        """Pointwise sum of all phases."""
        return np.sum(self.fields, axis=0)

    def with_fields(self, fields: np.ndarray, time: float, step: int) -> 'PhaseState':
        """New state on the same grid; takes ownership of `fields`."""
        return PhaseState(grid=self.grid, fields=fields, time=float(time), step=int(step))

    def copy(self) -> 'PhaseState':
        return PhaseState.create(self.grid, self.fields, self.time, self.step)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_phases': self.n_phases,
            'time': self.time,
            'step': self.step,
            **self.grid.to_dict(),
        }

    def __repr__(self) -> str:
        return f'<PhaseState N={self.n_phases} t={self.time:g} step={self.step}>'
