"""Diagnostic time series model.

One row per diagnostic sample: time, per-phase effective radius and mass,
the partition-constraint sup error and the total Cahn-Hilliard energy.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np


@dataclass(frozen=True)
class DiagnosticRow:
    """Observables of one state."""

    time: float
    radii: Tuple[float, ...]
    masses: Tuple[float, ...]
    constraint_error: float
    energy: float

    def values(self) -> List[float]:
        """Flat list in CSV column order."""
        return [self.time, *self.radii, *self.masses, self.constraint_error, self.energy]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'time': self.time,
            'radii': list(self.radii),
            'masses': list(self.masses),
            'constraint_error': self.constraint_error,
            'energy': self.energy,
        }


@dataclass
class TimeSeries:
    """Growing table of diagnostic rows with strictly increasing time.

    Attributes:
        n_phases: Number of phases per row
        rows: Samples in time order
    """

    n_phases: int
    rows: List[DiagnosticRow] = field(default_factory=list)

    def header(self) -> List[str]:
        """CSV header: time, R_1..R_N, mass_1..mass_N, constraint_err, energy."""
        n = self.n_phases
        return (['time']
                + [f'R_{k}' for k in range(1, n + 1)]
                + [f'mass_{k}' for k in range(1, n + 1)]
                + ['constraint_err', 'energy'])

    def append(self, row: DiagnosticRow) -> None:
        """Add a sample.

        Raises:
            ValueError: If the row has the wrong width, non-finite values, or
                does not advance time
        """
        if len(row.radii) != self.n_phases or len(row.masses) != self.n_phases:
            raise ValueError(f"Row width does not match {self.n_phases} phases")
        if not all(np.isfinite(v) for v in row.values()):
            raise ValueError(f"Diagnostic row at t={row.time} holds non-finite values")
        if self.rows and not row.time > self.rows[-1].time:
            raise ValueError(f"Time must increase strictly ({row.time} after {self.rows[-1].time})")
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.time for r in self.rows])

    def radius(self, phase: int) -> np.ndarray:
        return np.array([r.radii[phase] for r in self.rows])

    def mass(self, phase: int) -> np.ndarray:
        return np.array([r.masses[phase] for r in self.rows])

    @property
    def constraint_errors(self) -> np.ndarray:
        return np.array([r.constraint_error for r in self.rows])

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.rows])
