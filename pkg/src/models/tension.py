"""Surface tension model.

This module defines the TensionSet holding pairwise surface tensions
sigma_ij together with their additive per-phase split sigma_k, where
sigma_ij = sigma_i + sigma_j.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class TensionSet:
    """Additive surface tensions.

    Attributes:
        n_phases: Number of phases
        sigma_pair: Symmetric n x n matrix of sigma_ij, zero diagonal
        sigma_phase: Per-phase coefficients sigma_k
    """

    n_phases: int
    sigma_pair: np.ndarray
    sigma_phase: np.ndarray

    @classmethod
    def from_phase(cls, sigma_phase: Sequence[float]) -> 'TensionSet':
        """Create a tension set from per-phase coefficients.

        Args:
            sigma_phase: Nonnegative sigma_k values

        Returns:
            TensionSet with sigma_ij = sigma_i + sigma_j
        """
        phase = np.array(sigma_phase, dtype=float)
        if phase.ndim != 1 or phase.shape[0] < 2:
            raise ValueError("At least two per-phase tensions are required")
        if np.any(phase < 0.0):
            raise ValueError("Per-phase tensions must be nonnegative")
        pair = phase[:, None] + phase[None, :]
        np.fill_diagonal(pair, 0.0)
        pair.setflags(write=False)
        phase.setflags(write=False)
        return cls(n_phases=phase.shape[0], sigma_pair=pair, sigma_phase=phase)

    def recombine(self) -> np.ndarray:
        """Rebuild sigma_ij = sigma_i + sigma_j from the per-phase split."""
        pair = self.sigma_phase[:, None] + self.sigma_phase[None, :]
        np.fill_diagonal(pair, 0.0)
        return pair

    def upper_pairs(self) -> List[Tuple[int, int, float]]:
        """List (i, j, sigma_ij) for i < j."""
        n = self.n_phases
        return [(i, j, float(self.sigma_pair[i, j])) for i in range(n) for j in range(i + 1, n)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_phases': self.n_phases,
            'pairs': [[i, j, s] for i, j, s in self.upper_pairs()],
            'sigma_phase': self.sigma_phase.tolist(),
        }

    def __repr__(self) -> str:
        split = ', '.join(f"{s:g}" for s in self.sigma_phase)
        return f'<TensionSet sigma_k=({split})>'
