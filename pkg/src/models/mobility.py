"""Mobility models: pairwise mobilities and their harmonic decomposition.

This module defines the MobilitySet (symmetric nonnegative matrix of
interface mobilities m_ij), the HarmonicComponent (per-phase coefficients
m_i^p whose pairwise harmonic means give the component's pair values) and
the HarmonicDecomposition (a list of components summing to a MobilitySet).
"""

import numbers
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

from src.models.errors import ConfigInvalidError

ArrayLike = Union[float, np.ndarray]


def harmonic_pair(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Harmonic combination (1/a + 1/b)^-1 of nonnegative coefficients.

    A zero argument forces a zero result (1/0+ = +inf), so no infinity is
    ever formed or stored.

    Args:
        a: Nonnegative coefficient(s)
        b: Nonnegative coefficient(s), broadcastable against a

    Returns:
        a*b/(a+b), or 0 where either argument is 0
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    total = a + b
    safe = np.where(total > 0.0, total, 1.0)
    result = np.where((a > 0.0) & (b > 0.0), a * b / safe, 0.0)
    return float(result) if result.ndim == 0 else result


def _check_square(matrix: np.ndarray, path: str) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ConfigInvalidError(path, f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] < 2:
        raise ConfigInvalidError(path, "at least two phases are required")


def pairs_to_matrix(n_phases: int, entries: Sequence[Sequence[float]], path: str,
                    quantity: str) -> np.ndarray:
    """Build a symmetric matrix from (i, j, value) entries.

    Args:
        n_phases: Number of phases
        entries: Iterable of [i, j, value] with 0-based phase indices
        path: Config path used in error messages
        quantity: Name of the quantity ('mobility', 'tension') for messages

    Returns:
        Symmetric n x n matrix with zero diagonal; missing pairs are 0

    Raises:
        ConfigInvalidError: On malformed, out-of-range, diagonal, negative,
            non-finite or conflicting entries
    """
    matrix = np.zeros((n_phases, n_phases))
    seen: Dict[Tuple[int, int], float] = {}
    for index, entry in enumerate(entries):
        where = f"{path}[{index}]"
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ConfigInvalidError(where, "expected [i, j, value]")
        i, j, value = entry
        if any(isinstance(v, bool) or not isinstance(v, numbers.Real) for v in entry):
            raise ConfigInvalidError(where, "expected numbers in [i, j, value]")
        if not (float(i).is_integer() and float(j).is_integer()):
            raise ConfigInvalidError(where, "phase indices must be integers")
        i, j, value = int(i), int(j), float(value)
        if not (0 <= i < n_phases and 0 <= j < n_phases):
            raise ConfigInvalidError(where, f"phase index out of range for {n_phases} phases")
        if i == j:
            raise ConfigInvalidError(where, f"diagonal {quantity} ({i}, {j}) is not allowed")
        if not np.isfinite(value):
            raise ConfigInvalidError(where, f"non-finite {quantity} {value}")
        if value < 0.0:
            raise ConfigInvalidError(where, f"negative {quantity} {value} for phases ({i}, {j})")
        key = (min(i, j), max(i, j))
        if key in seen and seen[key] != value:
            raise ConfigInvalidError(where, f"conflicting {quantity} values for phases {key}")
        seen[key] = value
        matrix[i, j] = matrix[j, i] = value
    return matrix


def check_symmetric_matrix(matrix: np.ndarray, path: str, quantity: str) -> np.ndarray:
    """Validate a full symmetric nonnegative matrix with zero diagonal.

    Args:
        matrix: Candidate matrix
        path: Config path used in error messages
        quantity: Name of the quantity for messages

    Returns:
        The matrix as a float array

    Raises:
        ConfigInvalidError: If the matrix is not square, symmetric,
            nonnegative and zero on the diagonal
    """
    matrix = np.array(matrix, dtype=float)
    _check_square(matrix, path)
    n = matrix.shape[0]
    for i in range(n):
        if matrix[i, i] != 0.0:
            raise ConfigInvalidError(f"{path}[{i}][{i}]", f"diagonal {quantity} must be 0")
        for j in range(n):
            if not np.isfinite(matrix[i, j]):
                raise ConfigInvalidError(f"{path}[{i}][{j}]", f"non-finite {quantity}")
            if matrix[i, j] < 0.0:
                raise ConfigInvalidError(
                    f"{path}[{i}][{j}]",
                    f"negative {quantity} {matrix[i, j]} for phases ({i}, {j})"
                )
            if matrix[i, j] != matrix[j, i]:
                raise ConfigInvalidError(f"{path}[{i}][{j}]", f"{quantity} matrix is not symmetric")
    return matrix


@dataclass(frozen=True, eq=False)
class MobilitySet:
    """Symmetric matrix of nonnegative interface mobilities.

    Attributes:
        n_phases: Number of phases (>= 2)
        matrix: n x n array with m[i][j] = m[j][i] >= 0 and zero diagonal
    """

    n_phases: int
    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[float]],
                    path: str = 'mobilities.matrix') -> 'MobilitySet':
        """Create a mobility set from a full matrix.

        Args:
            matrix: Symmetric nonnegative matrix with zero diagonal
            path: Config path used in error messages

        Returns:
            Validated MobilitySet
        """
        checked = check_symmetric_matrix(np.asarray(matrix, dtype=float), path, 'mobility')
        checked.setflags(write=False)
        return cls(n_phases=checked.shape[0], matrix=checked)

    @classmethod
    def from_pairs(cls, n_phases: int, entries: Sequence[Sequence[float]],
                   path: str = 'mobilities.pairs') -> 'MobilitySet':
        """Create a mobility set from an upper-triangular pair list.

        Args:
            n_phases: Number of phases
            entries: [i, j, value] triples, 0-based
            path: Config path used in error messages

        Returns:
            Validated MobilitySet
        """
        if n_phases < 2:
            raise ConfigInvalidError(path, "at least two phases are required")
        matrix = pairs_to_matrix(n_phases, entries, path, 'mobility')
        matrix.setflags(write=False)
        return cls(n_phases=n_phases, matrix=matrix)

    def pair(self, i: int, j: int) -> float:
        """Mobility of the interface between phases i and j."""
        return float(self.matrix[i, j])

    def upper_pairs(self) -> List[Tuple[int, int, float]]:
        """List (i, j, m_ij) for all i < j, in lexicographic order."""
        n = self.n_phases
        return [(i, j, float(self.matrix[i, j])) for i in range(n) for j in range(i + 1, n)]

    def frozen_phases(self) -> List[int]:
        """Phases whose mobilities with every other phase vanish."""
        return [i for i in range(self.n_phases) if not np.any(self.matrix[i] > 0.0)]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-friendly dictionary."""
        return {
            'n_phases': self.n_phases,
            'pairs': [[i, j, m] for i, j, m in self.upper_pairs()],
        }

    def __repr__(self) -> str:
        pairs = ', '.join(f"m{i}{j}={m:g}" for i, j, m in self.upper_pairs())
        return f'<MobilitySet {pairs}>'


@dataclass(frozen=True, eq=False)
class HarmonicComponent:
    """Harmonically additive mobility component.

    Attributes:
        phase_coeffs: Nonnegative per-phase coefficients m_i^p
    """

    phase_coeffs: np.ndarray

    @classmethod
    def create(cls, phase_coeffs: Sequence[float]) -> 'HarmonicComponent':
        """Create a component from per-phase coefficients.

        Args:
            phase_coeffs: Finite coefficients; negative entries are kept so
                that validation can report them

        Returns:
            HarmonicComponent with a read-only coefficient array
        """
        coeffs = np.array(phase_coeffs, dtype=float)
        if coeffs.ndim != 1:
            raise ValueError("Component coefficients must be a flat vector")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("Component coefficients must be finite")
        coeffs.setflags(write=False)
        return cls(phase_coeffs=coeffs)

    @property
    def n_phases(self) -> int:
        return int(self.phase_coeffs.shape[0])

    @property
    def pair_values(self) -> np.ndarray:
        """Pair values m_ij^p = harmonic_pair(m_i^p, m_j^p), zero diagonal."""
        c = self.phase_coeffs
        values = harmonic_pair(c[:, None], c[None, :])
        np.fill_diagonal(values, 0.0)
        return values

    def is_useless(self) -> bool:
        """True when every pair value vanishes (at most one positive coefficient)."""
        return int(np.count_nonzero(self.phase_coeffs > 0.0)) < 2

    def to_dict(self) -> Dict[str, Any]:
        return {'phase_coeffs': self.phase_coeffs.tolist()}

    def __repr__(self) -> str:
        return f"<HarmonicComponent {tuple(float(c) for c in self.phase_coeffs)}>"


@dataclass(frozen=True, eq=False)
class HarmonicDecomposition:
    """Ordered list of harmonic components summing to a mobility matrix.

    Attributes:
        components: The P components
        n_phases: Number of phases
        m_star: Aggregated coefficients m_k^* = sum_p m_k^p
        label: How the decomposition was built ('canonical', 'sparse', 'explicit')
    """

    components: Tuple[HarmonicComponent, ...]
    n_phases: int
    m_star: np.ndarray = field(repr=False)
    label: str = 'explicit'

    @classmethod
    def from_components(cls, components: Sequence[HarmonicComponent], n_phases: int,
                        label: str = 'explicit') -> 'HarmonicDecomposition':
        """Assemble a decomposition, pruning useless components.

        A component whose pair values all vanish cannot move any interface;
        its coefficients are zeroed so that it does not feed m_star.

        Args:
            components: Components, each with n_phases coefficients
            n_phases: Number of phases
            label: Construction label

        Returns:
            HarmonicDecomposition with the component count preserved
        """
        pruned = []
        for component in components:
            if component.n_phases != n_phases:
                raise ValueError(
                    f"Component has {component.n_phases} coefficients, expected {n_phases}"
                )
            if component.is_useless() and np.any(component.phase_coeffs != 0.0):
                component = HarmonicComponent.create(np.zeros(n_phases))
            pruned.append(component)
        m_star = np.zeros(n_phases)
        for component in pruned:
            m_star = m_star + component.phase_coeffs
        m_star.setflags(write=False)
        return cls(components=tuple(pruned), n_phases=n_phases, m_star=m_star, label=label)

    @property
    def size(self) -> int:
        """Number of components P."""
        return len(self.components)

    def coefficient_matrix(self) -> np.ndarray:
        """P x n array of coefficients m_i^p (shape (0, n) when empty)."""
        if not self.components:
            return np.zeros((0, self.n_phases))
        return np.stack([c.phase_coeffs for c in self.components])

    def active_components(self) -> List[HarmonicComponent]:
        """Components with at least one positive coefficient."""
        return [c for c in self.components if np.any(c.phase_coeffs > 0.0)]

    def reconstruct(self) -> np.ndarray:
        """Sum of the component pair values."""
        total = np.zeros((self.n_phases, self.n_phases))
        for component in self.components:
            total = total + component.pair_values
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'P': self.size,
            'components': [c.phase_coeffs.tolist() for c in self.components],
            'm_star': self.m_star.tolist(),
        }

    def __repr__(self) -> str:
        return f"<HarmonicDecomposition {self.label} P={self.size}>"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a decomposition against its mobility set.

    Attributes:
        passed: True when reconstruction and sign checks both hold
        max_error: Largest |sum_p m_ij^p - m_ij| over pairs
        max_negative: Magnitude of the most negative coefficient (0 if none)
        n_components: Number of components P
        reasons: Failed checks, empty when passed
    """

    passed: bool
    max_error: float
    max_negative: float
    n_components: int
    reasons: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'max_error': self.max_error,
            'max_negative': self.max_negative,
            'P': self.n_components,
            'reasons': list(self.reasons),
        }
