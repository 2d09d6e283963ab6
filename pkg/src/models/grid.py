"""Periodic grid and scalar field models.

This module defines the SpectralGrid (a periodic rectangular box in 2D or
3D discretized with K_i nodes per axis) and the ScalarField holding one
real value per node. Node k sits at origin + (k_1 h_1, ..., k_d h_d) and
arrays are laid out row-major with k_1 slowest.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.fft

from src.models.errors import DimensionMismatchError, SizeMismatchError


@dataclass(frozen=True)
class SpectralGrid:
    """Periodic grid geometry.

    Attributes:
        sizes: Node counts K_1..K_d (powers of two recommended)
        lengths: Box lengths L_1..L_d
        origin: Coordinates of node (0, ..., 0)
    """

    sizes: Tuple[int, ...]
    lengths: Tuple[float, ...]
    origin: Tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        sizes = tuple(int(k) for k in self.sizes)
        lengths = tuple(float(length) for length in self.lengths)
        origin = tuple(float(o) for o in self.origin) if self.origin else (0.0,) * len(sizes)
        if len(sizes) not in (2, 3):
            raise DimensionMismatchError(f"Grid dimension must be 2 or 3, got {len(sizes)}")
        if len(lengths) != len(sizes) or len(origin) != len(sizes):
            raise DimensionMismatchError("sizes, lengths and origin must have the same length")
        if any(k < 2 for k in sizes):
            raise ValueError(f"Grid sizes must be at least 2, got {sizes}")
        if any(not (length > 0.0) for length in lengths):
            raise ValueError(f"Grid lengths must be positive, got {lengths}")
        object.__setattr__(self, 'sizes', sizes)
        object.__setattr__(self, 'lengths', lengths)
        object.__setattr__(self, 'origin', origin)

    @classmethod
    def centered_cube(cls, dim: int, size: int, length: float = 1.0) -> 'SpectralGrid':
        """Grid on [-L/2, L/2]^dim with the same node count on every axis."""
        return cls(sizes=(size,) * dim, lengths=(length,) * dim, origin=(-0.5 * length,) * dim)

    @property
    def dim(self) -> int:
        return len(self.sizes)

    @property
    def spacing(self) -> Tuple[float, ...]:
        """Node spacings h_i = L_i / K_i."""
        return tuple(length / k for length, k in zip(self.lengths, self.sizes))

    @property
    def cell_volume(self) -> float:
        """Quadrature weight prod h_i."""
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.sizes))

    @property
    def max_size(self) -> int:
        """The K used by symbolic 'c/K' parameter forms."""
        return max(self.sizes)

    def axis_coordinates(self, axis: int) -> np.ndarray:
        """1D node coordinates along one axis."""
        return self.origin[axis] + self.spacing[axis] * np.arange(self.sizes[axis])

    def node_coordinates(self) -> List[np.ndarray]:
        """Per-axis coordinate arrays of shape sizes (ij indexing)."""
        axes = [self.axis_coordinates(a) for a in range(self.dim)]
        return list(np.meshgrid(*axes, indexing='ij'))

    def points(self) -> np.ndarray:
        """Node coordinates stacked on the last axis, shape sizes + (dim,)."""
        return np.stack(self.node_coordinates(), axis=-1)

    def frequencies(self, axis: int) -> np.ndarray:
        """Signed integer frequencies of one axis in FFT order.

        Covers the box [-K/2, K/2 - 1] for even K.
        """
        k = self.sizes[axis]
        return np.rint(scipy.fft.fftfreq(k, d=1.0 / k))

    @cached_property
    def xi_squared(self) -> np.ndarray:
        """|xi_k|^2 = sum (k_i / L_i)^2 on the full spectrum."""
        parts = [(self.frequencies(a) / self.lengths[a]) ** 2 for a in range(self.dim)]
        grids = np.meshgrid(*parts, indexing='ij')
        return np.sum(grids, axis=0)

    @cached_property
    def xi_squared_half(self) -> np.ndarray:
        """|xi_k|^2 in the real-to-complex (rfftn) layout."""
        parts = [(self.frequencies(a) / self.lengths[a]) ** 2 for a in range(self.dim - 1)]
        last = self.sizes[-1]
        parts.append((np.rint(scipy.fft.rfftfreq(last, d=1.0 / last)) / self.lengths[-1]) ** 2)
        grids = np.meshgrid(*parts, indexing='ij')
        return np.sum(grids, axis=0)

    def check_shape(self, values: np.ndarray) -> None:
        """Raise SizeMismatchError unless values has shape sizes."""
        if tuple(values.shape) != self.sizes:
            raise SizeMismatchError(f"Array shape {values.shape} does not match grid {self.sizes}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sizes': list(self.sizes),
            'lengths': list(self.lengths),
            'origin': list(self.origin),
        }

    def __repr__(self) -> str:
        sizes = 'x'.join(str(k) for k in self.sizes)
        return f'<SpectralGrid {sizes} L={self.lengths}>'


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One real value per grid node.

    Attributes:
        grid: The grid the field lives on
        values: Array of shape grid.sizes
    """

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.grid.check_shape(self.values)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Scalar field values must be finite")

    @classmethod
    def from_flat(cls, grid: SpectralGrid, flat: Sequence[float]) -> 'ScalarField':
        """Create a field from a row-major flat vector of prod K_i entries."""
        flat = np.asarray(flat, dtype=float)
        if flat.size != grid.n_nodes:
            raise SizeMismatchError(f"Expected {grid.n_nodes} values, got {flat.size}")
        return cls(grid=grid, values=flat.reshape(grid.sizes))

    @classmethod
    def constant(cls, grid: SpectralGrid, value: float = 0.0) -> 'ScalarField':
        return cls(grid=grid, values=np.full(grid.sizes, float(value)))

    def flat(self) -> np.ndarray:
        """Row-major flat copy of the values."""
        return np.ascontiguousarray(self.values).ravel(order='C')

    def mean(self) -> float:
        return float(np.mean(self.values))

    def max_norm(self, other: Optional['ScalarField'] = None) -> float:
        """Max-norm of the field, or of its difference with another field."""
        values = self.values if other is None else self.values - other.values
        return float(np.max(np.abs(values)))
