"""Fourier transforms and spectral operators on periodic grids.

Normalization: `transform` scales by 1 / prod K_i so that the k = 0
coefficient is the grid mean and a field equals sum_k c_k e^{2 i pi xi_k . x};
`inverse_transform` is unscaled. Internally the solver works with the
real-to-complex half spectrum (rfftn / irfftn), whose scaling cancels.
"""

import os
from typing import List, Sequence

import numpy as np
import scipy.fft

from src.models.errors import FrequencyOutOfRangeError, SizeMismatchError
from src.models.grid import ScalarField, SpectralGrid

FFT_WORKERS = int(os.getenv('MOBIFLOW_FFT_WORKERS', '1'))


def rfftn(values: np.ndarray) -> np.ndarray:
    """Half-spectrum forward transform over all axes of one field."""
    return scipy.fft.rfftn(values, workers=FFT_WORKERS)


def irfftn(coeffs: np.ndarray, shape: Sequence[int]) -> np.ndarray:
    """Inverse of rfftn back to a real array of the given shape."""
    return scipy.fft.irfftn(coeffs, s=tuple(shape), workers=FFT_WORKERS)


def laplacian_symbol(grid: SpectralGrid, k: Sequence[int]) -> float:
    """Fourier symbol of the Laplacian at integer frequency k.

    Args:
        grid: Periodic grid
        k: Frequency vector, each component in [-K_i/2, K_i/2 - 1]

    Returns:
        -4 pi^2 |xi_k|^2 with xi_k = (k_1/L_1, ..., k_d/L_d)

    Raises:
        FrequencyOutOfRangeError: If k has the wrong length or leaves the box
    """
    if len(k) != grid.dim:
        raise FrequencyOutOfRangeError(f"Frequency {tuple(k)} has {len(k)} components, "
                                       f"grid has dimension {grid.dim}")
    total = 0.0
    for axis, (ki, size, length) in enumerate(zip(k, grid.sizes, grid.lengths)):
        low, high = -(size // 2), (size - 1) // 2
        if int(ki) != ki or not low <= ki <= high:
            raise FrequencyOutOfRangeError(
                f"Frequency component {ki} on axis {axis} outside [{low}, {high}]"
            )
        total += (ki / length) ** 2
    return -4.0 * np.pi ** 2 * total


def transform(field: ScalarField) -> np.ndarray:
    """Full-spectrum Fourier coefficients, k = 0 coefficient equal to the mean.

    Coefficients are indexed in FFT order (see SpectralGrid.frequencies).
    """
    return scipy.fft.fftn(field.values, norm='forward', workers=FFT_WORKERS)


def inverse_transform(coeffs: np.ndarray, grid: SpectralGrid) -> ScalarField:
    """Field from full-spectrum coefficients (inverse of `transform`).

    Only the real part is kept; Hermitian-symmetric input yields an
    imaginary part at round-off level.

    Raises:
        SizeMismatchError: If coeffs does not have shape grid.sizes
    """
    if tuple(np.shape(coeffs)) != grid.sizes:
        raise SizeMismatchError(f"Coefficient shape {np.shape(coeffs)} does not match "
                                f"grid {grid.sizes}")
    values = scipy.fft.ifftn(coeffs, norm='forward', workers=FFT_WORKERS).real
    return ScalarField(grid=grid, values=np.ascontiguousarray(values))


def helmholtz_denominator(grid: SpectralGrid, a: float, c: float) -> np.ndarray:
    """1 + a (4 pi^2 |xi|^2 + c) in the half-spectrum layout."""
    return 1.0 + a * (4.0 * np.pi ** 2 * grid.xi_squared_half + c)


def helmholtz_inverse_array(values: np.ndarray, grid: SpectralGrid, a: float,
                            c: float = 0.0) -> np.ndarray:
    """Array form of apply_helmholtz_inverse."""
    if a == 0.0:
        return np.array(values, dtype=float, copy=True)
    coeffs = rfftn(values) / helmholtz_denominator(grid, a, c)
    return irfftn(coeffs, grid.sizes)


def apply_helmholtz_inverse(field: ScalarField, a: float, c: float = 0.0) -> ScalarField:
    """Solve (I - a (Laplacian - c I)) v = field on the periodic grid.

    Mode-wise v_k = f_k / (1 + a (4 pi^2 |xi_k|^2 + c)); the denominator is
    at least 1, so the operator is a max-norm contraction.

    Args:
        field: Right-hand side
        a: Nonnegative time-step weight (dt m sigma)
        c: Nonnegative shift (alpha / epsilon^2)

    Returns:
        The periodic solution v
    """
    if a < 0.0 or c < 0.0:
        raise ValueError(f"Helmholtz weights must be nonnegative, got a={a}, c={c}")
    values = helmholtz_inverse_array(field.values, field.grid, a, c)
    return ScalarField(grid=field.grid, values=values)


def spectral_gradient(values: np.ndarray, grid: SpectralGrid) -> List[np.ndarray]:
    """Spectral partial derivatives along each axis.

    The Nyquist mode of each differentiated axis is dropped so the result
    stays real.

    Args:
        values: Real array of shape grid.sizes
        grid: Periodic grid

    Returns:
        One derivative array per axis
    """
    grid.check_shape(values)
    coeffs = rfftn(values)
    gradient = []
    for axis in range(grid.dim):
        size = grid.sizes[axis]
        if axis == grid.dim - 1:
            k = np.rint(scipy.fft.rfftfreq(size, d=1.0 / size))
        else:
            k = np.rint(scipy.fft.fftfreq(size, d=1.0 / size))
        if size % 2 == 0:
            k[np.abs(k) == size // 2] = 0.0
        shape = [1] * grid.dim
        shape[axis] = k.shape[0]
        factor = (2j * np.pi / grid.lengths[axis]) * k.reshape(shape)
        gradient.append(irfftn(coeffs * factor, grid.sizes))
    return gradient
