"""File formats: raw field snapshots, JSON sidecars, grayscale images, CSV.

Raw snapshots are little-endian 64-bit floats in row-major order with no
header; a JSON sidecar next to each file records the grid and time.
"""

import csv
import json
import os
from typing import Any, Dict, Iterable, Mapping, Sequence, Tuple

import imageio.v3 as iio
import numpy as np

from src.models.errors import SizeMismatchError
from src.models.grid import SpectralGrid
from src.models.time_series import TimeSeries

RAW_DTYPE = np.dtype('<f8')


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(parent):
        os.makedirs(parent)


def write_json(path: str, payload: Mapping[str, Any]) -> None:
    """Write a JSON document with sorted keys (stable across runs)."""
    _ensure_parent(path)
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write('\n')


def read_json(path: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as handle:
        return json.load(handle)


def write_raw_field(path: str, values: np.ndarray, sidecar: Mapping[str, Any]) -> None:
    """Write one field as raw little-endian float64 plus `<path>.json`.

    Args:
        path: Destination of the raw file (conventionally ending in .raw)
        values: Field array, written row-major
        sidecar: Metadata stored next to it
    """
    _ensure_parent(path)
    np.ascontiguousarray(values, dtype=RAW_DTYPE).tofile(path)
    write_json(sidecar_path(path), sidecar)


def read_raw_field(path: str) -> Tuple[np.ndarray, Dict[str, Any]]:
    """Read a raw field and its sidecar, reshaped to the recorded sizes.

    Raises:
        SizeMismatchError: If the file length does not match the sidecar
    """
    meta = read_json(sidecar_path(path))
    sizes = tuple(int(k) for k in meta['sizes'])
    flat = np.fromfile(path, dtype=RAW_DTYPE)
    if flat.size != int(np.prod(sizes)):
        raise SizeMismatchError(f"{path} holds {flat.size} values, sidecar expects {sizes}")
    return flat.astype(float).reshape(sizes), meta


def sidecar_path(path: str) -> str:
    """JSON sidecar name for a data file: fields_000010_1.raw -> fields_000010_1.json."""
    root, _ = os.path.splitext(path)
    return root + '.json'


def snapshot_sidecar(grid: SpectralGrid, time: float, step: int, phase: int) -> Dict[str, Any]:
    return {
        **grid.to_dict(),
        'time': time,
        'step': step,
        'phase': phase,
        'dtype': 'float64-le',
        'order': 'row-major',
    }


def write_image(path: str, image: np.ndarray) -> None:
    """Write an 8-bit grayscale image; the format follows the extension
    (`.pgm` gives a binary P5 file).

    Args:
        path: Destination file
        image: 2D uint8 array, rows first
    """
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f"Grayscale images must be 2D, got shape {image.shape}")
    _ensure_parent(path)
    iio.imwrite(path, np.ascontiguousarray(image, dtype=np.uint8))


def read_image(path: str) -> np.ndarray:
    """Read a grayscale image into a (height, width) uint8 array."""
    image = np.asarray(iio.imread(path))
    if image.ndim != 2:
        raise ValueError(f"{path} is not a single-channel image (shape {image.shape})")
    if image.dtype != np.uint8:
        raise ValueError(f"{path}: only 8-bit images are supported, got {image.dtype}")
    return image


def composite_image(fields: np.ndarray, weights: Sequence[float]) -> np.ndarray:
    """Grayscale composite sum_k c_k u_k mapped from [min(0, min c), max c] to [0, 255].

    Args:
        fields: Array (N,) + 2D slice shape
        weights: Channel weights c_k

    Returns:
        uint8 image
    """
    weights = np.asarray(weights, dtype=float)
    value = np.tensordot(weights, fields, axes=1)
    low = min(0.0, float(np.min(weights)))
    high = float(np.max(weights))
    span = high - low if high > low else 1.0
    scaled = np.clip((value - low) / span, 0.0, 1.0)
    return np.rint(255.0 * scaled).astype(np.uint8)


def write_time_series(path: str, series: TimeSeries) -> None:
    """Write a TimeSeries as CSV with repr precision (byte-stable reruns)."""
    _ensure_parent(path)
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(series.header())
        for row in series.rows:
            writer.writerow([repr(float(v)) for v in row.values()])


def read_time_series_columns(path: str) -> Dict[str, np.ndarray]:
    """Read a diagnostics CSV back as named float columns."""
    with open(path, 'r', newline='', encoding='utf-8') as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    table = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: table[:, i] for i, name in enumerate(header)}


def iter_files(directory: str, prefix: str) -> Iterable[str]:
    """Sorted file names in a directory starting with a prefix."""
    return sorted(name for name in os.listdir(directory) if name.startswith(prefix))
