"""Signed distances and phase initialization.

Phase i (for i < N) is initialized as q(d_i / eps) with q the optimal
profile and d_i the signed distance to shape i; the last phase is ambient
and takes 1 - sum of the others, so the partition constraint holds by
construction.
"""

import itertools
import logging
import os
import warnings
from typing import Any, List, Mapping, Optional, Sequence

import numpy as np
from scipy import ndimage

from src.models.errors import ConfigInvalidError, DimensionMismatchError, ShapeOverlapWarning
from src.models.grid import SpectralGrid
from src.models.phase_state import PhaseState
from src.models.shape import Ball, Complement, HalfSpace, Intersection, RasterLabel, Shape
from src.models.shape import Union as ShapeUnion
from src.services import output_service
from src.services.potential_service import profile

logger = logging.getLogger(__name__)

OVERLAP_MARGIN = 2.0
RAW_SUFFIX = '.raw'


def signed_distance(shape: Shape, x: Sequence[float],
                    period: Optional[Sequence[float]] = None):
    """Signed distance from shape at one point or an array of points.

    Args:
        shape: Shape primitive or composition
        x: Point of length d, or array of points with last axis d
        period: Box lengths for periodic images (balls only)

    Returns:
        Negative inside, positive outside
    """
    value = shape.signed_distance(np.asarray(x, dtype=float), period)
    return float(value) if np.ndim(value) == 0 else value


def load_label_image(path: str) -> tuple:
    """Read a label image and its pixel-value-to-phase mapping.

    Files ending in `.raw` are raw 8-bit data whose sizes come from the
    sidecar; anything else (PGM, PNG, ...) is decoded with imageio.
    The sidecar `<stem>.json` holds
    {"labels": {"<pixel value>": <phase index>, ...}} and, for raw files,
    "sizes".

    Args:
        path: Image file

    Returns:
        (labels array of uint8, dict mapping pixel value -> phase index)
    """
    meta = output_service.read_json(output_service.sidecar_path(path))
    if 'labels' not in meta:
        raise ConfigInvalidError(path, "sidecar has no 'labels' mapping")
    mapping = {int(pixel): int(phase) for pixel, phase in meta['labels'].items()}
    if os.path.splitext(path)[1].lower() != RAW_SUFFIX:
        try:
            return output_service.read_image(path), mapping
        except (OSError, ValueError) as error:
            raise ConfigInvalidError(path, f"unreadable label image: {error}") from error
    if 'sizes' not in meta:
        raise ConfigInvalidError(path, "raw label images need 'sizes' in the sidecar")
    sizes = tuple(int(k) for k in meta['sizes'])
    image = np.fromfile(path, dtype=np.uint8)
    if image.size != int(np.prod(sizes)):
        raise ConfigInvalidError(path, f"raw image holds {image.size} bytes, expected {sizes}")
    return image.reshape(sizes), mapping


def region_distance(inside: np.ndarray, spacing: Sequence[float]) -> np.ndarray:
    """Approximate periodic signed distance of a boolean region.

    Uses the Euclidean distance transform on a wrap-padded copy, shifted by
    half a cell so that the boundary sits between inside and outside nodes.
    """
    if not inside.any():
        return np.full(inside.shape, np.inf)
    if inside.all():
        return np.full(inside.shape, -np.inf)
    pad = [(k // 2, k // 2) for k in inside.shape]
    padded = np.pad(inside, pad, mode='wrap')
    outside_distance = ndimage.distance_transform_edt(~padded, sampling=spacing)
    inside_distance = ndimage.distance_transform_edt(padded, sampling=spacing)
    crop = tuple(slice(p, p + k) for (p, _), k in zip(pad, inside.shape))
    half_cell = 0.5 * min(spacing)
    return np.where(inside[...], -(inside_distance[crop] - half_cell),
                    outside_distance[crop] - half_cell)


def raster_shape(path: str, phase: int, grid: SpectralGrid) -> RasterLabel:
    """Region of a label image assigned to one phase.

    Args:
        path: Label image (PGM, PNG or raw) with JSON sidecar
        phase: Phase index whose pixel values form the region
        grid: Simulation grid; the image must have the grid sizes

    Returns:
        RasterLabel carrying the signed distance on the grid nodes
    """
    image, mapping = load_label_image(path)
    if tuple(image.shape) != grid.sizes:
        raise DimensionMismatchError(f"Label image {image.shape} does not match grid {grid.sizes}")
    pixels = [pixel for pixel, target in mapping.items() if target == phase]
    inside = np.isin(image, pixels)
    if not inside.any():
        logger.warning("Label image %s has no pixels for phase %d", path, phase)
    distance = region_distance(inside, grid.spacing)
    distance.setflags(write=False)
    return RasterLabel(distance=distance, origin=grid.origin, spacing=grid.spacing,
                       source=path, label=phase)


def shape_from_dict(table: Mapping[str, Any], grid: SpectralGrid, path: str = 'shapes',
                    base_dir: str = '.', phase: int = 0) -> Shape:
    """Build a shape from a config table.

    Args:
        table: Mapping with 'type' in ball | halfspace | union | intersection |
            complement | raster
        grid: Simulation grid (dimension checks, raster sampling)
        path: Config path for error messages
        base_dir: Directory relative raster paths are resolved against
        phase: Phase the shape initializes (default raster label)

    Returns:
        Shape

    Raises:
        ConfigInvalidError: On unknown types or malformed fields
    """
    kind = table.get('type')
    dim = grid.dim

    def vector(key: str) -> tuple:
        value = table.get(key)
        if not isinstance(value, (list, tuple)) or len(value) != dim:
            raise ConfigInvalidError(f"{path}.{key}", f"expected {dim} numbers")
        return tuple(float(v) for v in value)

    def children(key: str) -> tuple:
        value = table.get(key)
        if not isinstance(value, list):
            raise ConfigInvalidError(f"{path}.{key}", "expected an array of shape tables")
        return tuple(shape_from_dict(child, grid, f"{path}.{key}[{i}]", base_dir, phase)
                     for i, child in enumerate(value))

    if kind == 'ball':
        radius = float(table.get('radius', 0.0))
        if radius <= 0.0:
            raise ConfigInvalidError(f"{path}.radius", "must be positive")
        return Ball(center=vector('center'), radius=radius)
    if kind == 'halfspace':
        try:
            return HalfSpace(normal=vector('normal'), offset=float(table.get('offset', 0.0)))
        except ValueError as e:
            raise ConfigInvalidError(f"{path}.normal", str(e))
    if kind == 'union':
        return ShapeUnion(shapes=children('shapes'))
    if kind == 'intersection':
        return Intersection(shapes=children('shapes'))
    if kind == 'complement':
        inner = table.get('shape')
        if not isinstance(inner, Mapping):
            raise ConfigInvalidError(f"{path}.shape", "expected a shape table")
        return Complement(shape=shape_from_dict(inner, grid, f"{path}.shape", base_dir, phase))
    if kind == 'raster':
        file = table.get('path')
        if not file:
            raise ConfigInvalidError(f"{path}.path", "missing label image path")
        full = file if os.path.isabs(file) else os.path.join(base_dir, file)
        if not os.path.exists(full):
            raise ConfigInvalidError(f"{path}.path", f"file not found: {full}")
        return raster_shape(full, int(table.get('phase', phase)), grid)
    raise ConfigInvalidError(f"{path}.type", f"unknown shape type {kind!r}")


def distance_fields(grid: SpectralGrid, shapes: Sequence[Shape]) -> List[np.ndarray]:
    """Signed distance of every shape at every grid node."""
    points = grid.points()
    return [np.asarray(s.signed_distance(points, grid.lengths), dtype=float) for s in shapes]


def overlapping_pairs(distances: Sequence[np.ndarray], epsilon: float) -> List[tuple]:
    """Pairs of shapes closer than OVERLAP_MARGIN * eps to each other's interior."""
    margin = OVERLAP_MARGIN * epsilon
    pairs = []
    for i, j in itertools.combinations(range(len(distances)), 2):
        count = int(np.count_nonzero((distances[i] < margin) & (distances[j] < margin)))
        if count:
            pairs.append((i, j, count))
    return pairs


def init_phases(grid: SpectralGrid, shapes: Sequence[Shape], epsilon: float) -> PhaseState:
    """Initialize N = len(shapes) + 1 phases from disjoint shapes.

    Args:
        grid: Periodic grid
        shapes: One shape per non-ambient phase
        epsilon: Interface width

    Returns:
        PhaseState at time 0 with the last phase ambient

    Warns:
        ShapeOverlapWarning: If two shapes come within a few eps of each other
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    distances = distance_fields(grid, shapes)
    for i, j, count in overlapping_pairs(distances, epsilon):
        message = f"Shapes {i} and {j} are closer than {OVERLAP_MARGIN:g} eps at {count} nodes"
        logger.warning(message)
        warnings.warn(message, ShapeOverlapWarning, stacklevel=2)

    fields = np.empty((len(shapes) + 1,) + grid.sizes)
    for i, distance in enumerate(distances):
        fields[i] = profile(distance / epsilon)
    fields[-1] = 1.0 - np.sum(fields[:-1], axis=0) if shapes else 1.0
    return PhaseState(grid=grid, fields=fields, time=0.0, step=0)
