"""Shape primitives with signed distances.

Signed distances are negative inside the shape and positive outside.
Ball and HalfSpace distances are exact; Union, Intersection and Complement
combine distances with min, max and negation, which is exact for disjoint
or otherwise simple configurations and an approximation elsewhere.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np


class Shape:
    """Base class: subclasses implement signed_distance."""

    kind = 'shape'

    def signed_distance(self, points: np.ndarray,
                        period: Optional[Sequence[float]] = None) -> np.ndarray:
        """Signed distance at points of shape (..., d).

        Args:
            points: Coordinates, last axis is the spatial dimension
            period: Box lengths when the domain is periodic

        Returns:
            Array of shape points.shape[:-1]
        """
        raise NotImplementedError("signed_distance must be implemented by subclasses")

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError("to_dict must be implemented by subclasses")


@dataclass(frozen=True)
class Ball(Shape):
    """Euclidean ball; periodic images are taken into account."""

    center: Tuple[float, ...]
    radius: float

    kind = 'ball'

    def signed_distance(self, points, period=None):
        center = np.asarray(self.center, dtype=float)
        points = np.asarray(points, dtype=float)
        if period is None:
            return np.linalg.norm(points - center, axis=-1) - self.radius
        period = np.asarray(period, dtype=float)
        best = None
        for shift in itertools.product((-1.0, 0.0, 1.0), repeat=center.shape[0]):
            image = center + np.asarray(shift) * period
            distance = np.linalg.norm(points - image, axis=-1)
            best = distance if best is None else np.minimum(best, distance)
        return best - self.radius

    def to_dict(self):
        return {'type': self.kind, 'center': list(self.center), 'radius': self.radius}


@dataclass(frozen=True)
class HalfSpace(Shape):
    """Half space {x : n.x <= offset} with unit normal n."""

    normal: Tuple[float, ...]
    offset: float

    kind = 'halfspace'

    def __post_init__(self) -> None:
        normal = np.asarray(self.normal, dtype=float)
        norm = float(np.linalg.norm(normal))
        if norm == 0.0:
            raise ValueError("HalfSpace normal must be nonzero")
        object.__setattr__(self, 'normal', tuple(float(v) for v in normal / norm))

    def signed_distance(self, points, period=None):
        points = np.asarray(points, dtype=float)
        return points @ np.asarray(self.normal) - self.offset

    def to_dict(self):
        return {'type': self.kind, 'normal': list(self.normal), 'offset': self.offset}


@dataclass(frozen=True)
class Union(Shape):
    shapes: Tuple[Shape, ...]

    kind = 'union'

    def signed_distance(self, points, period=None):
        if not self.shapes:
            return np.full(np.shape(points)[:-1], np.inf)
        return np.minimum.reduce([s.signed_distance(points, period) for s in self.shapes])

    def to_dict(self):
        return {'type': self.kind, 'shapes': [s.to_dict() for s in self.shapes]}


@dataclass(frozen=True)
class Intersection(Shape):
    shapes: Tuple[Shape, ...]

    kind = 'intersection'

    def signed_distance(self, points, period=None):
        if not self.shapes:
            return np.full(np.shape(points)[:-1], -np.inf)
        return np.maximum.reduce([s.signed_distance(points, period) for s in self.shapes])

    def to_dict(self):
        return {'type': self.kind, 'shapes': [s.to_dict() for s in self.shapes]}


@dataclass(frozen=True)
class Complement(Shape):
    shape: Shape

    kind = 'complement'

    def signed_distance(self, points, period=None):
        return -self.shape.signed_distance(points, period)

    def to_dict(self):
        return {'type': self.kind, 'shape': self.shape.to_dict()}


@dataclass(frozen=True, eq=False)
class RasterLabel(Shape):
    """Region read from a label image, with a precomputed distance field.

    Attributes:
        distance: Signed distance sampled on the image nodes
        origin: Coordinates of image node (0, ..., 0)
        spacing: Node spacing per axis
        source: Path of the label image
        label: Phase index the region was extracted for
    """

    distance: np.ndarray
    origin: Tuple[float, ...]
    spacing: Tuple[float, ...]
    source: str = ''
    label: int = 0

    kind = 'raster'

    def signed_distance(self, points, period=None):
        points = np.asarray(points, dtype=float)
        sizes = self.distance.shape
        index = []
        for axis in range(len(sizes)):
            k = np.rint((points[..., axis] - self.origin[axis]) / self.spacing[axis]).astype(int)
            index.append(np.mod(k, sizes[axis]))
        return self.distance[tuple(index)]

    def to_dict(self):
        return {'type': self.kind, 'path': self.source, 'phase': self.label}
