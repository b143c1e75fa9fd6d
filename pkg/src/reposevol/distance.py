"""Per-pixel distance to the pile boundary.

Two routes to the same quantity:

* distance_transform — exact Euclidean distance transform of a raster
  mask, measured between pixel centers.  The virtual one-pixel frame
  outside the grid counts as background, so a mask touching the grid
  edge (or covering it entirely) stays well defined.
* polygon_distance_field — sub-pixel exact distance from each interior
  pixel center to the contour polyline, with no rasterization bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import OutOfBounds
from .maskio import PileContour, RasterMask, _readonly


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Row-major grid of boundary distances in pixel units, 0 outside piles."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError("distance field must be a non-empty 2D grid")
        if v.min() < 0:
            raise ValueError("distances cannot be negative")
        object.__setattr__(self, "values", _readonly(v))

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def point_inside_contour(point, contour: PileContour) -> bool:
    """Even-odd crossing test, same convention as the grid kernels."""
    px, py = float(point[0]), float(point[1])
    v = contour.vertices
    n = len(v)
    flag = False
    for k in range(n):
        x1, y1 = v[k]
        x2, y2 = v[(k + 1) % n]
        if (y1 <= py) != (y2 <= py):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xint:
                flag = not flag
    return flag


def boundary_distance(point, contour: PileContour) -> float:
    """Minimum distance from a point to the contour polyline (any side)."""
    px, py = float(point[0]), float(point[1])
    v = contour.vertices
    a = v
    b = np.roll(v, -1, axis=0)
    d = b - a
    L2 = np.einsum("ij,ij->i", d, d)
    L2safe = np.where(L2 > 0, L2, 1.0)
    t = ((px - a[:, 0]) * d[:, 0] + (py - a[:, 1]) * d[:, 1]) / L2safe
    t = np.clip(np.where(L2 > 0, t, 0.0), 0.0, 1.0)
    qx = a[:, 0] + t * d[:, 0]
    qy = a[:, 1] + t * d[:, 1]
    return float(np.sqrt(np.min((px - qx) ** 2 + (py - qy) ** 2)))


def point_to_contour_distance(point, contour: PileContour) -> float:
    """Distance from a point to the nearest boundary segment, 0 outside.

    Points on the boundary or outside the polygon return 0; strictly
    interior points return the distance to the closest point of the
    boundary polyline (not just to the vertices).
    """
    if not point_inside_contour(point, contour):
        return 0.0
    return boundary_distance(point, contour)


def squared_distance_transform(mask: RasterMask) -> np.ndarray:
    """Exact int64 squared center-to-center distances to the background.

    For every set pixel: the squared Euclidean distance from its center
    to the nearest non-set pixel center, where the virtual frame one
    pixel outside the grid counts as background.  Non-set pixels get 0.
    """
    cells = mask.cells
    padded = np.zeros((cells.shape[0] + 2, cells.shape[1] + 2), dtype=np.uint8)
    padded[1:-1, 1:-1] = cells
    return kernels.edt_sq(padded)[1:-1, 1:-1]


def distance_transform(mask: RasterMask) -> DistanceField:
    """Exact Euclidean distance transform of a raster mask (pixel units)."""
    return DistanceField(np.sqrt(squared_distance_transform(mask).astype(np.float64)))


def polygon_distance_field(contour: PileContour, width: int, height: int) -> DistanceField:
    """Sub-pixel boundary distance at every pixel center inside the polygon."""
    xmin, ymin, xmax, ymax = contour.bbox
    if xmin < 0 or ymin < 0 or xmax > width or ymax > height:
        raise OutOfBounds(
            f"{contour.pile_id}: bbox exceeds {width}x{height} grid"
        )
    values = kernels.polygon_distance_grid(
        contour.vertices[:, 0], contour.vertices[:, 1], width, height, 0.5, 0.5, 1.0
    )
    return DistanceField(values)
