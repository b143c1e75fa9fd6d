"""Height reconstruction and volume/tonnage integration.

A pile surface at the angle of repose rises tan(theta) meters per meter
of horizontal distance from the footprint boundary, so per-pixel height
is distance_px * pixel_size_m * tan(theta).  Volume is the height sum
times the pixel area; summation is compensated (math.fsum) so batches of
~10^6 pixels do not drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distance import DistanceField, distance_transform, polygon_distance_field
from .errors import AngleOutOfRange, EmptyInput, NonPositiveInput
from .maskio import GridGeometry, PileContour, RasterMask, _readonly, rasterize

RASTER_PATH = "raster"
EXACT_PATH = "exact"
_PATH_ALIASES = {
    "raster": RASTER_PATH,
    "exact": EXACT_PATH,
    "polygon-exact": EXACT_PATH,
    "polygon": EXACT_PATH,
}


@dataclass(frozen=True)
class ReposeAngle:
    """Material angle of repose in degrees, open interval (0, 90)."""

    degrees: float

    def __post_init__(self):
        d = self.degrees
        if not (isinstance(d, (int, float)) and math.isfinite(d) and 0.0 < d < 90.0):
            raise AngleOutOfRange(f"angle must be in (0, 90) degrees, got {d!r}")
        object.__setattr__(self, "degrees", float(d))

    @property
    def radians(self) -> float:
        return math.radians(self.degrees)

    @property
    def tangent(self) -> float:
        return math.tan(self.radians)


@dataclass(frozen=True)
class MaterialSpec:
    """Bulk material: name, loose bulk density, angle of repose."""

    name: str
    bulk_density_t_per_m3: float
    repose: ReposeAngle

    def __post_init__(self):
        d = self.bulk_density_t_per_m3
        if not (isinstance(d, (int, float)) and math.isfinite(d) and d > 0):
            raise NonPositiveInput(f"bulk density must be > 0, got {d!r}")
        object.__setattr__(self, "bulk_density_t_per_m3", float(d))


@dataclass(frozen=True, eq=False)
class HeightField:
    """Reconstructed per-pixel pile heights in meters."""

    values: np.ndarray
    geometry: GridGeometry

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError("height field must be a non-empty 2D grid")
        if v.min() < 0:
            raise ValueError("heights cannot be negative")
        object.__setattr__(self, "values", _readonly(v))

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class VolumeEstimate:
    """Integrated volume of one pile plus footprint/height diagnostics."""

    pile_id: str
    volume_m3: float
    footprint_px: int
    footprint_m2: float
    max_height_m: float


def height_from_distance(distance_px: float, geometry: GridGeometry, angle: ReposeAngle) -> float:
    """Height in meters at a point `distance_px` pixels from the boundary."""
    if distance_px < 0:
        raise ValueError("distance must be >= 0")
    return distance_px * geometry.pixel_size_m * angle.tangent


def height_field(distances: DistanceField, geometry: GridGeometry, angle: ReposeAngle) -> HeightField:
    """Pointwise height_from_distance over a distance field."""
    scale = geometry.pixel_size_m * angle.tangent
    return HeightField(distances.values * scale, geometry)


def integrate_volume(heights: HeightField, pile_id: str = "") -> VolumeEstimate:
    """Sum per-pixel heights and convert to cubic meters via the pixel area."""
    v = heights.values
    px = heights.geometry.pixel_size_m
    nonzero = v[v > 0.0]
    total_h = math.fsum(nonzero.tolist())
    volume = total_h * px * px
    footprint_px = int(nonzero.size)
    return VolumeEstimate(
        pile_id=pile_id,
        volume_m3=volume,
        footprint_px=footprint_px,
        footprint_m2=footprint_px * px * px,
        max_height_m=float(v.max()) if v.size else 0.0,
    )


def _fitted_grid(contour: PileContour) -> tuple[PileContour, int, int]:
    """Translate the contour by whole pixels so a 1-px margin fits the grid."""
    xmin, ymin, xmax, ymax = contour.bbox
    dx = math.ceil(1.0 - xmin) if xmin < 1.0 else 0
    dy = math.ceil(1.0 - ymin) if ymin < 1.0 else 0
    if dx or dy:
        contour = contour.translated(dx, dy)
        xmin, ymin, xmax, ymax = contour.bbox
    width = int(math.ceil(xmax + 1.0))
    height = int(math.ceil(ymax + 1.0))
    return contour, width, height


def estimate_pile(
    contour: PileContour,
    geometry: GridGeometry,
    material: MaterialSpec,
    path: str = RASTER_PATH,
) -> VolumeEstimate:
    """Full contour -> distance -> height -> volume pipeline for one pile.

    path="raster" mirrors the per-pixel mask iteration (rasterize, then
    exact distance transform); path="exact" keeps sub-pixel boundary
    distances.  The grid is the contour bounding box plus a 1-pixel
    margin; integer translation onto that grid leaves both results
    unchanged.
    """
    try:
        mode = _PATH_ALIASES[path]
    except KeyError:
        raise ValueError(f"unknown path {path!r}; use 'raster' or 'exact'") from None
    fitted, width, height = _fitted_grid(contour)
    if mode == RASTER_PATH:
        distances = distance_transform(rasterize(fitted, width, height))
    else:
        distances = polygon_distance_field(fitted, width, height)
    heights = height_field(distances, geometry, material.repose)
    return integrate_volume(heights, contour.pile_id)


def estimate_mask(
    mask: RasterMask,
    geometry: GridGeometry,
    material: MaterialSpec,
    pile_id: str = "",
) -> VolumeEstimate:
    """Raster-path estimate when only a binary mask is available."""
    heights = height_field(distance_transform(mask), geometry, material.repose)
    return integrate_volume(heights, pile_id)


def estimate_weight(volume: VolumeEstimate, material: MaterialSpec) -> float:
    """Pile weight in kilotonnes: volume * bulk density / 1000."""
    return volume.volume_m3 * material.bulk_density_t_per_m3 / 1000.0


def total_weight(
    estimates: list[VolumeEstimate] | tuple[VolumeEstimate, ...],
    material: MaterialSpec,
    reference_kt: float | None = None,
) -> tuple[float, float | None]:
    """Summed weight in kilotonnes and percent error vs. a reference weight."""
    if not estimates:
        raise EmptyInput("no volume estimates to total")
    total = math.fsum(estimate_weight(e, material) for e in estimates)
    error_pct = None
    if reference_kt is not None:
        if reference_kt <= 0:
            raise NonPositiveInput("reference weight must be > 0")
        error_pct = 100.0 * (total - reference_kt) / reference_kt
    return total, error_pct
