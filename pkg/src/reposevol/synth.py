"""Synthetic pile footprints with known analytic volumes.

Shapes: a conical pile (regular n-gon footprint), an elongated
single-ridge pile (stadium footprint: two semicircular caps joined by
straight sides), and "reclaimed" variants where a vertical circular cut
from the base boundary inward removes material.  The reclaimed surface
is assumed to re-slump to the repose angle, matching the estimator's own
assumption, so reclaimed volumes come from numerical quadrature rather
than a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidSpec
from .maskio import GridGeometry, PileContour, shoelace_area
from .volume import ReposeAngle, _fitted_grid

KINDS = ("cone", "elongated", "reclaimed-cone", "reclaimed-elongated")
_MARGIN = 2.0  # clearance between footprint and coordinate origin


@dataclass(frozen=True)
class PileSpec:
    """Parameters of one synthetic pile footprint."""

    kind: str
    radius_px: float
    ridge_len_px: float = 0.0
    bite_radius_px: float = 0.0
    bite_center: tuple[float, float] | None = None
    n_vertices: int = 256

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown pile kind {self.kind!r}")
        if not (self.radius_px > 0 and math.isfinite(self.radius_px)):
            raise InvalidSpec("radius_px must be > 0")
        if self.ridge_len_px < 0:
            raise InvalidSpec("ridge_len_px must be >= 0")
        if self.base_kind == "cone" and self.ridge_len_px != 0.0:
            raise InvalidSpec("ridge_len_px only applies to elongated kinds")
        if self.n_vertices < 16:
            raise InvalidSpec("n_vertices must be >= 16")
        if self.is_reclaimed:
            if not (self.bite_radius_px > 0 and math.isfinite(self.bite_radius_px)):
                raise InvalidSpec("reclaimed kinds need bite_radius_px > 0")
            if self.bite_center is None:
                raise InvalidSpec("reclaimed kinds need a bite_center")

    @property
    def is_reclaimed(self) -> bool:
        return self.kind.startswith("reclaimed-")

    @property
    def base_kind(self) -> str:
        return self.kind.removeprefix("reclaimed-")

    def base_spec(self) -> "PileSpec":
        """The unreclaimed counterpart of this spec."""
        return PileSpec(self.base_kind, self.radius_px, self.ridge_len_px,
                        n_vertices=self.n_vertices)


def _cone_points(r: float, n: int) -> np.ndarray:
    c = r + _MARGIN
    ang = 2.0 * math.pi * np.arange(n) / n
    return np.column_stack([c + r * np.cos(ang), c + r * np.sin(ang)])


def _stadium_points(r: float, ridge: float, n: int) -> np.ndarray:
    cy = r + _MARGIN
    cx_left = r + _MARGIN
    cx_right = cx_left + ridge
    half = n // 2
    a_right = np.linspace(-math.pi / 2, math.pi / 2, half + 1)
    a_left = np.linspace(math.pi / 2, 3 * math.pi / 2, half + 1)
    pts = np.vstack(
        [
            np.column_stack([cx_right + r * np.cos(a_right), cy + r * np.sin(a_right)]),
            np.column_stack([cx_left + r * np.cos(a_left), cy + r * np.sin(a_left)]),
        ]
    )
    return pts


def _base_points(spec: PileSpec) -> np.ndarray:
    if spec.base_kind == "cone":
        return _cone_points(spec.radius_px, spec.n_vertices)
    return _stadium_points(spec.radius_px, spec.ridge_len_px, spec.n_vertices)


def _point_in_loop(px: float, py: float, pts: np.ndarray) -> bool:
    flag = False
    n = len(pts)
    for k in range(n):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % n]
        if (y1 <= py) != (y2 <= py):
            if px < x1 + (py - y1) * (x2 - x1) / (y2 - y1):
                flag = not flag
    return flag


def _bite_loop(pts: np.ndarray, center: tuple[float, float], R: float, n_arc_base: int) -> np.ndarray:
    """Vertex loop of polygon-minus-circle for a bite crossing the boundary.

    Edge/circle crossings are found analytically; the chain of base
    vertices inside the bite is replaced by the circle arc lying inside
    the base polygon (arc tessellation and stitching, no general clipper).
    """
    cx, cy = center
    crossings: list[tuple[int, float, float, float]] = []
    n = len(pts)
    for k in range(n):
        ax, ay = pts[k]
        bx, by = pts[(k + 1) % n]
        dx, dy = bx - ax, by - ay
        fx, fy = ax - cx, ay - cy
        A = dx * dx + dy * dy
        B = 2.0 * (fx * dx + fy * dy)
        C = fx * fx + fy * fy - R * R
        disc = B * B - 4.0 * A * C
        if A == 0.0 or disc <= 0.0:
            continue
        sq = math.sqrt(disc)
        for t in ((-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)):
            if 0.0 <= t < 1.0:
                crossings.append((k, t, ax + t * dx, ay + t * dy))
    if len(crossings) == 0:
        raise InvalidSpec("bite does not touch the base boundary")
    if len(crossings) != 2:
        raise InvalidSpec(
            f"bite must cross the base boundary exactly twice, got {len(crossings)}"
        )
    crossings.sort(key=lambda c: (c[0], c[1]))
    (e0, _, x0, y0), (e1, _, x1, y1) = crossings

    # chain F: base vertices strictly between crossing 0 and crossing 1
    chain_f = [i % n for i in range(e0 + 1, e1 + 1)]
    chain_g = [i % n for i in range(e1 + 1, e0 + 1 + n)]

    def frac_inside(idx: list[int]) -> float:
        if not idx:
            return 1.0
        d = np.hypot(pts[idx, 0] - cx, pts[idx, 1] - cy)
        return float(np.mean(d < R))

    fin, gin = frac_inside(chain_f), frac_inside(chain_g)
    if not ((fin == 1.0 and gin == 0.0) or (fin == 0.0 and gin == 1.0) and chain_f and chain_g):
        if fin in (0.0, 1.0) and gin in (0.0, 1.0) and fin != gin:
            pass
        else:
            raise InvalidSpec("bite geometry too complex (mixed chain)")
    if fin == 1.0 and gin == 0.0:
        kept = chain_g
        arc_from, arc_to = (x0, y0), (x1, y1)  # arc replaces chain F
        head, tail = (x1, y1), (x0, y0)
    else:
        kept = chain_f
        arc_from, arc_to = (x1, y1), (x0, y0)
        head, tail = (x0, y0), (x1, y1)

    a0 = math.atan2(arc_from[1] - cy, arc_from[0] - cx)
    a1 = math.atan2(arc_to[1] - cy, arc_to[0] - cx)
    delta = (a1 - a0) % (2.0 * math.pi)
    mid = a0 + delta / 2.0
    mx, my = cx + R * math.cos(mid), cy + R * math.sin(mid)
    if not _point_in_loop(mx, my, pts):
        delta -= 2.0 * math.pi  # take the other arc
    m = max(8, int(round(n_arc_base * abs(delta) / (2.0 * math.pi))))
    arc_angles = a0 + delta * np.arange(1, m) / m
    arc = np.column_stack([cx + R * np.cos(arc_angles), cy + R * np.sin(arc_angles)])

    loop = [head] + [tuple(pts[i]) for i in kept] + [tail] + [tuple(p) for p in arc]
    return np.array(loop, dtype=np.float64)


def make_contour(spec: PileSpec, pile_id: str | None = None) -> PileContour:
    """Tessellated footprint contour for a synthetic pile spec."""
    pid = pile_id if pile_id is not None else spec.kind
    base = _base_points(spec)
    if not spec.is_reclaimed:
        return PileContour(pid, base)
    loop = _bite_loop(base, spec.bite_center, spec.bite_radius_px, spec.n_vertices)
    try:
        contour = PileContour(pid, loop)
    except Exception as exc:
        raise InvalidSpec(f"bite produced an invalid footprint: {exc}") from exc
    if contour.area >= shoelace_area(base):
        raise InvalidSpec("bite removed no footprint area")
    return contour


def boundary_point_at(contour: PileContour, angle_deg: float) -> tuple[float, float]:
    """Outline point hit by a ray from the centroid at the given angle."""
    cx, cy = contour.centroid
    dx, dy = math.cos(math.radians(angle_deg)), math.sin(math.radians(angle_deg))
    v = contour.vertices
    best = math.inf
    n = len(v)
    for k in range(n):
        ax, ay = v[k]
        bx, by = v[(k + 1) % n]
        ex, ey = bx - ax, by - ay
        den = dx * ey - dy * ex
        if den == 0.0:
            continue
        t = ((ax - cx) * ey - (ay - cy) * ex) / den
        u = ((ax - cx) * dy - (ay - cy) * dx) / -den
        if t > 0.0 and 0.0 <= u <= 1.0 and t < best:
            best = t
    if not math.isfinite(best):
        raise InvalidSpec("centroid ray does not hit the outline")
    return cx + best * dx, cy + best * dy


def analytic_volume(spec: PileSpec, geometry: GridGeometry, angle: ReposeAngle) -> float | None:
    """Closed-form volume for cone/elongated specs; None for reclaimed kinds.

    cone: (pi/3) r^3 tan(theta); elongated adds a prism-roof ridge term
    ridge * r^2 * tan(theta).  Lengths in meters.
    """
    if spec.is_reclaimed:
        return None
    r = spec.radius_px * geometry.pixel_size_m
    t = angle.tangent
    v = (math.pi / 3.0) * r**3 * t
    if spec.base_kind == "elongated":
        ridge = spec.ridge_len_px * geometry.pixel_size_m
        v += ridge * r**2 * t
    return v


def brute_force_volume(
    spec: PileSpec,
    geometry: GridGeometry,
    angle: ReposeAngle,
    oversample: int = 8,
) -> float:
    """Direct quadrature of tan(theta) * boundary distance over a fine grid.

    Samples the exact point-to-contour distance on a grid refined
    `oversample` times per axis; independent of the estimator pipeline
    and valid for concave (reclaimed) footprints.
    """
    if not isinstance(oversample, int) or oversample < 1:
        raise InvalidSpec("oversample must be a positive integer")
    contour = make_contour(spec)
    fitted, width, height = _fitted_grid(contour)
    o = oversample
    step = 1.0 / o
    d = kernels.polygon_distance_grid(
        fitted.vertices[:, 0], fitted.vertices[:, 1],
        width * o, height * o, step / 2.0, step / 2.0, step,
    )
    total = math.fsum(d[d > 0.0].tolist())
    px = geometry.pixel_size_m
    return total * angle.tangent * px**3 / (o * o)
