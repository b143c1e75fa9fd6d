"""Pile footprint I/O: annotation JSON, polygon rasterization, mask files.

Coordinate conventions: pixel coordinates with origin at the top-left
corner, x rightward, y downward.  The pixel with index (i, j) covers the
unit square [i, i+1) x [j, j+1) and its center sits at (i+0.5, j+0.5).

Annotation JSON schema::

    {"source": "<free text>",
     "piles": [{"id": "<unique label>", "polygon": [[x, y], ...]}, ...]}

Raster masks are portable graymaps (P2/P5) or portable bitmaps (P1/P4);
any nonzero sample (for bitmaps: an ink bit, value 1) means "inside a
pile".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    DegeneratePolygon,
    MalformedJson,
    NonPositiveInput,
    OutOfBounds,
    SchemaViolation,
    SelfIntersecting,
    UnsupportedFormat,
)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def shoelace_area(vertices: np.ndarray) -> float:
    """Unsigned polygon area (shoelace formula)."""
    x = vertices[:, 0]
    y = vertices[:, 1]
    return abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))) / 2.0


def _polygon_centroid(vertices: np.ndarray) -> tuple[float, float]:
    x = vertices[:, 0]
    y = vertices[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    w = x * yn - xn * y
    a2 = float(w.sum())
    if a2 == 0.0:
        return float(x.mean()), float(y.mean())
    cx = float(((x + xn) * w).sum()) / (3.0 * a2)
    cy = float(((y + yn) * w).sum()) / (3.0 * a2)
    return cx, cy


def _check_simple(P: np.ndarray) -> bool:
    """True when no two non-adjacent edges intersect or touch.

    All-pairs orientation test, vectorized over the (n, n) pair matrix.
    Adjacent edges may only meet at their shared vertex; a doubling-back
    (spike) along the same line counts as self-intersection.
    """
    n = len(P)
    A = P
    B = np.roll(P, -1, axis=0)

    def orient(ax, ay, bx, by, px, py):
        return (bx - ax) * (py - ay) - (by - ay) * (px - ax)

    ax, ay = A[:, 0][:, None], A[:, 1][:, None]
    bx, by = B[:, 0][:, None], B[:, 1][:, None]
    cx, cy = A[:, 0][None, :], A[:, 1][None, :]
    dx, dy = B[:, 0][None, :], B[:, 1][None, :]

    d1 = orient(ax, ay, bx, by, cx, cy)
    d2 = orient(ax, ay, bx, by, dx, dy)
    d3 = orient(cx, cy, dx, dy, ax, ay)
    d4 = orient(cx, cy, dx, dy, bx, by)

    proper = ((d1 > 0) != (d2 > 0)) & ((d1 != 0) & (d2 != 0))
    proper &= ((d3 > 0) != (d4 > 0)) & ((d3 != 0) & (d4 != 0))

    def on_seg(sx1, sy1, sx2, sy2, px, py):
        return (
            (np.minimum(sx1, sx2) <= px)
            & (px <= np.maximum(sx1, sx2))
            & (np.minimum(sy1, sy2) <= py)
            & (py <= np.maximum(sy1, sy2))
        )

    touch = (
        ((d1 == 0) & on_seg(ax, ay, bx, by, cx, cy))
        | ((d2 == 0) & on_seg(ax, ay, bx, by, dx, dy))
        | ((d3 == 0) & on_seg(cx, cy, dx, dy, ax, ay))
        | ((d4 == 0) & on_seg(cx, cy, dx, dy, bx, by))
    )

    idx = np.arange(n)
    di = (idx[None, :] - idx[:, None]) % n
    nonadjacent = (di >= 2) & (di <= n - 2)
    if np.any(nonadjacent & (proper | touch)):
        return False

    # adjacent pairs: reject collinear doubling-back through the shared vertex
    nxt = np.roll(np.arange(n), -1)
    turn = orient(A[:, 0], A[:, 1], B[:, 0], B[:, 1], B[nxt, 0], B[nxt, 1])
    back = np.einsum("ij,ij->i", B - A, P[(np.arange(n) + 2) % n] - B)
    if np.any((turn == 0) & (back < 0)):
        return False
    return True


@dataclass(frozen=True, eq=False)
class PileContour:
    """Closed simple polygon delimiting one pile footprint."""

    pile_id: str
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise SchemaViolation(f"{self.pile_id}: polygon must be an (N, 2) point list")
        if not np.all(np.isfinite(v)):
            raise DegeneratePolygon(f"{self.pile_id}: non-finite vertex coordinates")
        # drop consecutive duplicates (incl. an explicit closing vertex)
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = np.any(v[1:] != v[:-1], axis=1)
        v = v[keep]
        if len(v) > 1 and np.all(v[0] == v[-1]):
            v = v[:-1]
        if len(v) < 3:
            raise DegeneratePolygon(f"{self.pile_id}: fewer than 3 distinct vertices")
        if shoelace_area(v) <= 0.0:
            raise DegeneratePolygon(f"{self.pile_id}: polygon encloses zero area")
        if not _check_simple(v):
            raise SelfIntersecting(f"{self.pile_id}: polygon edges self-intersect")
        object.__setattr__(self, "vertices", _readonly(v))

    @property
    def area(self) -> float:
        return shoelace_area(self.vertices)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax)"""
        mn = self.vertices.min(axis=0)
        mx = self.vertices.max(axis=0)
        return float(mn[0]), float(mn[1]), float(mx[0]), float(mx[1])

    @property
    def centroid(self) -> tuple[float, float]:
        return _polygon_centroid(self.vertices)

    def translated(self, dx: float, dy: float) -> "PileContour":
        return PileContour(self.pile_id, self.vertices + np.array([dx, dy]))

    def scaled_about_centroid(self, s: float) -> "PileContour":
        cx, cy = self.centroid
        c = np.array([cx, cy])
        return PileContour(self.pile_id, c + (self.vertices - c) * s)


@dataclass(frozen=True, eq=False)
class RasterMask:
    """Binary occupancy grid, row-major, True = inside a pile."""

    cells: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.cells)
        if c.ndim != 2 or c.size == 0:
            raise ValueError("mask must be a non-empty 2D grid")
        object.__setattr__(self, "cells", _readonly(c.astype(bool)))

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def count(self) -> int:
        return int(self.cells.sum())


@dataclass(frozen=True)
class GridGeometry:
    """Pixel-to-meter calibration; square pixels only."""

    pixel_size_m: float

    def __post_init__(self):
        p = self.pixel_size_m
        if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 0):
            raise NonPositiveInput(f"pixel_size_m must be finite and > 0, got {p!r}")
        object.__setattr__(self, "pixel_size_m", float(p))


@dataclass(frozen=True)
class AnnotationSet:
    """A batch of pile contours plus free-text provenance."""

    contours: tuple[PileContour, ...]
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "contours", tuple(self.contours))
        ids = [c.pile_id for c in self.contours]
        if len(set(ids)) != len(ids):
            raise SchemaViolation("duplicate pile ids in annotation set")


def parse_annotations(json_text: str) -> AnnotationSet:
    """Parse the documented annotation JSON into an AnnotationSet."""
    try:
        doc = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaViolation("top-level value must be an object")
    piles = doc.get("piles")
    if not isinstance(piles, list):
        raise SchemaViolation('missing or non-list "piles" field')
    source = doc.get("source", "")
    if not isinstance(source, str):
        raise SchemaViolation('"source" must be a string')
    contours = []
    for k, entry in enumerate(piles):
        if not isinstance(entry, dict):
            raise SchemaViolation(f"piles[{k}] must be an object")
        pid = entry.get("id")
        poly = entry.get("polygon")
        if not isinstance(pid, str) or not pid:
            raise SchemaViolation(f"piles[{k}]: missing string id")
        if not isinstance(poly, list):
            raise SchemaViolation(f"piles[{k}]: missing polygon list")
        for pt in poly:
            if (
                not isinstance(pt, (list, tuple))
                or len(pt) != 2
                or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pt)
            ):
                raise SchemaViolation(f"piles[{k}]: polygon points must be [x, y] numbers")
        contours.append(PileContour(pid, np.array(poly, dtype=np.float64)))
    return AnnotationSet(tuple(contours), source)


def serialize_annotations(annotations: AnnotationSet) -> str:
    """Inverse of parse_annotations; coordinates survive a round trip bit-exactly."""
    doc = {
        "source": annotations.source,
        "piles": [
            {"id": c.pile_id, "polygon": [[float(x), float(y)] for x, y in c.vertices]}
            for c in annotations.contours
        ],
    }
    return json.dumps(doc, indent=2)


def load_annotations(path: str | Path) -> AnnotationSet:
    return parse_annotations(Path(path).read_text(encoding="utf-8"))


def save_annotations(path: str | Path, annotations: AnnotationSet) -> None:
    Path(path).write_text(serialize_annotations(annotations), encoding="utf-8")


def rasterize(contour: PileContour, width: int, height: int) -> RasterMask:
    """Set every pixel whose center lies inside the polygon (even-odd rule).

    Pixel centers exactly on an edge fall on the deterministic half-open
    side of the crossing test, so shared edges never double-count.
    """
    if width <= 0 or height <= 0:
        raise ValueError("grid dimensions must be positive")
    xmin, ymin, xmax, ymax = contour.bbox
    if xmin < 0 or ymin < 0 or xmax > width or ymax > height:
        raise OutOfBounds(
            f"{contour.pile_id}: bbox ({xmin:.3f},{ymin:.3f})-({xmax:.3f},{ymax:.3f}) "
            f"exceeds {width}x{height} grid"
        )
    cover = kernels.polygon_cover_mask(
        contour.vertices[:, 0], contour.vertices[:, 1], width, height, 0.5, 0.5, 1.0
    )
    return RasterMask(cover)


# ---------------------------------------------------------------------------
# portable anymap readers/writers
# ---------------------------------------------------------------------------


def _pnm_tokens(data: bytes, count: int, start: int) -> tuple[list[int], int]:
    """Read `count` ASCII integer tokens, skipping whitespace and # comments."""
    tokens: list[int] = []
    i = start
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i] != 0x0A:
                i += 1
            continue
        j = i
        while j < n and not data[j : j + 1].isspace():
            j += 1
        if j == i:
            raise UnsupportedFormat("truncated header")
        try:
            tokens.append(int(data[i:j]))
        except ValueError as exc:
            raise UnsupportedFormat(f"bad header token {data[i:j]!r}") from exc
        i = j
    return tokens, i


def load_raster_mask(path: str | Path) -> RasterMask:
    """Load a binary mask from a PGM (P2/P5) or PBM (P1/P4) file."""
    data = Path(path).read_bytes()
    if len(data) < 2:
        raise UnsupportedFormat(f"{path}: not a portable anymap")
    magic = data[:2].decode("ascii", errors="replace")
    if magic not in ("P1", "P2", "P4", "P5"):
        raise UnsupportedFormat(f"{path}: unsupported magic {magic!r}")
    try:
        if magic in ("P1", "P4"):
            (w, h), pos = _pnm_tokens(data, 2, 2)
            maxval = 1
        else:
            (w, h, maxval), pos = _pnm_tokens(data, 3, 2)
        if w <= 0 or h <= 0 or maxval <= 0:
            raise UnsupportedFormat(f"{path}: bad dimensions {w}x{h}")
        if magic == "P1":
            bits = [c - 0x30 for c in data[pos:] if c in (0x30, 0x31)]
            if len(bits) < w * h:
                raise UnsupportedFormat(f"{path}: truncated pixel data")
            grid = np.array(bits[: w * h], dtype=np.uint8).reshape(h, w)
        elif magic == "P2":
            vals, _ = _pnm_tokens(data, w * h, pos)
            grid = np.array(vals, dtype=np.int64).reshape(h, w)
        elif magic == "P4":
            rowbytes = (w + 7) // 8
            raw = data[pos + 1 : pos + 1 + rowbytes * h]
            if len(raw) < rowbytes * h:
                raise UnsupportedFormat(f"{path}: truncated pixel data")
            packed = np.frombuffer(raw, dtype=np.uint8).reshape(h, rowbytes)
            grid = np.unpackbits(packed, axis=1)[:, :w]
        else:  # P5
            itemsize = 1 if maxval < 256 else 2
            raw = data[pos + 1 : pos + 1 + w * h * itemsize]
            if len(raw) < w * h * itemsize:
                raise UnsupportedFormat(f"{path}: truncated pixel data")
            dt = np.uint8 if itemsize == 1 else np.dtype(">u2")
            grid = np.frombuffer(raw, dtype=dt).reshape(h, w)
    except UnsupportedFormat:
        raise
    except Exception as exc:
        raise UnsupportedFormat(f"{path}: {exc}") from exc
    return RasterMask(grid != 0)


def save_raster_mask(path: str | Path, mask: RasterMask, fmt: str | None = None) -> None:
    """Write a mask as PGM/PBM. Format from `fmt` or the file suffix."""
    path = Path(path)
    if fmt is None:
        fmt = {".pgm": "P5", ".pbm": "P4"}.get(path.suffix.lower())
        if fmt is None:
            raise UnsupportedFormat(f"cannot infer mask format from suffix {path.suffix!r}")
    fmt = fmt.upper()
    cells = mask.cells
    h, w = cells.shape
    if fmt == "P1":
        body = "\n".join(" ".join("1" if v else "0" for v in row) for row in cells)
        path.write_text(f"P1\n{w} {h}\n{body}\n", encoding="ascii")
    elif fmt == "P2":
        body = "\n".join(" ".join("255" if v else "0" for v in row) for row in cells)
        path.write_text(f"P2\n{w} {h}\n255\n{body}\n", encoding="ascii")
    elif fmt == "P4":
        packed = np.packbits(cells.astype(np.uint8), axis=1)
        path.write_bytes(f"P4\n{w} {h}\n".encode("ascii") + packed.tobytes())
    elif fmt == "P5":
        gray = np.where(cells, 255, 0).astype(np.uint8)
        path.write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + gray.tobytes())
    else:
        raise UnsupportedFormat(f"unsupported mask format {fmt!r}")


def pixel_scale_from_reference(reference_length_m: float, reference_length_px: float) -> GridGeometry:
    """Calibrate meters-per-pixel from a measured reference length."""
    for name, v in (("reference_length_m", reference_length_m),
                    ("reference_length_px", reference_length_px)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise NonPositiveInput(f"{name} must be finite and > 0, got {v!r}")
    return GridGeometry(reference_length_m / reference_length_px)
