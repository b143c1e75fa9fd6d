"""Pure-numpy grid kernels.

Reference implementations of the hot loops.  The numba twins in
_kernels_numba.py use the same per-element arithmetic so both backends
produce bit-identical arrays.

Conventions shared by every kernel:
  * sample point (i, j) sits at (ox + i*step, oy + j*step), x right, y down;
  * inside/outside uses the even-odd crossing rule: an edge is crossed when
    (y1 <= py) != (y2 <= py) and px < x-intersection, so points exactly on
    an edge fall on a deterministic half-open side;
  * squared distances between grid cells are exact int64 values.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

# rows processed per block in the exact-EDT row pass (memory/speed tradeoff)
_EDT_BLOCK_CELLS = 4_000_000


def polygon_cover_mask(vx, vy, nx, ny, ox, oy, step):
    """Boolean (ny, nx) grid: True where the sample point is inside."""
    px = ox + step * np.arange(nx, dtype=np.float64)
    py = oy + step * np.arange(ny, dtype=np.float64)
    inside = np.zeros((ny, nx), dtype=bool)
    n = len(vx)
    for k in range(n):
        x1, y1 = vx[k], vy[k]
        x2, y2 = vx[(k + 1) % n], vy[(k + 1) % n]
        if y1 == y2:
            continue
        cross = (y1 <= py) != (y2 <= py)
        if not cross.any():
            continue
        xint = x1 + (py[cross] - y1) * (x2 - x1) / (y2 - y1)
        inside[cross] ^= px[None, :] < xint[:, None]
    return inside


def polygon_distance_grid(vx, vy, nx, ny, ox, oy, step):
    """Float64 (ny, nx) grid of distances to the polygon boundary.

    Interior sample points get the exact minimum distance to any boundary
    segment; exterior (and on-boundary) points get 0.
    """
    inside = polygon_cover_mask(vx, vy, nx, ny, ox, oy, step)
    px = ox + step * np.arange(nx, dtype=np.float64)
    py = oy + step * np.arange(ny, dtype=np.float64)
    PX = np.broadcast_to(px[None, :], (ny, nx))
    PY = np.broadcast_to(py[:, None], (ny, nx))
    best = np.full((ny, nx), np.inf, dtype=np.float64)
    n = len(vx)
    for k in range(n):
        x1, y1 = vx[k], vy[k]
        x2, y2 = vx[(k + 1) % n], vy[(k + 1) % n]
        dx = x2 - x1
        dy = y2 - y1
        L2 = dx * dx + dy * dy
        if L2 > 0.0:
            t = ((PX - x1) * dx + (PY - y1) * dy) / L2
            np.clip(t, 0.0, 1.0, out=t)
            qx = x1 + t * dx
            qy = y1 + t * dy
        else:
            qx, qy = x1, y1
        ddx = PX - qx
        ddy = PY - qy
        np.minimum(best, ddx * ddx + ddy * ddy, out=best)
    out = np.sqrt(best)
    out[~inside] = 0.0
    return out


def edt_sq(occupancy):
    """Exact squared Euclidean distance transform on a 2D cell grid.

    For every cell, the int64 squared distance (in cell units) to the
    nearest zero cell of `occupancy`; zero cells map to 0.  At least one
    zero cell must exist.  Column pass: two linear sweeps.  Row pass:
    exact minimum over (i - k)^2 + g(k)^2 evaluated in integer arithmetic.
    """
    occ = np.asarray(occupancy)
    H, W = occ.shape
    inf = H + W
    g = np.where(occ == 0, 0, inf).astype(np.int64)
    for j in range(1, H):
        np.minimum(g[j], g[j - 1] + 1, out=g[j])
    for j in range(H - 2, -1, -1):
        np.minimum(g[j], g[j + 1] + 1, out=g[j])
    h = g * g
    idx = np.arange(W, dtype=np.int64)
    D = (idx[:, None] - idx[None, :]) ** 2
    out = np.empty((H, W), dtype=np.int64)
    block = max(1, _EDT_BLOCK_CELLS // max(1, W * W))
    for j0 in range(0, H, block):
        rows = h[j0 : j0 + block]
        out[j0 : j0 + block] = (D[None, :, :] + rows[:, None, :]).min(axis=2)
    return out
