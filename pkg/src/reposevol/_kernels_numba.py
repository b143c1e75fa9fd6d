"""Numba @njit grid kernels.

Same contracts as _kernels_numpy; per-element arithmetic is kept
identical so results match the numpy backend bit for bit.  The row pass
of the distance transform uses the linear-time lower-envelope method,
which is exact on integer squared distances and therefore agrees with
the numpy backend's direct minimum.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

BACKEND_NAME = "numba"


@njit(cache=True)
def _cover_mask_impl(vx, vy, nx, ny, ox, oy, step):
    inside = np.zeros((ny, nx), dtype=np.bool_)
    n = vx.shape[0]
    for j in range(ny):
        py = oy + step * j
        for i in range(nx):
            px = ox + step * i
            flag = False
            for k in range(n):
                x1 = vx[k]
                y1 = vy[k]
                k2 = k + 1
                if k2 == n:
                    k2 = 0
                x2 = vx[k2]
                y2 = vy[k2]
                if (y1 <= py) != (y2 <= py):
                    xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
                    if px < xint:
                        flag = not flag
            inside[j, i] = flag
    return inside


@njit(cache=True, parallel=True)
def _distance_grid_impl(vx, vy, nx, ny, ox, oy, step):
    out = np.zeros((ny, nx), dtype=np.float64)
    n = vx.shape[0]
    for j in prange(ny):
        py = oy + step * j
        for i in range(nx):
            px = ox + step * i
            flag = False
            best = np.inf
            for k in range(n):
                x1 = vx[k]
                y1 = vy[k]
                k2 = k + 1
                if k2 == n:
                    k2 = 0
                x2 = vx[k2]
                y2 = vy[k2]
                if (y1 <= py) != (y2 <= py):
                    xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
                    if px < xint:
                        flag = not flag
                dx = x2 - x1
                dy = y2 - y1
                L2 = dx * dx + dy * dy
                if L2 > 0.0:
                    t = ((px - x1) * dx + (py - y1) * dy) / L2
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                    qx = x1 + t * dx
                    qy = y1 + t * dy
                else:
                    qx = x1
                    qy = y1
                ddx = px - qx
                ddy = py - qy
                d2 = ddx * ddx + ddy * ddy
                if d2 < best:
                    best = d2
            if flag:
                out[j, i] = np.sqrt(best)
    return out


@njit(cache=True)
def _edt_sq_impl(occ):
    H, W = occ.shape
    inf = H + W
    g = np.empty((H, W), dtype=np.int64)
    for i in range(W):
        g[0, i] = 0 if occ[0, i] == 0 else inf
    for j in range(1, H):
        for i in range(W):
            if occ[j, i] == 0:
                g[j, i] = 0
            else:
                c = g[j - 1, i] + 1
                g[j, i] = c if c < inf else inf
    for j in range(H - 2, -1, -1):
        for i in range(W):
            c = g[j + 1, i] + 1
            if c < g[j, i]:
                g[j, i] = c

    out = np.empty((H, W), dtype=np.int64)
    v = np.empty(W, dtype=np.int64)
    z = np.empty(W + 1, dtype=np.float64)
    h = np.empty(W, dtype=np.int64)
    for j in range(H):
        for i in range(W):
            h[i] = g[j, i] * g[j, i]
        k = 0
        v[0] = 0
        z[0] = -np.inf
        z[1] = np.inf
        for q in range(1, W):
            while True:
                vk = v[k]
                s = (h[q] + q * q - h[vk] - vk * vk) / (2.0 * (q - vk))
                if s <= z[k]:
                    k -= 1
                else:
                    break
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = np.inf
        k = 0
        for i in range(W):
            while z[k + 1] < i:
                k += 1
            di = i - v[k]
            out[j, i] = di * di + h[v[k]]
    return out


def polygon_cover_mask(vx, vy, nx, ny, ox, oy, step):
    """Boolean (ny, nx) grid: True where the sample point is inside."""
    return _cover_mask_impl(
        np.ascontiguousarray(vx, dtype=np.float64),
        np.ascontiguousarray(vy, dtype=np.float64),
        nx, ny, float(ox), float(oy), float(step),
    )


def polygon_distance_grid(vx, vy, nx, ny, ox, oy, step):
    """Float64 (ny, nx) grid of boundary distances, 0 outside."""
    return _distance_grid_impl(
        np.ascontiguousarray(vx, dtype=np.float64),
        np.ascontiguousarray(vy, dtype=np.float64),
        nx, ny, float(ox), float(oy), float(step),
    )


def edt_sq(occupancy):
    """Exact int64 squared distance to the nearest zero cell."""
    return _edt_sq_impl(np.ascontiguousarray(occupancy, dtype=np.uint8))
