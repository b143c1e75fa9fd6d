"""Active kernel backend, resolved once at import time.

See backend.resolve_backend for the REPOSEVOL_BACKEND selection rules.
"""

from __future__ import annotations

from . import backend

ACTIVE_BACKEND = backend.resolve_backend()

if ACTIVE_BACKEND == "numba":
    from ._kernels_numba import edt_sq, polygon_cover_mask, polygon_distance_grid
else:
    from ._kernels_numpy import edt_sq, polygon_cover_mask, polygon_distance_grid

__all__ = [
    "ACTIVE_BACKEND",
    "edt_sq",
    "polygon_cover_mask",
    "polygon_distance_grid",
]
