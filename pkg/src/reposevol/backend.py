"""Kernel backend selection.

Hot grid kernels exist twice: a numba @njit build and a pure-numpy build
producing bit-identical results.  The active backend is chosen once at
import time from the REPOSEVOL_BACKEND environment variable:

    REPOSEVOL_BACKEND=numba   force numba (raises if numba is unusable)
    REPOSEVOL_BACKEND=numpy   force the pure-numpy fallback
    unset / "auto"            numba when importable, numpy otherwise
"""

from __future__ import annotations

import logging
import os

_ENV_VAR = "REPOSEVOL_BACKEND"
_log = logging.getLogger(__name__)


def _numba_usable() -> bool:
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


def resolve_backend() -> str:
    """Return "numba" or "numpy" per the environment request."""
    requested = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
    if requested == "numpy":
        return "numpy"
    if requested == "numba":
        if not _numba_usable():
            raise RuntimeError(
                f"{_ENV_VAR}=numba requested but numba cannot be imported"
            )
        return "numba"
    if requested != "auto":
        raise ValueError(f"unknown {_ENV_VAR} value: {requested!r}")
    if _numba_usable():
        return "numba"
    _log.warning("numba unavailable, falling back to pure-numpy kernels")
    return "numpy"
