"""Optional numba acceleration.

Set ``DEPKIT_DISABLE_NUMBA=1`` to force the pure-numpy kernels; they are
also used automatically when numba is not installed.
"""
import os

DISABLE_ENV = "DEPKIT_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(DISABLE_ENV, "").lower() not in ("1", "true", "yes", "on")


def njit(fn):
    """``numba.njit(cache=True)`` when numba is present, else the function unchanged."""
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
