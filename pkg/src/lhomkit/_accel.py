"""Switch between numba-compiled kernels and the pure numpy fallback.

Set ``LHOMKIT_DISABLE_NUMBA=1`` before import to force the numpy path.
"""

import os

DISABLE_ENV = "LHOMKIT_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get(DISABLE_ENV, "").lower() not in ("1", "true", "yes")


def njit(func):
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
