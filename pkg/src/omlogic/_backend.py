"""Selects the numba or pure-numpy implementation of the hot kernels.

Set ``OMLOGIC_NUMBA=0`` in the environment before import to force the
numpy path.  The choice is made once, at import time.
"""

import os

_FLAG = os.environ.get("OMLOGIC_NUMBA", "1").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("0", "false", "no", "off")


def njit(fn):
    """Compile ``fn`` with numba when available, otherwise return ``None``.

    Callers keep a numpy twin of every kernel and dispatch on ``USE_NUMBA``.
    """
    if numba is None:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
