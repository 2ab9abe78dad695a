"""Kernel backend selection.

Hot loops are written twice: once as numba ``@njit`` kernels and once as plain
numpy.  ``GEOSKETCH_BACKEND=numpy`` forces the numpy path; the default uses
numba when it imports.
"""

from __future__ import annotations

import os

_requested = os.environ.get("GEOSKETCH_BACKEND", "numba").strip().lower()

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _requested != "numpy"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise."""
    if HAVE_NUMBA:
        from numba import njit as _njit

        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def pick(nb_impl, np_impl):
    return nb_impl if USE_NUMBA else np_impl
