"""Kernel backend selection.

The hot kernels (group-ring convolutions, Berkowitz determinants, row
echelon over F_q) exist twice: numba-compiled and pure numpy.  The active
backend is chosen once at import time from the environment variable
``DRINFELD_LVALUES_BACKEND`` (``numba`` or ``numpy``, default ``numba``
with a silent fallback when numba is unavailable)."""

import os
import types

from . import _kernels_numpy

_NAMES = ("gr_mul", "zpoly_mul", "zmat_mul", "zmat_vec", "berk_charpoly", "echelon")


def _load(name: str) -> types.SimpleNamespace:
    if name == "numpy":
        mod = _kernels_numpy
    elif name == "numba":
        from . import _kernels_numba as mod
    else:
        raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")
    return types.SimpleNamespace(name=name, **{f: getattr(mod, f) for f in _NAMES})


def get_backend(name: str) -> types.SimpleNamespace:
    """Return a namespace with the kernel functions of the named backend."""
    return _load(name)


_requested = os.environ.get("DRINFELD_LVALUES_BACKEND", "numba").lower()
if _requested == "numba":
    try:
        ACTIVE = _load("numba")
    except ImportError:  # pragma: no cover - exercised only without numba
        ACTIVE = _load("numpy")
else:
    ACTIVE = _load(_requested)

gr_mul = ACTIVE.gr_mul
zpoly_mul = ACTIVE.zpoly_mul
zmat_mul = ACTIVE.zmat_mul
zmat_vec = ACTIVE.zmat_vec
berk_charpoly = ACTIVE.berk_charpoly
echelon = ACTIVE.echelon
