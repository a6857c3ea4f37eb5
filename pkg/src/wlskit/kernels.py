"""Backend selection for the integer reduction kernels.

The compiled extension is used when it imports cleanly and
``WLSKIT_PURE_PYTHON`` is unset.  The compiled kernels work in int64 and
raise ``OverflowError`` on any intermediate overflow; those calls are
rerun on the pure-Python kernels, which use unbounded integers.
"""

from __future__ import annotations

import os

from . import _kernels_py

_fast = None
if not os.environ.get("WLSKIT_PURE_PYTHON"):
    try:
        from . import _kernels as _fast  # type: ignore[no-redef]
    except ImportError:
        _fast = None

BACKEND = _fast.BACKEND if _fast is not None else _kernels_py.BACKEND


def smith(rows, nrows: int, ncols: int):
    """Return ``(U, D, V)`` with ``U * M * V == D`` for the matrix given by ``rows``."""
    if _fast is not None:
        try:
            return _fast.smith(rows, nrows, ncols)
        except OverflowError:
            pass
    return _kernels_py.smith(rows, nrows, ncols)


def echelon(rows, ncols: int, transform: bool = False):
    """Return ``(H, T)``: row HNF of ``rows`` and optionally the unimodular transform."""
    if _fast is not None:
        try:
            return _fast.echelon(rows, ncols, transform)
        except OverflowError:
            pass
    return _kernels_py.echelon(rows, ncols, transform)
