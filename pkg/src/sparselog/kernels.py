"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
implementations run. Setting ``SPARSELOG_PURE_PYTHON=1`` forces the
fallback, which is handy for benchmarking and debugging.
"""
import os

from sparselog import _pykernels
from sparselog._pykernels import ConvergenceError

__all__ = ["BACKEND", "ConvergenceError", "hessenberg_qr", "apply_pair_rotations", "backends"]

_compiled = None
if not os.environ.get("SPARSELOG_PURE_PYTHON"):
    try:
        from sparselog import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

if _compiled is not None:
    BACKEND = "cython"
    hessenberg_qr = _compiled.hessenberg_qr
    apply_pair_rotations = _compiled.apply_pair_rotations
else:
    BACKEND = "python"
    hessenberg_qr = _pykernels.hessenberg_qr
    apply_pair_rotations = _pykernels.apply_pair_rotations


def backends():
    """Map of every importable backend name to its kernel module."""
    found = {"python": _pykernels}
    if _compiled is not None:
        found["cython"] = _compiled
    return found
