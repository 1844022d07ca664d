"""Hot kernels, compiled when available.

Set ``DTCODE_PURE=1`` to force the pure-Python implementation.
"""
import os

from . import _fallback

fallback = _fallback

if os.environ.get("DTCODE_PURE", "") not in ("", "0"):
    _impl = _fallback
    BACKEND = "python"
    compiled = None
else:
    try:
        from . import _core as _impl
        BACKEND = "cython"
        compiled = _impl
    except ImportError:
        _impl = _fallback
        BACKEND = "python"
        compiled = None

min_gap_matrix = _impl.min_gap_matrix
max_gap_pair = _impl.max_gap_pair
max_min_codebook = _impl.max_min_codebook

__all__ = ["BACKEND", "compiled", "fallback", "min_gap_matrix", "max_gap_pair",
           "max_min_codebook"]
