"""Kernel dispatch: compiled extension when available, Python otherwise.

Set ``CANTOR_DIOPH_PURE=1`` in the environment to force the Python path
(useful for benchmarking and for cross-checking the two backends).
"""
import os

from . import _pykernels

_LIMIT = 1 << 62

try:
    if os.environ.get("CANTOR_DIOPH_PURE", "") not in ("", "0"):
        raise ImportError("pure backend requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def _mask_bytes(b, W):
    m = bytearray(b)
    for w in W:
        m[w] = 1
    return bytes(m)


def _fits(b, q):
    return _ckernels is not None and b * (q + 1) < _LIMIT


def member_mask(b, W, q):
    """bytearray m with m[r] = 1 iff r/q in C_{b,W}, for r = 0..q."""
    wm = _mask_bytes(b, W)
    if _fits(b, q):
        return _ckernels.member_mask(b, wm, q)
    return _pykernels.member_mask(b, wm, q)


def first_bad_digits(b, W, q):
    """List of canonical first-bad-digit indices of r/q, r = 0..q-1 (-1: none)."""
    wm = _mask_bytes(b, W)
    if _fits(b, q):
        return _ckernels.first_bad_digits(b, wm, q)
    return _pykernels.first_bad_digits(b, wm, q)
