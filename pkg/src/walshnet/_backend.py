"""Kernel backend selection.

The compiled Cython module is used when importable; otherwise the NumPy
fallback.  ``WALSHNET_BACKEND=python`` forces the fallback.  Both backends
produce bit-identical output, so the choice never changes results.
"""
import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on build
    _compiled = None

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

if os.environ.get("WALSHNET_BACKEND") == "python" or _compiled is None:
    kernels = _kernels_py
    name = "python"
else:
    kernels = _compiled
    name = "compiled"


def available():
    return sorted(_BACKENDS)


def set_backend(which):
    """Switch the active kernel module; returns the previous backend name."""
    global kernels, name
    if which not in _BACKENDS:
        raise ValueError(f"backend {which!r} not available (have {available()})")
    prev = name
    kernels = _BACKENDS[which]
    name = which
    return prev
