"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback
is used. ``MAXHUNT_BACKEND`` (``compiled`` or ``python``) overrides the
automatic choice at import time, and :func:`use_backend` switches it at run
time (tests and the benchmark use this).
"""
import contextlib
import os
import warnings

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

COMPILED_AVAILABLE = _kernels_c is not None

_BACKENDS = {"python": _kernels_py}
if COMPILED_AVAILABLE:
    _BACKENDS["compiled"] = _kernels_c


def _initial_backend():
    requested = os.environ.get("MAXHUNT_BACKEND", "").strip().lower()
    if requested == "python":
        return "python"
    if requested == "compiled" and not COMPILED_AVAILABLE:
        warnings.warn("MAXHUNT_BACKEND=compiled but the extension is not built; "
                      "falling back to the numpy kernels")
    return "compiled" if COMPILED_AVAILABLE else "python"


_active = _initial_backend()


def available_backends():
    return sorted(_BACKENDS)


def active_backend():
    """Name of the backend currently serving kernel calls."""
    return _active


def set_backend(name):
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; "
                         f"available: {available_backends()}")
    _active = name


@contextlib.contextmanager
def use_backend(name):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def kernels(name=None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    return _BACKENDS[name or _active]


def as_matrix(x):
    """C-contiguous float64 2-D view of ``x``; 1-D input becomes one column."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return np.ascontiguousarray(arr)


def as_labels(y):
    return np.ascontiguousarray(np.asarray(y), dtype=np.int8)
