"""Kernel backend selection: numba-jitted loops or the pure-numpy fallback.

The active backend is chosen once at import from the SKETCHLAB_BACKEND
environment variable ("numba", "numpy", or unset for auto) and can be switched
at runtime with set_backend(), which the bench harness uses to compare both.
numba itself is imported lazily, so numpy-backend runs (and CLI spawns) never
pay its import cost.
"""

import importlib.util
import os

from .errors import InputError

HAVE_NUMBA = importlib.util.find_spec("numba") is not None

_env = os.environ.get("SKETCHLAB_BACKEND", "auto").lower()
if _env not in ("auto", "numba", "numpy"):
    raise InputError(f"SKETCHLAB_BACKEND must be 'numba' or 'numpy', got {_env!r}")
if _env == "numba" and not HAVE_NUMBA:
    raise InputError("SKETCHLAB_BACKEND=numba but numba is not importable")

_active = "numba" if (HAVE_NUMBA and _env != "numpy") else "numpy"
_numba = None


def _nb():
    global _numba
    if _numba is None:
        import numba

        _numba = numba
    return _numba


def active():
    """Name of the backend currently serving kernel calls."""
    return _active


def set_backend(name):
    global _active
    if name not in ("numba", "numpy"):
        raise InputError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise InputError("numba backend requested but numba is not importable")
    _active = name


def kernels():
    """The kernel module for the active backend."""
    if _active == "numba":
        from . import _kernels_numba

        return _kernels_numba
    from . import _kernels_numpy

    return _kernels_numpy


def max_threads():
    """Size of the physical worker pool (1 for the numpy backend)."""
    if _active == "numba":
        return _nb().config.NUMBA_NUM_THREADS
    return 1


def set_num_threads(n):
    """Bound the physical worker pool. Returns the thread count actually set."""
    if n < 1:
        raise InputError("thread count must be >= 1")
    n = min(n, max_threads())
    if _active == "numba":
        _nb().set_num_threads(n)
    return n


def get_num_threads():
    if _active == "numba":
        return _nb().get_num_threads()
    return 1


def default_workers():
    """Logical worker count used when an operation takes no explicit p."""
    env = os.environ.get("SKETCHLAB_THREADS")
    if env:
        try:
            p = int(env)
        except ValueError as exc:
            raise InputError(f"SKETCHLAB_THREADS must be an integer, got {env!r}") from exc
        if p < 1:
            raise InputError("SKETCHLAB_THREADS must be >= 1")
        return p
    return get_num_threads()
