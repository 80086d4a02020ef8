"""Numba detection and the switch between compiled and pure-numpy kernels.

Set ``HYPBALL_DISABLE_NUMBA=1`` in the environment to force the numpy
fallback path even when numba is importable.
"""
import os

_FLAG = os.environ.get("HYPBALL_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED_BY_ENV = _FLAG in ("1", "true", "yes", "on")

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` with caching, or a no-op decorator without numba."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)

    def wrap(fn):
        return fn

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap


def backend_name(backend=None):
    """Resolve an explicit backend request ('numba', 'numpy' or None)."""
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
