"""Kernel backend selection.

Hot numeric kernels are compiled with numba when it is importable and the
environment variable ``HIVECURVE_NO_NUMBA`` is unset/falsy; otherwise the
pure-numpy implementations are used.  ``HIVECURVE_THREADS`` caps numba's
thread pool.  Selection happens once at import time so a process uses one
backend consistently.
"""

import os

_TRUTHY = ("1", "true", "yes", "on")


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() in _TRUTHY


NUMBA_DISABLED = _env_flag("HIVECURVE_NO_NUMBA")

try:
    import numba as _numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not NUMBA_DISABLED

if USE_NUMBA:
    _threads = os.environ.get("HIVECURVE_THREADS")
    if _threads:
        try:
            _numba.set_num_threads(max(1, min(int(_threads), _numba.config.NUMBA_NUM_THREADS)))
        except (ValueError, RuntimeError):
            pass


def njit_or_python(func):
    """Return an njit-compiled version of ``func``, or ``func`` itself."""
    if USE_NUMBA:
        return _numba.njit(cache=True)(func)
    return func


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
