"""Hot-loop kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and the environment variable
``VARCLUST_NUMBA`` is not set to ``0``/``false``/``no``. Both paths expose
the same three functions:

``pair_counts(a, b)``
    four pair-agreement counts of two integer label vectors.
``rss_matrix(X, bases)``
    residual sums of squares of every column of ``X`` against every
    orthonormal basis in the zero-padded stack ``bases`` of shape (K, n, m).
``pesel_profile(eigs, N, P, kmax, floor)``
    PESEL scores for k = 1..kmax.
"""

import os

import numpy as np

from . import numpy_impl

_OFF = {"0", "false", "no", "off"}

try:
    from . import numba_impl
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None


def _select(name):
    if name == "numba":
        if numba_impl is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return numba_impl
    if name == "numpy":
        return numpy_impl
    raise ValueError(f"unknown kernel backend {name!r}")


def default_backend():
    flag = os.environ.get("VARCLUST_NUMBA", "1").strip().lower()
    if flag in _OFF or numba_impl is None:
        return "numpy"
    return "numba"


BACKEND = default_backend()
_impl = _select(BACKEND)


def set_backend(name):
    """Switch the active backend in-process; returns the previous name."""
    global BACKEND, _impl
    previous = BACKEND
    _impl = _select(name)
    BACKEND = name
    return previous


def pair_counts(a, b):
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    return tuple(int(v) for v in _impl.pair_counts(a, b))


def rss_matrix(X, bases):
    X = np.ascontiguousarray(X, dtype=np.float64)
    bases = np.ascontiguousarray(bases, dtype=np.float64)
    return _impl.rss_matrix(X, bases)


def pesel_profile(eigs, N, P, kmax, floor):
    return _impl.pesel_profile(eigs, N, P, kmax, floor)
