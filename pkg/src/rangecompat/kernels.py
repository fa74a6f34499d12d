"""Backend selection for the hot GF(q) matrix kernels.

At import time the compiled extension ``_gfcore`` is preferred when it
was built; otherwise the pure numpy module ``_gfcore_py`` is used.  Set
``RANGECOMPAT_PURE_PYTHON=1`` in the environment to force the fallback.
Both backends produce bit-identical results, so every computation in
the toolkit is backend-independent; only speed differs (see
``benchmarks/bench_kernels.py``).
"""

import os

from . import _gfcore_py

_BACKENDS = {"python": _gfcore_py}

try:
    from . import _gfcore

    _BACKENDS["cython"] = _gfcore
except ImportError:
    _gfcore = None

if os.environ.get("RANGECOMPAT_PURE_PYTHON"):
    _active = _BACKENDS["python"]
else:
    _active = _BACKENDS.get("cython", _BACKENDS["python"])


def backend_name():
    return "cython" if _active is _BACKENDS.get("cython") else "python"


def available_backends():
    return tuple(sorted(_BACKENDS))


def set_backend(name):
    """Switch backends at runtime (used by tests and benchmarks)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    _active = _BACKENDS[name]


def rref(mat, t):
    return _active.rref(mat, t.add, t.sub, t.mul, t.inv)


def reduce_rows(V, R, pivots, t):
    _active.reduce_rows(V, R, pivots, t.sub, t.mul)


def mat_mul(A, B, t):
    return _active.mat_mul(A, B, t.add, t.mul)


def column_annihilator(M, t):
    return _active.column_annihilator(M, t.add, t.sub, t.mul, t.inv, t.neg)
