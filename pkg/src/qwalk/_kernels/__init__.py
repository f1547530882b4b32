"""Hot loops of the time-domain oracles.

The compiled extension is used when it was built; set ``QWALK_PURE_PYTHON=1``
to force the numpy versions.
"""

import os

import numpy as np

from . import _pykernels as python

try:
    if os.environ.get("QWALK_PURE_PYTHON"):
        raise ImportError("pure-python kernels requested")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

BACKEND = "cython" if compiled is not None else "numpy"
_impl = compiled if compiled is not None else python


def cesaro_average(lam, coef, T, backend=None):
    """Exact finite-horizon average of |sum_j coef[x, j] exp(-i t lam_j)|^2 over [0, T]."""
    mod = _select(backend)
    return mod.cesaro_average(
        np.ascontiguousarray(lam, dtype=np.float64),
        np.ascontiguousarray(coef, dtype=np.complex128),
        float(T),
    )


def trapezoid_average(lam, coef, T, samples, backend=None):
    """Trapezoid average on ``samples`` uniform points of [0, T].

    Returns the averaged distribution and the worst norm defect seen along
    the trajectory. Block sums are reduced in a fixed order.
    """
    mod = _select(backend)
    sums, worst = mod.trapezoid_blocks(
        np.ascontiguousarray(lam, dtype=np.float64),
        np.ascontiguousarray(coef, dtype=np.complex128),
        float(T),
        int(samples),
    )
    return np.sum(np.asarray(sums), axis=0), float(worst)


def _select(backend):
    if backend is None:
        return _impl
    if backend == "numpy":
        return python
    if backend == "cython":
        if compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return compiled
    raise ValueError(f"unknown backend {backend!r}")
