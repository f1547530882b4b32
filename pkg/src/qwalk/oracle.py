"""Time-domain checks of average distributions.

Two independent routes to the Cesaro average of p_x(t) over [0, T]:

* ``finite_time_average`` integrates every cross term exactly at finite T.
* ``quadrature_average`` never sees the analytic spectrum; it diagonalizes
  the adjacency matrix itself and samples p(t) on a uniform grid.

Neither route consults the eigenvalue grouping used by the projector engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .mixing import AverageDistribution
from .spectral import EigenSystem

POINTS_PER_PERIOD = 16
MIN_POINTS_PER_PERIOD = 10
BASE_HORIZON = 1e4
GAP_FLOOR = 1e-8


class UnderSampledError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OracleReport:
    method: str
    T: float
    distribution: np.ndarray
    start: int
    samples: int | None = None
    gap: float | None = None
    quadrature_error: float = 0.0
    norm_defect: float = 0.0
    max_abs_dev_vs_reference: float | None = None

    def against(self, reference: AverageDistribution) -> "OracleReport":
        dev = float(np.max(np.abs(reference.probs - self.distribution)))
        return replace(self, max_abs_dev_vs_reference=dev)


def _coefficients(vectors: np.ndarray, start: int) -> np.ndarray:
    # coef[x, j] = <x|v_j><v_j|start>
    return vectors * vectors[start].conj()[None, :]


def min_gap(values: np.ndarray) -> float | None:
    v = np.sort(values)
    d = np.diff(v)
    d = d[d > GAP_FLOOR]
    return float(d.min()) if d.size else None


def default_horizon(gap: float | None) -> float:
    return BASE_HORIZON / gap if gap else BASE_HORIZON


def finite_time_average(e: EigenSystem, start: int, T: float, backend: str | None = None) -> OracleReport:
    """Exact (1/T) int_0^T p_x(t) dt from the eigenpairs."""
    if T <= 0:
        raise ValueError("T must be positive")
    coef = _coefficients(e.vectors, start)
    dist = _kernels.cesaro_average(e.values, coef, T, backend=backend)
    return OracleReport("finite-T-analytic", float(T), dist, start, gap=min_gap(e.values))


def required_samples(T: float, radius: float, per_period: float = POINTS_PER_PERIOD) -> int:
    """Grid size giving ``per_period`` points per fastest period 2*pi / (2*radius)."""
    return max(2, math.ceil(per_period * T * 2.0 * radius / (2.0 * math.pi)) + 1)


def quadrature_average(
    a: np.ndarray, start: int, T: float, samples: int | None = None, backend: str | None = None
) -> OracleReport:
    """Trapezoid average of p(t) with an independently computed eigendecomposition."""
    a = np.asarray(a, dtype=float)
    if T <= 0:
        raise ValueError("T must be positive")
    w, v = np.linalg.eigh(a)
    radius = float(np.max(np.abs(w))) if w.size else 0.0
    floor = required_samples(T, radius, MIN_POINTS_PER_PERIOD)
    if samples is None:
        samples = required_samples(T, radius)
    if samples < floor:
        raise UnderSampledError(
            f"{samples} samples over T={T:g} is below {floor} "
            f"({MIN_POINTS_PER_PERIOD} points per period at spectral radius {radius:.4g})"
        )
    coef = _coefficients(v.astype(complex), start)
    dist, norm_defect = _kernels.trapezoid_average(w, coef, T, samples, backend=backend)
    h = T / (samples - 1)
    # Euler-Maclaurin leading term: (h^2 / 12) |p'(T) - p'(0)| / T, with |p'| <= 2 * radius.
    quad_err = 2.0 * h**2 * (4.0 * radius) / (12.0 * T)
    return OracleReport(
        "quadrature", float(T), dist, start, samples=samples, gap=min_gap(w),
        quadrature_error=quad_err, norm_defect=norm_defect,
    )


@dataclass(frozen=True)
class Verdict:
    passed: bool
    max_abs_dev: float
    tol: float


def tolerance(report: OracleReport, c: float = 4.0) -> float:
    """C / (T * gap) + quadrature term; with no nonzero gap only the quadrature term remains."""
    tail = c / (report.T * report.gap) if report.gap else 0.0
    return tail + report.quadrature_error + 1e-12


def compare(reference: AverageDistribution, report: OracleReport, c: float = 4.0, tol: float | None = None) -> Verdict:
    if reference.order != report.distribution.size or reference.start != report.start:
        raise ValueError("reference and oracle report describe different walks")
    dev = float(np.max(np.abs(reference.probs - report.distribution)))
    tol = tolerance(report, c) if tol is None else tol
    return Verdict(dev <= tol, dev, tol)
