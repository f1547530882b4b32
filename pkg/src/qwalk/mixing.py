"""Walk amplitudes, exact average distributions and mixing diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .graphs import Graph
from .spectral import EigenSystem, SpectralClasses, eigensystem, group_eigenvalues

NORM_TOL = 1e-10
DEFAULT_THRESHOLD = 4.0


@dataclass(frozen=True, eq=False)
class WalkState:
    amplitudes: np.ndarray
    time: float
    start: int

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class AverageDistribution:
    probs: np.ndarray
    provenance: str
    start: int

    @property
    def order(self) -> int:
        return self.probs.size

    def __len__(self):
        return self.probs.size


def _check_start(e: EigenSystem, start: int):
    if not 0 <= start < e.order:
        raise IndexError(f"start vertex {start} outside [0, {e.order})")


def amplitude_at(e: EigenSystem, start: int, t: float) -> WalkState:
    """psi(t) = exp(-i t A) |start>, expanded in the eigenbasis."""
    _check_start(e, start)
    v = e.vectors
    coef = np.exp(-1j * t * e.values) * v[start].conj()
    return WalkState(v @ coef, float(t), start)


def instantaneous_distribution(e: EigenSystem, start: int, t: float) -> np.ndarray:
    return amplitude_at(e, start, t).probabilities


def average_distribution(e: EigenSystem, classes: SpectralClasses, start: int) -> AverageDistribution:
    """p_bar[x] = sum over eigenvalue classes of |<x| E_lambda |start>|^2."""
    _check_start(e, start)
    v = e.vectors
    probs = np.zeros(e.order)
    for c in classes.classes:
        idx = list(c.members)
        col = v[:, idx] @ v[start, idx].conj()
        probs += col.real**2 + col.imag**2
    np.maximum(probs, 0.0, out=probs)
    return AverageDistribution(probs, "projector", start)


def average_of(g: Graph, start: int = 0, tol: float | None = None) -> AverageDistribution:
    """Convenience: eigensystem, classes and projector average in one call."""
    e = eigensystem(g, tol)
    return average_distribution(e, group_eigenvalues(e, tol), start)


def deviation_bound(classes: SpectralClasses) -> float:
    """Bound on max_j |p_bar_j - 1/n| for a circulant started at a vertex.

    Counts ordered pairs of distinct Fourier modes sharing an eigenvalue:
    (1/n^2) sum_lambda m(m - 1).
    """
    n = classes.order
    return sum(m * (m - 1) for m in classes.multiplicities) / n**2


def multiplicity_bound(classes: SpectralClasses) -> float:
    """Coarser bound mu(mu - 1) / n in terms of the largest multiplicity alone."""
    return classes.mu * (classes.mu - 1) / classes.order


def mixing_ratio(d: AverageDistribution) -> float:
    """|V| * max_j p_bar_j."""
    return float(d.order * np.max(d.probs))


def rotate_degenerate(e: EigenSystem, classes: SpectralClasses, rng: np.random.Generator) -> EigenSystem:
    """Same spectrum, with a random unitary mixing applied inside every class."""
    v = e.vectors.copy()
    for c in classes.classes:
        if c.multiplicity < 2:
            continue
        idx = list(c.members)
        m = len(idx)
        z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        v[:, idx] = v[:, idx] @ q
    return EigenSystem(e.values.copy(), v, e.source)


@dataclass(frozen=True)
class FamilyRow:
    n: int
    order: int
    ratio: float


@dataclass(frozen=True)
class FamilyReport:
    rows: tuple[FamilyRow, ...]
    threshold: float
    bounded: bool
    monotone: bool

    @property
    def verdict(self) -> str:
        return "uniform" if self.bounded else "not uniform"


def classify_family(
    family: Callable[[int], Graph],
    ns: Iterable[int],
    threshold: float = DEFAULT_THRESHOLD,
    start: int = 0,
    tol: float | None = None,
) -> FamilyReport:
    """Mixing ratio across a parameterized family.

    ``bounded`` means every ratio stays <= threshold; ``monotone`` means the
    ratio is strictly increasing in n. No asymptotic fit is attempted.
    """
    ns = list(ns)
    if len(ns) < 3:
        raise ValueError("classify_family needs at least 3 sample sizes")
    rows = []
    for n in ns:
        g = family(n)
        rows.append(FamilyRow(n, g.order, mixing_ratio(average_of(g, start, tol))))
    ratios = [r.ratio for r in rows]
    return FamilyReport(
        tuple(rows),
        threshold,
        bounded=all(r <= threshold for r in ratios),
        monotone=all(b > a for a, b in zip(ratios, ratios[1:])),
    )
