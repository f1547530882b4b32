"""Eigensystems of circulants, paths, joins and Cartesian products.

Every eigensystem is stored densely: ``values[j]`` pairs with the column
``vectors[:, j]``. Analytic constructions are preferred; ``dense_spectrum``
is the numeric fallback and the cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import (
    Cartesian,
    Circulant,
    Explicit,
    Graph,
    Join,
    Path,
    adjacency,
    regular_degree,
)

EPS_ORTH = 1e-10
EPS_EIG = 1e-9
CLASS_TOL = 1e-9


class UnsupportedStructureError(ValueError):
    """The analytic construction does not apply to this graph."""


@dataclass(frozen=True, eq=False)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray = field(repr=False)
    source: str

    @property
    def order(self) -> int:
        return self.vectors.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def orthonormality_error(self) -> float:
        v = self.vectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))

    def completeness_error(self) -> float:
        v = self.vectors
        return float(np.max(np.abs(v @ v.conj().T - np.eye(v.shape[0]))))

    def residual(self, a: np.ndarray) -> float:
        """max |A v - lambda v| over all pairs."""
        v = self.vectors
        return float(np.max(np.abs(a @ v - v * self.values[None, :])))

    def check(self, a: np.ndarray, eps_orth: float = EPS_ORTH, eps_eig: float = EPS_EIG) -> list[str]:
        problems = []
        if self.orthonormality_error() > eps_orth:
            problems.append(f"vectors not orthonormal ({self.orthonormality_error():.3g})")
        if self.completeness_error() > eps_orth:
            problems.append(f"projectors incomplete ({self.completeness_error():.3g})")
        if self.residual(a) > eps_eig:
            problems.append(f"eigen-residual {self.residual(a):.3g}")
        return problems


def circulant_eigenvalues(c: Circulant) -> np.ndarray:
    """lambda_j = sum_k a_k w^{jk}, folded into cosines over k < n/2.

    Only j <= n/2 is evaluated; the other half is mirrored so that
    lambda_j == lambda_{n-j} holds bit-for-bit.
    """
    n = c.n
    s = c.connection.elements
    half = np.arange(n // 2 + 1)
    lam = np.zeros(half.size)
    for d in s:
        if 2 * d < n:
            lam += 2.0 * np.cos(2.0 * np.pi * ((half * d) % n) / n)
        elif 2 * d == n:
            lam += np.where(half % 2 == 0, 1.0, -1.0)
    out = np.empty(n)
    out[: half.size] = lam
    j = np.arange(half.size, n)
    out[j] = lam[n - j]
    return out


def fourier_matrix(n: int) -> np.ndarray:
    """F[x, j] = n^{-1/2} w_n^{jx}, exponents reduced mod n before exp."""
    x = np.arange(n)
    e = np.outer(x, x) % n
    return np.exp(2j * np.pi * e / n) / math.sqrt(n)


def circulant_spectrum(c: Circulant) -> EigenSystem:
    return EigenSystem(circulant_eigenvalues(c), fourier_matrix(c.n), "analytic-circulant")


def path_spectrum(p: Path | int) -> EigenSystem:
    m = p.m if isinstance(p, Path) else int(p)
    j = np.arange(1, m + 1)
    values = 2.0 * np.cos(j * np.pi / (m + 1))
    vectors = math.sqrt(2.0 / (m + 1)) * np.sin(np.outer(j, j) * np.pi / (m + 1))
    return EigenSystem(values, vectors.astype(complex), "analytic-path")


def dense_spectrum(a: np.ndarray) -> EigenSystem:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.allclose(a, a.T, atol=0.0):
        raise ValueError("dense_spectrum needs a symmetric square matrix")
    w, v = np.linalg.eigh(a)
    return EigenSystem(w, v.astype(complex), "dense-numeric")


@dataclass(frozen=True)
class JoinSpectralData:
    k: int
    ell: int
    g: int
    h: int
    delta: float
    lam_plus: float
    lam_minus: float
    beta_plus: float
    beta_minus: float
    len_plus: float
    len_minus: float


def join_data(k: int, ell: int, g: int, h: int) -> JoinSpectralData:
    """Roots of lambda^2 - (k+l) lambda - (|G||H| - k l) and the two constant-block vectors.

    lambda_- comes from the product of roots, which avoids cancellation.
    """
    delta = float((k - ell) ** 2 + 4 * g * h)
    lam_plus = 0.5 * ((k + ell) + math.sqrt(delta))
    lam_minus = (k * ell - g * h) / lam_plus
    beta_plus = (lam_plus - k) / h
    beta_minus = (lam_minus - k) / h
    return JoinSpectralData(
        k, ell, g, h, delta, lam_plus, lam_minus, beta_plus, beta_minus,
        math.sqrt(g + h * beta_plus**2), math.sqrt(g + h * beta_minus**2),
    )


def _without_constant(e: EigenSystem, degree: int, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Drop the all-ones direction from the degree eigenspace of a regular graph."""
    n = e.order
    u = np.full(n, 1.0 / math.sqrt(n))
    top = np.flatnonzero(np.abs(e.values - degree) <= tol)
    keep = np.setdiff1d(np.arange(len(e.values)), top)
    overlaps = np.abs(u @ e.vectors[:, top])
    # Fourier-type bases already contain the constant vector as a column.
    if np.isclose(overlaps.max(), 1.0, atol=1e-12) and np.sum(overlaps > 1e-12) == 1:
        keep = np.sort(np.concatenate([keep, top[overlaps <= 1e-12]]))
        return e.values[keep], e.vectors[:, keep]
    w = e.vectors[:, top]
    w = w - np.outer(u, u @ w)
    q, sv, _ = np.linalg.svd(w, full_matrices=False)
    basis = q[:, : len(top) - 1]
    values = np.concatenate([e.values[keep], np.full(len(top) - 1, float(degree))])
    return values, np.concatenate([e.vectors[:, keep], basis], axis=1)


def join_spectrum(g: Graph, h: Graph, tol: float | None = None) -> EigenSystem:
    """Eigensystem of G + H for regular G and H (circulants in particular).

    Columns: G-supported vectors, then H-supported vectors, then z_+, z_-.
    """
    k, ell = regular_degree(g), regular_degree(h)
    if k is None or ell is None:
        raise UnsupportedStructureError("join_spectrum needs regular parts")
    eg, eh = eigensystem(g), eigensystem(h)
    ng, nh = g.order, h.order
    vg, fg = _without_constant(eg, k, _tol_for(eg, tol))
    vh, fh = _without_constant(eh, ell, _tol_for(eh, tol))
    d = join_data(k, ell, ng, nh)
    n = ng + nh
    vectors = np.zeros((n, n), dtype=complex)
    vectors[:ng, : ng - 1] = fg
    vectors[ng:, ng - 1 : n - 2] = fh
    for col, beta, length in ((n - 2, d.beta_plus, d.len_plus), (n - 1, d.beta_minus, d.len_minus)):
        vectors[:ng, col] = 1.0 / length
        vectors[ng:, col] = beta / length
    values = np.concatenate([vg, vh, [d.lam_plus, d.lam_minus]])
    return EigenSystem(values, vectors, "join-composite")


def cartesian_spectrum(gs: EigenSystem, hs: EigenSystem) -> EigenSystem:
    """All sums mu_j + nu_k with eigenvectors |Q_j> (x) |F_k>."""
    values = (gs.values[:, None] + hs.values[None, :]).ravel()
    return EigenSystem(values, np.kron(gs.vectors, hs.vectors), "cartesian-composite")


def eigensystem(g: Graph, tol: float | None = None) -> EigenSystem:
    """Analytic eigensystem where the structure allows it, dense otherwise."""
    if isinstance(g, Circulant):
        return circulant_spectrum(g)
    if isinstance(g, Path):
        return path_spectrum(g)
    if isinstance(g, Cartesian):
        return cartesian_spectrum(eigensystem(g.left, tol), eigensystem(g.right, tol))
    if isinstance(g, Join):
        if regular_degree(g.left) is not None and regular_degree(g.right) is not None:
            return join_spectrum(g.left, g.right, tol)
        return dense_spectrum(adjacency(g))
    if isinstance(g, Explicit):
        return dense_spectrum(g.matrix)
    raise TypeError(f"not a graph: {g!r}")


def default_tol(e: EigenSystem) -> float:
    return CLASS_TOL * max(1.0, e.spectral_radius)


def _tol_for(e: EigenSystem, tol: float | None) -> float:
    return default_tol(e) if tol is None else tol


@dataclass(frozen=True)
class SpectralClass:
    value: float
    members: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SpectralClasses:
    classes: tuple[SpectralClass, ...]
    tol: float
    diagnostics: tuple[str, ...] = ()

    @property
    def mu(self) -> int:
        """Largest eigenvalue multiplicity."""
        return max(c.multiplicity for c in self.classes)

    @property
    def tau(self) -> int:
        """Number of distinct eigenvalues."""
        return len(self.classes)

    @property
    def order(self) -> int:
        return sum(c.multiplicity for c in self.classes)

    @property
    def values(self) -> np.ndarray:
        return np.array([c.value for c in self.classes])

    @property
    def multiplicities(self) -> list[int]:
        return [c.multiplicity for c in self.classes]

    def min_gap(self) -> float | None:
        """Smallest distance between distinct eigenvalues, or None if tau == 1."""
        v = self.values
        return float(np.min(np.abs(np.diff(v)))) if v.size > 1 else None


def group_eigenvalues(e: EigenSystem, tol: float | None = None) -> SpectralClasses:
    """Single-linkage clustering of the sorted eigenvalues with gap threshold ``tol``."""
    tol = default_tol(e) if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    order = np.argsort(-e.values, kind="stable")
    vals = e.values[order]
    groups, start = [], 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i - 1] - vals[i] > tol:
            groups.append(order[start:i])
            start = i
    classes, notes = [], []
    for idx in groups:
        v = e.values[idx]
        spread = float(v.max() - v.min())
        if spread > tol / 2:
            notes.append(f"class near {v.mean():.12g} spans {spread:.3g} > tol/2; grouping may depend on tol")
        classes.append(SpectralClass(float(v.mean()), tuple(int(i) for i in sorted(idx))))
    return SpectralClasses(tuple(classes), tol, tuple(notes))
