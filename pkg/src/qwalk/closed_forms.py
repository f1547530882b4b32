"""Closed-form limiting probabilities for joins, cones, paths and prisms.

Each formula checks its own preconditions and raises
:class:`FormulaInapplicable` when they fail; callers fall back to the
projector engine in :mod:`qwalk.mixing`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import (
    Cartesian,
    Circulant,
    Graph,
    Join,
    Path,
    cartesian,
    empty,
    joinpow,
    make_path,
)
from .mixing import AverageDistribution, average_of, mixing_ratio
from .spectral import (
    CLASS_TOL,
    circulant_eigenvalues,
    join_data,
)


class FormulaInapplicable(ValueError):
    def __init__(self, formula: str, reasons):
        self.formula = formula
        self.reasons = tuple(reasons)
        super().__init__(f"{formula}: " + "; ".join(self.reasons))


@dataclass(frozen=True, eq=False)
class JoinMixResult:
    p_on_G: np.ndarray
    p_on_H: float
    delta: float
    preconditions_met: tuple[tuple[str, bool], ...]
    h_order: int
    notes: tuple[str, ...] = ()
    start: int = 0

    def distribution(self) -> AverageDistribution:
        probs = np.concatenate([self.p_on_G, np.full(self.h_order, self.p_on_H)])
        return AverageDistribution(probs, "closed-form", self.start)


def join_average(g: Circulant, h: Circulant, start: int = 0, tol: float | None = None) -> JoinMixResult:
    """Limiting distribution on G + H for a walk started inside G.

    For x in G:  p_bar_x(G) - 1/|G|^2 + (1/|G|)(1/|G| - 2|H|/Delta)
    For x in H:  2/Delta,   with Delta = (k - l)^2 + 4|G||H|.

    The H-supported eigenvectors vanish on G, so collisions between Sp(H)
    and the rest of the spectrum do not change the average for a G start;
    they are reported in ``notes`` only.
    """
    if not isinstance(g, Circulant) or not isinstance(h, Circulant):
        raise FormulaInapplicable("join_average", ["both parts must be circulants"])
    ng, nh = g.order, h.order
    k, ell = g.degree, h.degree
    d = join_data(k, ell, ng, nh)
    tol = CLASS_TOL * max(1.0, d.lam_plus) if tol is None else tol

    sg = circulant_eigenvalues(g)
    sh = circulant_eigenvalues(h)
    rest_g = np.delete(sg, 0)
    rest_h = np.delete(sh, 0)
    checks = (
        ("start_in_G", 0 <= start < ng),
        ("degree_simple_in_G", not np.any(np.abs(rest_g - k) <= tol)),
        ("lambda_minus_outside_SpG", not np.any(np.abs(rest_g - d.lam_minus) <= tol)),
    )
    notes = []
    if np.any(np.abs(rest_h - d.lam_minus) <= tol):
        notes.append("lambda_- collides with Sp(H) \\ {l} (harmless for a G start)")
    if rest_g.size and rest_h.size and np.any(np.abs(rest_g[:, None] - rest_h[None, :]) <= tol):
        notes.append("Sp(G) and Sp(H) share eigenvalues (harmless for a G start)")
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise FormulaInapplicable("join_average", failed)

    p_g = average_of(g, start, tol).probs
    p_on_g = (p_g - 1.0 / ng**2) + (1.0 / ng) * (1.0 / ng - 2.0 * nh / d.delta)
    return JoinMixResult(p_on_g, 2.0 / d.delta, d.delta, checks, nh, tuple(notes), start)


def cone_average(c: Circulant) -> float:
    """Apex probability of K_1 + C for a walk started at the apex."""
    join_average(empty(1), c)  # precondition check
    n, ell = c.order, c.degree
    apex = 1.0 - 0.5 / (1.0 + (ell / 2.0) ** 2 / n)
    assert apex >= 0.5
    return apex


def complete_graph_average(n: int, start: int = 0, convention: str = "corrected") -> AverageDistribution:
    """K_n viewed as K_1 + K_{n-1}: Delta = (n-2)^2 + 4(n-1) = n^2.

    ``convention="shifted"`` uses l = n - 1, Delta = (n-1)^2 + 4n and
    p_start = 1 - 2n/Delta instead. That variant does not sum to one and is
    kept only so reports can show how far it is off.
    """
    if n < 2:
        raise ValueError("complete_graph_average needs n >= 2")
    if convention == "corrected":
        delta = float((n - 2) ** 2 + 4 * (n - 1))
        p_start = 1.0 - 2.0 * (n - 1) / delta
    elif convention == "shifted":
        delta = float((n - 1) ** 2 + 4 * n)
        p_start = 1.0 - 2.0 * n / delta
    else:
        raise ValueError(f"unknown convention {convention!r}")
    probs = np.full(n, 2.0 / delta)
    probs[start] = p_start
    return AverageDistribution(probs, "closed-form", start)


@dataclass(frozen=True)
class HomogeneousJoinTable:
    rows: tuple[tuple[float, int, str], ...]
    m: int
    n: int

    def eigenvalues(self) -> np.ndarray:
        vals = [v for v, mult, _ in self.rows for _ in range(mult)]
        return np.sort(np.array(vals))[::-1]


def homogeneous_join_spectrum(g: Circulant, m: int) -> HomogeneousJoinTable:
    """Spectrum of the m-fold join G + ... + G (A = I_m (x) A_G + A_{K_m} (x) J_n)."""
    n = g.order
    lam = circulant_eigenvalues(g)
    top = lam[0]
    reasons = []
    if m < 2:
        reasons.append("m must be >= 2")
    if not n > 2 * top:
        reasons.append(f"needs n > 2*lambda_0(G) (n={n}, lambda_0={top:g})")
    if reasons:
        raise FormulaInapplicable("homogeneous_join_spectrum", reasons)
    rows = [(top + (m - 1) * n, 1, "j=k=0"), (top - n, m - 1, "j!=0,k=0")]
    rows += [(float(v), m, "k!=0") for v in lam[1:]]
    lo, hi = top - n, top + (m - 1) * n
    assert all(lo < v < hi for v in lam[1:])
    return HomogeneousJoinTable(tuple(rows), m, n)


def multipartite_average(m: int, n: int, start: int = 0) -> AverageDistribution:
    """Exact projector distribution on K_n-bar + ... + K_n-bar (m parts)."""
    if m < 2:
        raise ValueError("multipartite_average needs m >= 2")
    return average_of(joinpow(empty(n), m), start)


def resonant_pairs(values: np.ndarray, tol: float) -> list[tuple[float, float]]:
    """Eigenvalue pairs whose difference is 2 within tol."""
    v = np.unique(np.round(values, 12))
    diff = np.abs(v[:, None] - v[None, :])
    i, j = np.nonzero(np.triu(np.abs(diff - 2.0) <= tol))
    return [(float(v[a]), float(v[b])) for a, b in zip(i, j)]


def prism_average(
    g: Circulant, start: int = 0, tol: float | None = None, check: bool = True
) -> AverageDistribution:
    """Halving formula on P_2 (x) G: p_bar_{b,x} = p_bar_x(G) / 2 on both decks.

    Refused when two eigenvalues of G differ by 2, where the cos^2-weighted
    average picks up an extra 1/4 term. ``check=False`` skips the refusal
    and returns the plain halved distribution regardless.
    """
    if not isinstance(g, Circulant):
        raise FormulaInapplicable("prism_average", ["base must be a circulant"])
    n = g.order
    lam = circulant_eigenvalues(g)
    tol = CLASS_TOL * max(1.0, float(np.max(np.abs(lam))) + 1.0) if tol is None else tol
    hits = resonant_pairs(lam, tol)
    if hits and check:
        raise FormulaInapplicable("prism_average", [f"eigenvalue gap 2 at {hits[0]}"])
    p_g = average_of(g, start % n, tol).probs
    return AverageDistribution(np.concatenate([p_g, p_g]) / 2.0, "closed-form", start)


@dataclass(frozen=True, eq=False)
class PathAverage:
    distribution: AverageDistribution
    bound: float


def path_average(m: int) -> PathAverage:
    """Limiting distribution on P_m from the endpoint vertex (index 0)."""
    if m < 1:
        raise ValueError("path_average needs m >= 1")
    j = np.arange(1, m + 1)
    s = np.sin(np.outer(j, j) * np.pi / (m + 1)) ** 2  # s[j-1, x-1]
    probs = 4.0 / (m + 1) ** 2 * (s[:, 0] @ s)
    bound = 2.0 / (m + 1) + 4.0 / (m + 1) ** 2
    assert probs.max() <= bound
    return PathAverage(AverageDistribution(probs, "closed-form", 0), bound)


@dataclass(frozen=True, eq=False)
class CylinderAverage:
    distribution: AverageDistribution
    ratio: float


def cylinder_average(m: int, g: Graph, tol: float | None = None) -> CylinderAverage:
    """P_m (x) G from vertex (1, 0), through the product spectrum."""
    d = average_of(cartesian(make_path(m), g), 0, tol)
    return CylinderAverage(d, mixing_ratio(d))


def closed_form_for(g: Graph, start: int = 0, tol: float | None = None):
    """Pick the closed form matching ``g``'s shape.

    Returns ``(name, AverageDistribution)``, or None when no formula covers
    the graph. Raises FormulaInapplicable when one matches but its
    preconditions fail.
    """
    if isinstance(g, Circulant) and g.order >= 2 and g.degree == g.order - 1:
        return "complete", complete_graph_average(g.order, start)
    if isinstance(g, Path) and start in (0, g.m - 1):
        probs = path_average(g.m).distribution.probs
        probs = probs if start == 0 else probs[::-1].copy()
        return "path", AverageDistribution(probs, "closed-form", start)
    if isinstance(g, Join) and isinstance(g.left, Circulant) and isinstance(g.right, Circulant):
        ng = g.left.order
        if start < ng:
            return "join", join_average(g.left, g.right, start, tol).distribution()
        r = join_average(g.right, g.left, start - ng, tol)
        probs = np.concatenate([np.full(ng, r.p_on_H), r.p_on_G])
        return "join", AverageDistribution(probs, "closed-form", start)
    if (
        isinstance(g, Cartesian)
        and isinstance(g.left, Path)
        and g.left.m == 2
        and isinstance(g.right, Circulant)
    ):
        return "prism", prism_average(g.right, start, tol)
    return None


@dataclass(frozen=True, eq=False)
class Resolved:
    distribution: AverageDistribution
    formula: str | None
    refused: tuple[str, ...] = ()

    @property
    def fell_back(self) -> bool:
        return bool(self.refused)


def limiting_distribution(g: Graph, start: int = 0, tol: float | None = None) -> Resolved:
    """Closed form when one covers ``g`` and its preconditions hold, else the projector engine."""
    try:
        hit = closed_form_for(g, start, tol)
    except FormulaInapplicable as exc:
        return Resolved(average_of(g, start, tol), exc.formula, exc.reasons)
    if hit is None:
        return Resolved(average_of(g, start, tol), None)
    return Resolved(hit[1], hit[0])


__all__ = [
    "Resolved",
    "limiting_distribution",
    "FormulaInapplicable",
    "JoinMixResult",
    "HomogeneousJoinTable",
    "PathAverage",
    "CylinderAverage",
    "join_average",
    "cone_average",
    "complete_graph_average",
    "homogeneous_join_spectrum",
    "multipartite_average",
    "prism_average",
    "path_average",
    "cylinder_average",
    "closed_form_for",
    "resonant_pairs",
]
