"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (shown in the terminal summary)
before asserting, so a failing criterion still reports its measured numbers.
"""

import math
import time

import numpy as np
import pytest

from qwalk import graphs
from qwalk.closed_forms import (
    FormulaInapplicable,
    complete_graph_average,
    join_average,
    limiting_distribution,
    path_average,
    prism_average,
)
from qwalk.graphs import adjacency, cartesian, join, joinpow, make_circulant, make_path
from qwalk.mixing import (
    amplitude_at,
    average_distribution,
    average_of,
    deviation_bound,
    mixing_ratio,
    rotate_degenerate,
)
from qwalk.oracle import finite_time_average, quadrature_average
from qwalk.spectral import eigensystem, group_eigenvalues

from conftest import ACCEPTANCE

ORACLE_T = 1e4


def record(num, ok, summary):
    ACCEPTANCE[num] = (bool(ok), summary)
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {summary}")
    assert ok, summary


def maxdev(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def test_criterion_1_exact_small_distributions():
    cases = {
        "C4": (graphs.cycle(4), [3 / 8, 1 / 8, 3 / 8, 1 / 8]),
        "C5": (graphs.cycle(5), [9 / 25] + [4 / 25] * 4),
        "P3": (make_path(3), [3 / 8, 1 / 4, 3 / 8]),
        "K2": (make_path(2), [1 / 2, 1 / 2]),
    }
    worst_dev, worst_time, ok = 0.0, 0.0, True
    for g, expected in cases.values():
        t0 = time.perf_counter()
        probs = average_of(g).probs
        elapsed = time.perf_counter() - t0
        dev = maxdev(probs, expected)
        worst_dev, worst_time = max(worst_dev, dev), max(worst_time, elapsed)
        ok &= dev <= 1e-9 and elapsed < 1.0
    record(1, ok, f"C4, C5, P3, K2 exact; max dev {worst_dev:.2e} (tol 1e-9), slowest {worst_time * 1e3:.1f} ms")


def test_criterion_2_complete_graph_localization():
    ok, ratios, worst_agree, worst_start = True, [], 0.0, 0.0
    shifted_worst = 0.0
    for n in (3, 4, 8, 16):
        g = graphs.complete(n)
        proj = average_of(g).probs
        formula = complete_graph_average(n).probs
        analytic = finite_time_average(eigensystem(g), 0, ORACLE_T).distribution
        quad = quadrature_average(adjacency(g), 0, ORACLE_T).distribution
        views = [proj, formula, analytic, quad]
        agree = max(maxdev(a, b) for i, a in enumerate(views) for b in views[i + 1 :])
        target = 1 - 2 * (n - 1) / n**2
        start = max(abs(proj[0] - target), abs(formula[0] - target))
        worst_agree, worst_start = max(worst_agree, agree), max(worst_start, start)
        ok &= agree <= 1e-2 and start <= 1e-9
        ratios.append(mixing_ratio(average_of(g)))
        shifted_worst = max(shifted_worst, maxdev(complete_graph_average(n, convention="shifted").probs, proj))
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    ok &= increasing
    record(
        2, ok,
        f"K3/K4/K8/K16 four-way agreement {worst_agree:.2e} (tol 1e-2), start prob vs 1-2(n-1)/n^2 "
        f"{worst_start:.2e} (tol 1e-9), ratios {', '.join(f'{r:.4g}' for r in ratios)} increasing={increasing}; "
        f"(n-1)^2+4n variant off by up to {shifted_worst:.3f}",
    )


def test_criterion_3_bounded_multiplicity_uniformity():
    t0 = time.perf_counter()
    family = [("cycle", n, graphs.cycle(n)) for n in range(5, 22, 2)]
    family += [("mobius", n, graphs.mobius(n)) for n in range(6, 21, 2)]
    bound_violations, ratio_violations = [], []
    for name, n, g in family:
        e = eigensystem(g)
        classes = group_eigenvalues(e)
        d = average_distribution(e, classes, 0)
        dev, bound = float(np.max(np.abs(d.probs - 1 / n))), deviation_bound(classes)
        # The bound is attained with equality on most of these graphs; allow rounding only.
        if dev > bound + 1e-12:
            bound_violations.append(f"{name}({n})")
        ratio = mixing_ratio(d)
        if ratio > 2.5:
            ratio_violations.append(f"{name}({n}) ratio {ratio:.4g}")
    elapsed = time.perf_counter() - t0
    ok = not bound_violations and not ratio_violations and elapsed < 5.0
    record(
        3, ok,
        f"{len(family)} graphs in {elapsed:.2f} s; deviation bound violations: {bound_violations or 'none'}; "
        f"ratio > 2.5: {ratio_violations or 'none'}",
    )


def _random_circulant(rng, max_n=12):
    n = int(rng.integers(1, max_n + 1))
    if n == 1:
        return graphs.complete(1)
    k = int(rng.integers(0, 4))
    return make_circulant(n, rng.integers(1, n, size=k).tolist())


def test_criterion_4_join_formula_equivalence():
    rng = np.random.default_rng(4)
    passing, refused = [], []
    # Two known refusals first, so the fallback path is exercised whatever the draw.
    forced = [(graphs.complete(5), graphs.complete(1)), (graphs.empty(3), graphs.empty(3))]
    while len(passing) < 20:
        g, h = forced.pop() if forced else (_random_circulant(rng), _random_circulant(rng))
        start = int(rng.integers(0, g.order))
        try:
            r = join_average(g, h, start)
        except FormulaInapplicable:
            refused.append((g, h, start))
            continue
        passing.append(maxdev(r.distribution().probs, average_of(join(g, h), start).probs))
    fallback_dev = 0.0
    ok = max(passing) <= 1e-9
    for g, h, start in refused:
        res = limiting_distribution(join(g, h), start)
        ok &= res.fell_back and res.distribution.provenance == "projector"
        oracle = finite_time_average(eigensystem(join(g, h)), start, ORACLE_T).distribution
        fallback_dev = max(fallback_dev, maxdev(res.distribution.probs, oracle))
    ok &= fallback_dev <= 1e-2
    record(
        4, ok,
        f"20 admissible pairs, formula vs projector {max(passing):.2e} (tol 1e-9); "
        f"{len(refused)} refused pairs fell back, projector vs oracle {fallback_dev:.2e} (tol 1e-2)",
    )


def test_criterion_5_prism_halving_boundary():
    c5, c4 = graphs.cycle(5), graphs.cycle(4)
    good = maxdev(prism_average(c5).probs, average_of(cartesian(make_path(2), c5)).probs)
    prism4 = cartesian(make_path(2), c4)
    proj4 = average_of(prism4).probs
    halved4 = prism_average(c4, check=False).probs
    bad = maxdev(halved4, proj4)
    oracle = finite_time_average(eigensystem(prism4), 0, ORACLE_T).distribution
    quad = quadrature_average(adjacency(prism4), 0, 2000.0).distribution
    proj_vs_oracle = max(maxdev(proj4, oracle), maxdev(proj4, quad))
    try:
        prism_average(c4)
        guarded = False
    except FormulaInapplicable:
        guarded = True
    ok = good <= 1e-9 and bad > 1e-3 and proj_vs_oracle <= 1e-2 and guarded
    record(
        5, ok,
        f"P2xC5 halving dev {good:.2e} (tol 1e-9); P2xC4 halving dev {bad:.4f} (> 1e-3), "
        f"projector vs oracles {proj_vs_oracle:.2e} (tol 1e-2), guard refuses={guarded}",
    )


def test_criterion_6_path_bound():
    ok, parts = True, []
    for m in (10, 50, 200):
        res = path_average(m)
        top = float(res.distribution.probs.max())
        bound = 2 / (m + 1) + 4 / (m + 1) ** 2
        dev = maxdev(res.distribution.probs, average_of(make_path(m)).probs)
        ok &= top <= bound and dev <= 1e-9
        parts.append(f"m={m}: max {top:.5f} <= {bound:.5f}, dev {dev:.1e}")
    record(6, ok, "; ".join(parts))


def test_criterion_7_multipartite_non_uniformity():
    ok, rows = True, []
    for n in (3, 6, 12):
        d = average_of(joinpow(graphs.empty(n), 2))
        rows.append((n, float(d.probs[0]), 1 / d.order, mixing_ratio(d)))
        ok &= d.probs[0] >= 0.45 and 1 / d.order <= 1 / 6
    per_n = [r / n for n, _, _, r in rows]
    linear = all(b >= a for a, b in zip(per_n, per_n[1:]))
    ok &= linear
    record(
        7, ok,
        "; ".join(f"K{n},{n}: p_start {p:.4f}, 1/|V| {u:.4f}, ratio {r:.3f}" for n, p, u, r in rows)
        + f"; ratio/n nondecreasing={linear}",
    )


def test_criterion_8_hypercube_contrast():
    p2 = make_path(2)
    cubes = [cartesian(p2, p2), cartesian(p2, cartesian(p2, p2)), cartesian(p2, cartesian(p2, cartesian(p2, p2)))]
    ratios = [mixing_ratio(average_of(q)) for q in cubes]
    cube_dev = maxdev(ratios, [1.5, 2.5, 4.375])
    prisms = [mixing_ratio(average_of(cartesian(p2, graphs.cycle(n)))) for n in range(3, 22, 2)]
    ok = cube_dev <= 1e-9 and max(prisms) <= 2.5
    record(
        8, ok,
        f"Q2/Q3/Q4 ratios {', '.join(f'{r:.6g}' for r in ratios)} (dev {cube_dev:.1e}); "
        f"P2xC_n odd n<=21 max ratio {max(prisms):.4f} (<= 2.5)",
    )


def _random_graphs(count, seed=9):
    rng = np.random.default_rng(seed)
    out = []
    kinds = ["circ", "path", "join", "cart", "joinpow", "explicit"]
    while len(out) < count:
        kind = kinds[len(out) % len(kinds)]
        if kind == "circ":
            n = int(rng.integers(1, 65))
            g = make_circulant(n, rng.integers(1, max(2, n), size=int(rng.integers(0, 5))).tolist()) if n > 1 else graphs.complete(1)
        elif kind == "path":
            g = make_path(int(rng.integers(1, 65)))
        elif kind == "join":
            g = join(_random_circulant(rng, 32), _random_circulant(rng, 32))
        elif kind == "cart":
            left = make_path(int(rng.integers(1, 5))) if rng.random() < 0.5 else _random_circulant(rng, 8)
            g = cartesian(left, _random_circulant(rng, 8))
        elif kind == "joinpow":
            g = joinpow(_random_circulant(rng, 10), int(rng.integers(2, 5)))
        else:
            n = int(rng.integers(1, 65))
            a = np.triu((rng.random((n, n)) < rng.uniform(0.05, 0.6)).astype(int), 1)
            g = graphs.explicit(a + a.T)
        if g.order <= 64:
            out.append(g)
    return out


def test_criterion_9_universal_invariants():
    rng = np.random.default_rng(99)
    family = _random_graphs(240)
    worst = {"sum": 0.0, "unitarity": 0.0, "completeness": 0.0, "rotation": 0.0}
    for g in family:
        e = eigensystem(g)
        classes = group_eigenvalues(e)
        start = int(rng.integers(0, g.order))
        d = average_distribution(e, classes, start)
        worst["sum"] = max(worst["sum"], abs(d.probs.sum() - 1))
        for t in (0.37, 5.0, 250.0):
            norm = np.linalg.norm(amplitude_at(e, start, t).amplitudes)
            worst["unitarity"] = max(worst["unitarity"], abs(norm - 1))
        proj = sum(e.vectors[:, list(c.members)] @ e.vectors[:, list(c.members)].conj().T for c in classes.classes)
        worst["completeness"] = max(worst["completeness"], float(np.max(np.abs(proj - np.eye(g.order)))))
        rotated = average_distribution(rotate_degenerate(e, classes, rng), classes, start)
        worst["rotation"] = max(worst["rotation"], maxdev(rotated.probs, d.probs))
    ok = (worst["sum"] <= 1e-10 and worst["unitarity"] <= 1e-10
          and worst["completeness"] <= 1e-10 and worst["rotation"] <= 1e-9)
    record(
        9, ok,
        f"{len(family)} graphs (order <= 64): sum {worst['sum']:.1e}, unitarity {worst['unitarity']:.1e}, "
        f"completeness {worst['completeness']:.1e} (tol 1e-10), rotation {worst['rotation']:.1e} (tol 1e-9)",
    )
