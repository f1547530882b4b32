"""Command-line interface: ``qwalk spectrum|mix|verify|classify``.

Exit status: 0 on success, 2 when a closed form was inapplicable and the
projector engine was used instead, 1 on errors or failed checks.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import closed_forms, oracle
from .dsl import ParseError, parse_graph, read_matrix
from .graphs import Cartesian, Circulant, GraphError, Path, adjacency, size_cap, validate
from .mixing import average_distribution, classify_family, mixing_ratio
from .spectral import EPS_EIG, EPS_ORTH, eigensystem, group_eigenvalues

EXIT_OK, EXIT_ERROR, EXIT_FALLBACK = 0, 1, 2
FORMULA_TOL = 1e-9
QUADRATURE_MAX_T = 2000.0


@dataclass(frozen=True)
class RunConfig:
    class_tol: float | None = None
    eps_orth: float = EPS_ORTH
    eps_eig: float = EPS_EIG
    T: float | None = None
    fmt: str = "json"
    size_cap: int | None = None
    threshold: float = 4.0
    oracle: str = "analytic"

    def __post_init__(self):
        for name in ("class_tol", "T"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")
        if self.eps_orth <= 0 or self.eps_eig <= 0 or self.threshold <= 0:
            raise ValueError("tolerances must be positive")
        if self.size_cap is not None and self.size_cap < 1:
            raise ValueError("size cap must be >= 1")


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def _fmt_csv(x: float) -> str:
    return f"{x:.12g}"


def _fmt_table(x: float) -> str:
    return f"{x:.6f}"


def _load_graph(args):
    if args.matrix:
        with open(args.matrix) as fh:
            return read_matrix(fh.read()), f"matrix:{args.matrix}"
    if not args.expr:
        raise ValueError("give a graph expression or --matrix FILE")
    return parse_graph(args.expr), args.expr


def _prepare(args, cfg: RunConfig):
    g, label = _load_graph(args)
    a = adjacency(g, cfg.size_cap)
    if getattr(args, "require_connected", False):
        diag = validate(g, require_connected=True)
        if not diag.ok:
            raise GraphError("; ".join(diag.messages))
    return g, label, a


def _table(headers, rows) -> str:
    cells = [headers] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


def cmd_spectrum(args, cfg: RunConfig, out) -> int:
    g, label, a = _prepare(args, cfg)
    e = eigensystem(g, cfg.class_tol)
    classes = group_eigenvalues(e, cfg.class_tol)
    for msg in classes.diagnostics:
        print(f"warning: {msg}", file=sys.stderr)
    vals = [c.value for c in classes.classes]
    mults = classes.multiplicities
    if cfg.fmt == "json":
        json.dump(
            {
                "order": e.order,
                "source": e.source,
                "eigenvalues": [_num(v) for v in vals],
                "multiplicities": mults,
                "mu": classes.mu,
                "tau": classes.tau,
            },
            out,
            indent=2,
        )
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["eigenvalue", "multiplicity"])
        w.writerows([_fmt_csv(v), m] for v, m in zip(vals, mults))
    else:
        out.write(_table(["eigenvalue", "multiplicity"], [(_fmt_table(v), m) for v, m in zip(vals, mults)]))
    return EXIT_OK


def cmd_mix(args, cfg: RunConfig, out) -> int:
    g, label, a = _prepare(args, cfg)
    e = eigensystem(g, cfg.class_tol)
    d = average_distribution(e, group_eigenvalues(e, cfg.class_tol), args.start)
    ratio = mixing_ratio(d)
    if cfg.fmt == "json":
        json.dump(
            {
                "graph": label,
                "order": d.order,
                "start": d.start,
                "mixing_ratio": _num(ratio),
                "distribution": [{"vertex": i, "p_bar": _num(p)} for i, p in enumerate(d.probs)],
            },
            out,
            indent=2,
        )
        out.write("\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["vertex", "p_bar"])
        w.writerows([i, _fmt_csv(p)] for i, p in enumerate(d.probs))
    else:
        out.write(_table(["vertex", "p_bar"], [(i, _fmt_table(p)) for i, p in enumerate(d.probs)]))
    return EXIT_OK


def _check(name, dev, tol):
    return {"name": name, "max_abs_dev": _num(dev), "tol": _num(tol), "pass": bool(dev <= tol)}


def _informational(g, start, ref):
    """Deviations of the unguarded / shifted-degree variants, for the record."""
    info = []
    if isinstance(g, Circulant) and g.order >= 2 and g.degree == g.order - 1:
        shifted = closed_forms.complete_graph_average(g.order, start, convention="shifted")
        info.append({"name": "complete_shifted_delta_vs_projector",
                     "max_abs_dev": _num(np.max(np.abs(shifted.probs - ref.probs)))})
    if isinstance(g, Cartesian) and isinstance(g.left, Path) and g.left.m == 2 and isinstance(g.right, Circulant):
        halved = closed_forms.prism_average(g.right, start, check=False)
        info.append({"name": "prism_unguarded_vs_projector",
                     "max_abs_dev": _num(np.max(np.abs(halved.probs - ref.probs)))})
    return info


def cmd_verify(args, cfg: RunConfig, out) -> int:
    g, label, a = _prepare(args, cfg)
    e = eigensystem(g, cfg.class_tol)
    classes = group_eigenvalues(e, cfg.class_tol)
    ref = average_distribution(e, classes, args.start)
    checks = [
        _check("eigen_orthonormality", e.orthonormality_error(), cfg.eps_orth),
        _check("eigen_completeness", e.completeness_error(), cfg.eps_orth),
        _check("eigen_residual", e.residual(a), cfg.eps_eig),
        _check("projector_sum", abs(ref.probs.sum() - 1.0), 1e-10),
    ]

    formula, status, fell_back = None, "none", False
    formula_dist = None
    try:
        hit = closed_forms.closed_form_for(g, args.start, cfg.class_tol)
    except closed_forms.FormulaInapplicable as exc:
        formula, status, fell_back = exc.formula, "inapplicable: " + "; ".join(exc.reasons), True
    else:
        if hit is not None:
            formula, formula_dist = hit
            status = "applied"
            checks.append(_check("formula_vs_projector", np.max(np.abs(formula_dist.probs - ref.probs)), FORMULA_TOL))

    oracles = []
    gap = oracle.min_gap(e.values)
    if cfg.oracle in ("analytic", "both"):
        T = cfg.T or oracle.default_horizon(gap)
        r1 = oracle.finite_time_average(e, args.start, T)
        r2 = oracle.finite_time_average(e, args.start, 10 * T)
        v1, v2 = oracle.compare(ref, r1), oracle.compare(ref, r2)
        checks.append(_check(f"projector_vs_analytic_T={T:.6g}", v1.max_abs_dev, v1.tol))
        checks.append(_check(f"projector_vs_analytic_T={10 * T:.6g}", v2.max_abs_dev, v2.tol))
        checks.append(_check("analytic_converges", max(0.0, v2.max_abs_dev - v1.max_abs_dev), v2.tol))
        oracles.append(r2)
    if cfg.oracle in ("quadrature", "both"):
        T = cfg.T or min(oracle.default_horizon(gap), QUADRATURE_MAX_T)
        rq = oracle.quadrature_average(a, args.start, T)
        vq = oracle.compare(ref, rq)
        checks.append(_check(f"projector_vs_quadrature_T={T:.6g}", vq.max_abs_dev, vq.tol))
        checks.append(_check("quadrature_unitarity", rq.norm_defect, 1e-10))
        oracles.append(rq)
    if formula_dist is not None:
        for r in oracles:
            v = oracle.compare(formula_dist, r)
            checks.append(_check(f"formula_vs_{r.method}", v.max_abs_dev, v.tol))

    passed = all(c["pass"] for c in checks)
    report = {
        "graph": label,
        "order": e.order,
        "start": args.start,
        "formula": formula,
        "formula_status": status,
        "checks": checks,
        "informational": _informational(g, args.start, ref),
        "passed": passed,
    }
    if cfg.fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        rows = [(c["name"], _fmt_csv(c["max_abs_dev"]), _fmt_csv(c["tol"]), "pass" if c["pass"] else "FAIL") for c in checks]
        if cfg.fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["check", "max_abs_dev", "tol", "result"])
            w.writerows(rows)
        else:
            out.write(_table(["check", "max_abs_dev", "tol", "result"], rows))
    if not passed:
        return EXIT_ERROR
    return EXIT_FALLBACK if fell_back else EXIT_OK


def _parse_range(text: str) -> list[int]:
    parts = [int(p) for p in text.split(":")]
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3 or parts[2] < 1:
        raise ValueError("--range expects start:stop[:step] with step >= 1")
    return list(range(parts[0], parts[1] + 1, parts[2]))


def cmd_classify(args, cfg: RunConfig, out) -> int:
    ns = _parse_range(args.range)
    cap = size_cap() if cfg.size_cap is None else cfg.size_cap

    def family(n):
        g = parse_graph(args.expr, {"n": n})
        adjacency(g, cap)
        return g

    rep = classify_family(family, ns, cfg.threshold, args.start, cfg.class_tol)
    if cfg.fmt == "json":
        json.dump(
            {
                "family": args.expr,
                "rows": [{"n": r.n, "order": r.order, "ratio": _num(r.ratio)} for r in rep.rows],
                "threshold": rep.threshold,
                "bounded": rep.bounded,
                "monotone": rep.monotone,
                "verdict": rep.verdict,
            },
            out,
            indent=2,
        )
        out.write("\n")
    else:
        if cfg.fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["n", "order", "ratio"])
            w.writerows([r.n, r.order, _fmt_csv(r.ratio)] for r in rep.rows)
        else:
            out.write(_table(["n", "order", "ratio"], [(r.n, r.order, _fmt_table(r.ratio)) for r in rep.rows]))
        out.write(f"# threshold={rep.threshold:g} bounded={str(rep.bounded).lower()} "
                  f"monotone={str(rep.monotone).lower()} verdict={rep.verdict}\n")
    return EXIT_OK


COMMANDS = {"spectrum": cmd_spectrum, "mix": cmd_mix, "verify": cmd_verify, "classify": cmd_classify}
DEFAULT_FORMAT = {"spectrum": "json", "mix": "csv", "verify": "json", "classify": "csv"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwalk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("expr", nargs="?", help="graph expression, e.g. 'cart(path(2), cycle(5))'")
        sp.add_argument("--matrix", help="read an explicit 0/1 adjacency matrix instead")
        sp.add_argument("--start", type=int, default=0)
        sp.add_argument("--tol", type=float, help="eigenvalue class tolerance")
        sp.add_argument("--format", choices=("json", "csv", "table"))
        sp.add_argument("--require-connected", action="store_true")
        sp.add_argument("--threshold", type=float, default=4.0, help="mixing-ratio bound for 'uniform'")
        if name == "verify":
            sp.add_argument("--oracle", choices=("analytic", "quadrature", "both"), default="analytic")
            sp.add_argument("--T", type=float, dest="T", help="oracle horizon")
        if name == "classify":
            sp.add_argument("--range", required=True, help="start:stop[:step], inclusive; substituted for n")
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            class_tol=args.tol,
            T=getattr(args, "T", None),
            fmt=args.format or DEFAULT_FORMAT[args.command],
            threshold=args.threshold,
            oracle=getattr(args, "oracle", "analytic"),
        )
        if args.command == "classify" and args.matrix:
            raise ValueError("classify takes a family expression in n, not --matrix")
        buf = io.StringIO()
        code = COMMANDS[args.command](args, cfg, buf)
    except (ParseError, GraphError, ValueError, IndexError, OSError) as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
