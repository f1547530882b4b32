"""Time the compiled and numpy oracle kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from qwalk import _kernels, graphs
from qwalk.graphs import adjacency
from qwalk.oracle import _coefficients, required_samples

CASES = [("K(8)", graphs.complete(8)), ("cycle(32)", graphs.cycle(32)), ("cart(path(4),cycle(16))",
         graphs.cartesian(graphs.make_path(4), graphs.cycle(16)))]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--T", type=float, default=2000.0)
    args = ap.parse_args()
    backends = ["numpy"] + (["cython"] if _kernels.compiled is not None else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing numpy only")
    print(f"{'kernel':<12}{'graph':<26}{'samples':>9}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, g in CASES:
        w, v = np.linalg.eigh(adjacency(g).astype(float))
        coef = _coefficients(v.astype(complex), 0)
        n_samples = required_samples(args.T, float(np.max(np.abs(w))))
        jobs = {
            "cesaro": lambda b: _kernels.cesaro_average(w, coef, args.T, backend=b),
            "trapezoid": lambda b: _kernels.trapezoid_average(w, coef, args.T, n_samples, backend=b),
        }
        for name, job in jobs.items():
            times = [min(timeit.repeat(lambda: job(b), number=1, repeat=args.repeat)) for b in backends]
            ref = np.asarray(job("numpy")[0] if name == "trapezoid" else job("numpy"))
            for b in backends[1:]:
                out = np.asarray(job(b)[0] if name == "trapezoid" else job(b))
                assert np.allclose(out, ref, atol=1e-10), f"{b} disagrees with numpy on {name}/{label}"
            speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
            shown = n_samples if name == "trapezoid" else "-"
            print(f"{name:<12}{label:<26}{shown:>9}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
