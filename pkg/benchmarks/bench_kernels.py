"""Compiled vs pure-Python kernels: timings and a bit-identity check.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Prints one CSV row per (workload, backend) with the best-of-N wall time and
the speedup of the compiled kernels. Both backends must produce the same
values; the script exits 1 if they do not.
"""
import argparse
import sys
import time

import numpy as np

import subcoord as sc
from subcoord import _backend


def _objectives(backend, n, seed=0):
    rng = np.random.default_rng(seed)
    A = -rng.uniform(0, 0.5, (n, n))
    Q = np.triu(A, 1)
    Q = Q + Q.T
    Q[np.diag_indices(n)] = rng.uniform(-0.3, 0.3, n)
    c = -np.minimum(Q, 0).sum(axis=1) + rng.uniform(0.1, 1, n)
    return {
        "quadratic": sc.QuadraticObjective(c, Q, backend=backend),
        "concave": sc.ConcaveLinearObjective(rng.uniform(0.2, 2, n), "sqrt_shift", backend=backend),
    }


def _workloads(quick):
    n_scan = 8
    scans = 200 if quick else 2000

    def scan(F):
        x = np.zeros(n_scan)
        coords = np.arange(n_scan)
        lows = np.full(n_scan, 1e-3)
        highs = np.full(n_scan, 1.0)
        out = None
        for _ in range(scans):
            out = F.coordinate_scan(x, coords, lows, highs, 0.01, offset=0.0)
        return out[2]

    def ca(F):
        inst = sc.ProblemInstance(F, np.ones(F.dimension), 2.0)
        return sc.coordinate_ascent(inst, sc.CaConfig(0.02)).value

    def feca(F):
        inst = sc.ProblemInstance(F, np.ones(F.dimension), 1.0)
        return sc.fully_enhanced_ca(inst, sc.CaConfig(0.2 if quick else 0.1)).value

    return [("scan-n8", n_scan, scan), ("ca-n6", 6, ca), ("feca-n4", 4, feca)]


def _best_of(fn, arg, repeat):
    best, value = np.inf, None
    for _ in range(repeat):
        t = time.perf_counter()
        value = fn(arg)
        best = min(best, time.perf_counter() - t)
    return best, value


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args(argv)

    backends = _backend.available()
    if "compiled" not in backends:
        print("compiled kernels are not built; only the python backend can be timed", file=sys.stderr)
    print("workload,family,backend,seconds,speedup,value")
    mismatch = False
    for name, n, fn in _workloads(args.quick):
        for family in ("quadratic", "concave"):
            times, values = {}, {}
            for backend in backends:
                F = _objectives(backend, n)[family]
                times[backend], values[backend] = _best_of(fn, F, args.repeat)
            base = times["python"]
            for backend in backends:
                print("%s,%s,%s,%.6f,%.2f,%.17g" % (name, family, backend, times[backend],
                                                   base / times[backend], values[backend]))
            if len(set(values.values())) != 1:
                mismatch = True
                print(f"# MISMATCH {name} {family}: {values}")
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
