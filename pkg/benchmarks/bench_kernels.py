"""Compare the compiled and pure-Python tridiagonal kernels.

    python benchmarks/bench_kernels.py --sizes 256,1024,2048 --count 5

Each row times bisection of the ``count`` smallest eigenvalues of the
expander drift operator (``rho = -1``, ``R = 12``) plus one shifted solve,
and checks that both backends return identical numbers.
"""

import argparse
import time

import numpy as np

from soliton_spectra import verify
from soliton_spectra.eigensolver import gershgorin, tridiagonal_norm
from soliton_spectra.kernels import available_backends


def best_time(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_case(module, diag, off, count, repeats):
    off_sq = off * off
    norm = tridiagonal_norm(diag, off)
    pivmin = np.finfo(float).tiny * max(1.0, norm)
    lo, hi = gershgorin(diag, off)
    rhs = np.ones(len(diag))

    def work():
        values = np.asarray(module.bisect_eigenvalues(diag, off_sq, 0, count, lo, hi, pivmin))
        x = np.asarray(module.shifted_solve(diag, off, values[0] + 1e-3, rhs, pivmin))
        return values, x

    return best_time(work, repeats)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="256,1024,2048")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the Python backend only")
    print(f"{'N':>6} " + " ".join(f"{name:>12}" for name in backends) + f" {'speedup':>9} {'identical':>9}")
    for N in (int(s) for s in args.sizes.split(",")):
        op = verify.assemble("drift", -1.0, 1, 0, 12.0, N)
        diag, off = op.diagonal, op.off_diagonal
        results = {name: run_case(mod, diag, off, args.count, args.repeats) for name, mod in backends.items()}
        times = [results[name][0] for name in backends]
        if "cython" in results:
            speedup = f"{results['python'][0] / results['cython'][0]:9.1f}"
            same = all(
                np.array_equal(a, b) for a, b in zip(results["python"][1], results["cython"][1])
            )
        else:
            speedup, same = "n/a", True
        print(f"{N:>6} " + " ".join(f"{t:12.5f}" for t in times) + f" {speedup:>9} {str(same):>9}")


if __name__ == "__main__":
    main()
