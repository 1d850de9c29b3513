"""Time the compiled and pure-Python eigenvalue kernels on Schwarz iteration matrices.

    python benchmarks/bench_eigen.py [--sizes 5,10,20,35] [--repeat 3]
"""

import argparse
import time

import numpy as np

from wgschwarz import kernels
from wgschwarz.schwarz import BlockToeplitzOperator
from wgschwarz.spectral import eigenvalues_dense


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--sizes", default="5,10,20,35,60")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    backends = ["python"]
    try:
        kernels.backend_kernels("cython")
        backends.append("cython")
    except ImportError:
        print("compiled kernel not built; timing the fallback only")
    rng = np.random.default_rng(0)
    print(f"{'N':>4} {'2N':>5} " + " ".join(f"{b:>10}" for b in backends) + f" {'speedup':>8} {'max|diff|':>10}")
    for N in (int(v) for v in args.sizes.split(",")):
        a, b = (rng.standard_normal(2) @ [1, 1j]) * 0.4, (rng.standard_normal(2) @ [1, 1j]) * 0.4
        A = BlockToeplitzOperator.from_coefficients(a, b, N).assemble()
        times, eigs = {}, {}
        for name in backends:
            times[name] = best_time(lambda: eigenvalues_dense(A, backend=name), args.repeat)
            eigs[name] = np.sort_complex(eigenvalues_dense(A, backend=name).eigenvalues)
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        diff = np.abs(eigs["python"] - eigs[backends[-1]]).max()
        print(f"{N:>4} {2 * N:>5} " + " ".join(f"{times[b]:>9.4f}s" for b in backends) + f" {speed:>7.1f}x {diff:>10.1e}")


if __name__ == "__main__":
    main()
