"""Compare the compiled and pure-Python Jacobi kernels.

    python3 benchmarks/bench_jacobi.py [--repeat 20]

For each unfolding shape, times ``linalg.left_singular`` (the path hosvd
uses) on every available backend, with ``numpy.linalg.svd`` (LAPACK) as a
reference. The ``svd`` column (default backend) adds completing ``Vh`` to a square unitary,
which dominates for wide matrices. Then times ``decide_lu`` on planted pairs
end to end. ``max dsigma`` is the largest singular-value disagreement with
LAPACK over the backends.
"""

import argparse
import time

import numpy as np

from lucanon import linalg
from lucanon.equivalence import decide_lu
from lucanon.rng import SeededStream, random_local_unitaries, random_state
from lucanon.tensor import multi_apply

SHAPES = [(2, 4), (3, 4), (4, 4), (2, 64), (4, 64), (8, 8), (8, 64), (16, 16), (16, 256)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_svd(repeat):
    backends = linalg.available_backends()
    header = (f"{'shape':>10}" + "".join(f"{b + ' ms':>14}" for b in backends)
              + f"{'svd ms':>10}{'lapack ms':>12}{'max dsigma':>12}")
    print(header)
    for shape in SHAPES:
        m = SeededStream(1).complex_normal(shape)
        row = f"{str(shape):>10}"
        sigmas = []
        for name in backends:
            prev = linalg.set_backend(name)
            try:
                row += f"{1e3 * best_of(lambda: linalg.left_singular(m), repeat):14.3f}"
                sigmas.append(linalg.left_singular(m)[1][: min(shape)])
            finally:
                linalg.set_backend(prev)
        row += f"{1e3 * best_of(lambda: linalg.svd(m), repeat):10.3f}"
        row += f"{1e3 * best_of(lambda: np.linalg.svd(m), repeat):12.3f}"
        ref = np.linalg.svd(m, compute_uv=False)
        row += f"{max(np.max(np.abs(s - ref)) for s in sigmas):12.1e}"
        print(row)


def bench_decide(pairs):
    print(f"\ndecide_lu on {pairs} planted pairs per dims")
    for dims in [(2, 2, 2), (3, 3, 3), (4, 4, 4)]:
        cases = []
        for k in range(pairs):
            a = random_state(dims, k)
            cases.append((a, multi_apply(a, random_local_unitaries(dims, k + 1))))
        for name in linalg.available_backends():
            prev = linalg.set_backend(name)
            try:
                t0 = time.perf_counter()
                for a, b in cases:
                    decide_lu(a, b)
                elapsed = time.perf_counter() - t0
            finally:
                linalg.set_backend(prev)
            print(f"  {str(dims):>10} {name:>9}: {1e3 * elapsed / pairs:8.3f} ms/pair")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--pairs", type=int, default=50)
    args = ap.parse_args()
    print(f"backends: {', '.join(linalg.available_backends())} (default {linalg.BACKEND})\n")
    bench_svd(args.repeat)
    bench_decide(args.pairs)


if __name__ == "__main__":
    main()
