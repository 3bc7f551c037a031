"""Compiled versus pure-Python F_p row reduction.

    python benchmarks/bench_kernels.py [--sizes 20 60 120] [--prime 32003] [--repeat 3]

The second table times an end-to-end workload (modular equivalence search and
F_p Hom dimensions) in fresh interpreters with and without LGSING_PURE_PYTHON.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from lgsing import kernels

WORKLOAD = """
from lgsing.mf import rank_one, hom_cohomology_dims, change_field, find_homotopy_equivalence
from lgsing.poly import Field
from lgsing import LGPair, RingCtx
F = RingCtx.make("F101", "x")
for n in range(2, 9):
    lg = LGPair.make(F, f"x^{n}")
    for a in range(1, n):
        E = rank_one(lg, f"x^{a}", f"x^{n - a}")
        hom_cohomology_dims(E, E)
        if min(a, n - a) <= 2:  # keeps the exhaustive search within its cap
            find_homotopy_equivalence(E, E)
"""


def random_matrix(rng, rows, cols, p):
    return [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]


def kernel_table(sizes, p, repeat):
    rng = random.Random(0)
    print(f"rref mod {p}, best of {repeat} (seconds)")
    print(f"{'size':>6} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for n in sizes:
        A = random_matrix(rng, n, n + 1, p)
        py = min(timeit.repeat(lambda: kernels.pure_rref_modp([r[:] for r in A], p, n + 1), number=1, repeat=repeat))
        if kernels.compiled_rref_modp is None:
            print(f"{n:>6} {py:>10.4f} {'-':>10} {'-':>8}")
            continue
        assert kernels.compiled_rref_modp([r[:] for r in A], p, n + 1) == kernels.pure_rref_modp([r[:] for r in A], p, n + 1)
        c = min(timeit.repeat(lambda: kernels.compiled_rref_modp([r[:] for r in A], p, n + 1), number=1, repeat=repeat))
        print(f"{n:>6} {py:>10.4f} {c:>10.4f} {py / c:>8.1f}")


def workload_table(repeat):
    print("\nend-to-end F_101 workload (seconds, best of %d)" % repeat)
    for label, env in (("python", {"LGSING_PURE_PYTHON": "1"}), ("default", {})):
        full = dict(os.environ, **env)
        code = f"import time; t = time.perf_counter()\n{WORKLOAD}\nprint(time.perf_counter() - t)"
        best = min(float(subprocess.run([sys.executable, "-c", code], env=full, capture_output=True,
                                        text=True, check=True).stdout) for _ in range(repeat))
        print(f"{label:>8} {best:>10.4f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 120])
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"backend: {kernels.BACKEND}\n")
    kernel_table(args.sizes, args.prime, args.repeat)
    workload_table(args.repeat)


if __name__ == "__main__":
    main()
