"""Compare the compiled and pure-Python inner loops.

Run with ``python benchmarks/bench_kernels.py [--repeat R]``; prints one
line per kernel with the best-of-R time of each backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from dalat import _pykernels as py

try:
    from dalat import _ckernels as ck
except ImportError:
    ck = None

rng = np.random.default_rng(0)
COEFFS = rng.standard_normal((300, 4)) + 1j * rng.standard_normal((300, 4))
BASIS = rng.standard_normal(700) + 1j * rng.standard_normal(700)
VALUES = rng.standard_normal((40, 60, 2)) + 1j * rng.standard_normal((40, 60, 2))

CASES = {
    "basis_row_exact(6, -5, 200)": lambda m: m.basis_row_exact(6, -5, 200),
    "basis_row_float(8, 7, 400)": lambda m: m.basis_row_float(8, 7, 400),
    "ferrand_residual(40x60x2)": lambda m: m.ferrand_residual(VALUES),
    "shifted_sums(300x4, N=300)": lambda m: m.shifted_sums(COEFFS, BASIS, 300),
}


def best(fn, repeat: int) -> float:
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if ck is None:
        print("compiled extension not built; run `python setup.py build_ext --inplace`")
        return 1
    print(f"{'kernel':32s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    for name, case in CASES.items():
        tp = best(lambda: case(py), args.repeat)
        tc = best(lambda: case(ck), args.repeat)
        print(f"{name:32s} {tp * 1e3:10.3f}ms {tc * 1e3:10.3f}ms {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
