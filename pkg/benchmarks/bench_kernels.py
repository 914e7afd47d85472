"""Time the float kernels on both backends.

Usage: python benchmarks/bench_kernels.py [--n 20] [--boxes 20000] [--repeat 5]
Run with TAYLORSTAB_DISABLE_NUMBA=1 to time the numpy path only.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from taylorstab import _kernels as K


def _boxes(count: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    xlo = rng.uniform(-2.0, 2.0, count)
    ylo = rng.uniform(0.0, 2.0, count)
    w = rng.uniform(1e-6, 1e-2, count)
    return xlo, xlo + w, ylo, ylo + w


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--boxes", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    boxes = _boxes(args.boxes)
    backends = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])
    print(f"box_enclose: n={args.n}, boxes={args.boxes}, best of {args.repeat}")
    times = {}
    for b in backends:
        K.box_enclose(args.n, float(args.n), *boxes, backend=b)  # warm up / compile
        t = min(timeit.repeat(lambda: K.box_enclose(args.n, float(args.n), *boxes, backend=b),
                              number=1, repeat=args.repeat))
        times[b] = t
        print(f"  {b:6s} {t * 1e3:9.2f} ms")
    if len(times) == 2:
        print(f"  speedup {times['numpy'] / times['numba']:.1f}x")
        ref = K.box_enclose(args.n, float(args.n), *boxes, backend="numpy")
        got = K.box_enclose(args.n, float(args.n), *boxes, backend="numba")
        same = all(np.array_equal(a, c) for a, c in zip(ref, got))
        print(f"  bitwise identical: {same}")

    d = 4 * args.n
    coeffs = np.array([1.0 / np.prod(np.arange(1, k + 1, dtype=float)) for k in range(d + 1)])
    z0 = 1.5 * np.exp(2j * np.pi * (np.arange(d) + 0.25) / d)
    print(f"aberth: degree {d}, best of {args.repeat}")
    for b in backends:
        K.aberth(coeffs, z0, backend=b)
        t = min(timeit.repeat(lambda: K.aberth(coeffs, z0, backend=b), number=1, repeat=args.repeat))
        print(f"  {b:6s} {t * 1e3:9.2f} ms")

    xs = np.linspace(-2, 2, 1_000_000)
    t = min(timeit.repeat(lambda: K.g_values(args.n, 1.0, xs, xs), number=1, repeat=args.repeat))
    print(f"g_values: 1e6 points {t * 1e3:9.2f} ms (numpy)")


if __name__ == "__main__":
    main()
