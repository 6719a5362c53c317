"""Compiled vs pure-Python eigen-kernels, with LAPACK as a reference.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from nilrange import _jacobi_py

try:
    from nilrange import _jacobi
except ImportError:
    _jacobi = None


def hermitian(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (X + X.conj().T) / 2


def cases(rng):
    thetas = 2 * np.pi * np.arange(2048) / 2048
    for n in (4, 8):
        H, K = hermitian(rng, n), hermitian(rng, n)
        stack = np.cos(thetas)[:, None, None] * H + np.sin(thetas)[:, None, None] * K
        yield f"pencil scan n={n} (2048 angles)", (
            lambda k, H=H, K=K: k.pencil_eigvalsh(H, K, thetas),
            lambda: np.linalg.eigvalsh(np.cos(thetas)[:, None, None] * H + np.sin(thetas)[:, None, None] * K),
        )
        yield f"eigh with vectors n={n} (256 matrices)", (
            lambda k, S=stack[:256]: k.eigh_batch(S),
            lambda S=stack[:256]: np.linalg.eigh(S),
        )


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'case':40s} {'compiled':>10s} {'python':>10s} {'lapack':>10s} {'speedup':>8s}")
    for name, (run, ref) in cases(rng):
        tp = best(lambda: run(_jacobi_py), args.repeat)
        tl = best(ref, args.repeat)
        if _jacobi is None:
            print(f"{name:40s} {'n/a':>10s} {tp * 1e3:9.2f}ms {tl * 1e3:9.2f}ms {'':>8s}")
            continue
        tc = best(lambda: run(_jacobi), args.repeat)
        print(f"{name:40s} {tc * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tl * 1e3:9.2f}ms {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
