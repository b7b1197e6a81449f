"""Time the numba kernels against the numpy fallback at experiment scale.

    python benchmarks/bench_kernels.py [--length 512] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from pulseshape import _kernels


def cases(L, rng):
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    # a 150-cell brick, as in the default sweep
    k, l = np.meshgrid(np.arange(10), np.arange(-7, 8), indexing="ij")
    ks, ls = k.ravel(), l.ravel() % L
    coeffs = rng.standard_normal(ks.size) + 1j * rng.standard_normal(ks.size)
    R = np.outer(x, x.conj())
    P = np.abs(rng.standard_normal((L, L)))
    a, b = 16, 16
    return {
        "shift_stack": lambda impl: impl.shift_stack(x, ks, ls),
        "apply_shifts": lambda impl: impl.apply_shifts(x, ks, ls, coeffs),
        "lattice_periodize": lambda impl: impl.lattice_periodize(R, a, b),
        "lattice_fold": lambda impl: impl.lattice_fold(P, a, b),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--length", type=int, default=512)
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(0)
    print(f"L={args.length}, best of {args.repeat} runs")
    print(f"{'kernel':<20}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, fn in cases(args.length, rng).items():
        ref = fn(_kernels.numpy_impl)
        np.testing.assert_allclose(fn(_kernels.numba_impl), ref, rtol=1e-10, atol=1e-10)  # also warms the JIT
        t = {}
        for label, impl in (("numpy", _kernels.numpy_impl), ("numba", _kernels.numba_impl)):
            t[label] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<20}{t['numpy']:>12.3f}{t['numba']:>12.3f}{t['numpy'] / t['numba']:>9.1f}x")


if __name__ == "__main__":
    main()
