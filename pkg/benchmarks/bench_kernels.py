"""Time the compiled kernels against the numpy/pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]
"""
import argparse
import timeit

import numpy as np

from sdcert import kernels
from sdcert.graph import generate
from sdcert.laplacian import LaplacianOperator


def cases(quick):
    rr = generate("random_regular", 2000 if quick else 5000, 3, seed=1)
    grid = generate("grid2d", 40, 40) if quick else generate("grid2d", 70, 70)
    small = generate("random_regular", 300 if quick else 1000, 3, seed=2)
    dense = LaplacianOperator(generate("grid2d", 8, 10) if quick else generate("grid2d", 15, 16)).to_dense()
    x = np.random.default_rng(0).standard_normal(rr.n)
    inv = LaplacianOperator(rr).inv_sqrt_degree
    return [
        (f"bfs rr(n={rr.n})", lambda m: m.bfs(rr.indptr, rr.indices, 0)),
        (f"bfs grid(n={grid.n})", lambda m: m.bfs(grid.indptr, grid.indices, 0)),
        (f"eccentricities rr(n={small.n})", lambda m: m.eccentricities(small.indptr, small.indices, 1)),
        (f"laplacian_apply rr(n={rr.n})", lambda m: m.laplacian_apply(rr.indptr, rr.indices, inv, x)),
        (f"jacobi dense({dense.shape[0]}x{dense.shape[0]})", lambda m: m.jacobi(dense.copy(), 1e-12, 100, True)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args()
    try:
        cy = kernels.get_backend("cython")
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install --no-build-isolation -e .` first")
    py = kernels.get_backend("python")
    print(f"{'kernel':36s} {'cython (s)':>12s} {'python (s)':>12s} {'speedup':>9s}")
    for name, fn in cases(args.quick):
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        print(f"{name:36s} {t_cy:12.5f} {t_py:12.5f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
