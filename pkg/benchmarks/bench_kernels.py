"""Time the compiled kernels against the NumPy/LAPACK fallback on the resonant scenario.

Run from the repository root::

    python benchmarks/bench_kernels.py [--repeat N]

Both backends get identical inputs taken from the resonant geometry
(hbar = 0.15, default grid).  Each row reports the best of ``--repeat`` runs
and the largest difference between the two outputs.
"""

import argparse
import math
import timeit

import numpy as np

from tunnelcatch import DoubleWellSpec, Experiment, PhysicalWellSpec, SquareWellSpec, _kernels


def resonant_operator():
    spec = DoubleWellSpec(PhysicalWellSpec.harmonic_cap(1.5, 2.0), SquareWellSpec(3.0, 0.3, 1.5), 0.15)
    ex = Experiment(spec, level=2)
    w = ex.resonant_width
    return ex, ex.operator(w), ex.pair_splitting(w)[2]


def cases(ex, op, gap):
    diag, off = np.ascontiguousarray(op.diag), np.ascontiguousarray(op.off)
    i = int(np.searchsorted(_kernels.python.bisect_eigenvalues(diag, off, 0, 40), ex.E_l))
    psi0 = np.ascontiguousarray(ex.left_state.psi[1:-1], dtype=complex)
    steps = 400
    dt = 2 * math.pi * ex.spec.hbar / gap / steps
    split = op.grid.with_split(ex.barrier.c).split_index - 1
    rhs = np.random.default_rng(0).normal(size=diag.size)
    return {
        "bisect_eigenvalues (2 levels)": lambda k: k.bisect_eigenvalues(diag, off, i - 1, i + 1),
        "gt_factor + gt_solve": lambda k: k.gt_solve(tuple(k.gt_factor(off, diag - ex.E_l, off)), rhs),
        f"cn_propagate ({steps} steps)": lambda k: k.cn_propagate(
            diag, off, psi0, dt / (2 * ex.spec.hbar), ex.E_l, steps, 10, split, op.grid.h)[0],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; reinstall with Cython available")
    ex, op, gap = resonant_operator()
    print(f"grid nodes: {op.diag.size}")
    print(f"{'kernel':34s} {'cython [ms]':>12s} {'python [ms]':>12s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in cases(ex, op, gap).items():
        best = {}
        for label, kern in (("cython", _kernels.compiled), ("python", _kernels.python)):
            best[label] = min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat))
        diff = np.max(np.abs(np.asarray(fn(_kernels.compiled)) - np.asarray(fn(_kernels.python))))
        print(f"{name:34s} {1e3 * best['cython']:12.2f} {1e3 * best['python']:12.2f} "
              f"{best['python'] / best['cython']:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
