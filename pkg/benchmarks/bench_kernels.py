"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 1024 4096 16384] [--repeat 5]

Both paths are called directly, so one process measures both; the JIT
compile happens in a warm-up call and is excluded.  A final end-to-end
``classify`` timing is taken in two subprocesses, one per value of
RULEDSLANT_PURE_NUMPY.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ruledslant import _kernels
from ruledslant.numkit import stencils


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_stencil(n, repeat):
    central, left, right, den = stencils(3)
    f = np.random.default_rng(0).standard_normal((n, 12))
    _kernels.stencil_numba(f, central, left, right, float(den))
    t_nb = best(lambda: _kernels.stencil_numba(f, central, left, right, float(den)), repeat)
    t_np = best(lambda: _kernels.stencil_numpy(f, central, left, right, float(den)), repeat)
    return t_nb, t_np


def bench_rk4(n, repeat):
    m = 2 * n - 1
    s = np.linspace(0.0, 2.0, m)
    k1, k2, ph = 2 + 0.3 * np.sin(s), 1 + 0.2 * np.cos(s), 0.1 * s
    y0 = np.r_[np.zeros(3), np.eye(3).ravel()]
    args = (k1, k2, np.cos(ph), np.sin(ph), y0, 2.0 / (n - 1))
    _kernels.rk4_numba(*args)
    return best(lambda: _kernels.rk4_numba(*args), repeat), best(lambda: _kernels.rk4_numpy(*args), repeat)


CLASSIFY = ("import time; from ruledslant.slant import classify; from ruledslant.workbench import builtin; "
            "classify(builtin('example-6-2', samples=256)); t = time.perf_counter(); "
            "classify(builtin('example-6-2', samples={n})); print(time.perf_counter() - t)")


def bench_classify(n):
    out = []
    for flag in ("0", "1"):
        env = dict(os.environ, RULEDSLANT_PURE_NUMPY=flag)
        res = subprocess.run([sys.executable, "-c", CLASSIFY.format(n=n)], env=env,
                             capture_output=True, text=True, check=True)
        out.append(float(res.stdout))
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 16384])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    print(f"{'kernel':<10}{'N':>8}{'numba ms':>12}{'numpy ms':>12}{'speed-up':>10}")
    for name, fn in (("stencil", bench_stencil), ("rk4", bench_rk4)):
        for n in args.sizes:
            t_nb, t_np = fn(n, args.repeat)
            print(f"{name:<10}{n:>8}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>9.1f}x")
    t_nb, t_np = bench_classify(1024)
    print(f"{'classify':<10}{1024:>8}{1e3 * t_nb:>12.1f}{1e3 * t_np:>12.1f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
