"""Time the compiled kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Kernel timings import both
implementations directly; end-to-end timings run each backend in a subprocess
so that ``CCPAIR_PURE_PYTHON`` takes effect at import.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ccpair import _kernels_py

try:
    from ccpair import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None

END_TO_END = """
import timeit
from ccpair import MatrixPair, VPair, lv_norm, kernels
from ccpair.anorm import dual_norm_numeric
pair = MatrixPair.parabola()
V = VPair([[2 ** -0.5, 0]], [[0, 1]])
n = {repeat}
t_lv = min(timeit.repeat(lambda: lv_norm(pair, V), number=1, repeat=n))
t_dual = min(timeit.repeat(lambda: dual_norm_numeric(pair, (0.3 + 0.1j, 1.0)), number=1, repeat=n))
print(kernels.BACKEND, t_lv, t_dual)
"""


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_cases(rng, size):
    X1 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    X2 = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    c1 = rng.normal(size=size) + 1j * rng.normal(size=size)
    c2 = rng.normal(size=size) + 1j * rng.normal(size=size)
    d1 = rng.normal(size=size // 4) + 1j * rng.normal(size=size // 4)
    d2 = rng.normal(size=size // 4) + 1j * rng.normal(size=size // 4)
    e1, e2 = c1[:256], c2[:256]
    return {
        "pencil_norms_2x2": lambda m: m.pencil_norms_2x2(X1, X2, c1, c2),
        "support_max": lambda m: m.support_max(e1, e2, d1, d2),
        "support_refine": lambda m: m.support_refine(0.4 + 0.2j, 1.0, np.eye(2), [[0, 1], [0, 0]], 0.8, 0.1, 0.05, 0.05),
    }


def run_end_to_end(repeat):
    rows = {}
    for pure in ("0", "1"):
        env = dict(os.environ, CCPAIR_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", END_TO_END.format(repeat=repeat)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        rows[out[0]] = (float(out[1]), float(out[2]))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=16384, help="batch length for the vectorized kernels")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>10}")
    for name, call in kernel_cases(rng, args.size).items():
        t_py = best_of(lambda: call(_kernels_py), args.repeat)
        if _kernels_cy is None:
            print(f"{name:<20}{1e3 * t_py:>12.3f}{'n/a':>13}{'':>10}")
            continue
        t_cy = best_of(lambda: call(_kernels_cy), args.repeat)
        print(f"{name:<20}{1e3 * t_py:>12.3f}{1e3 * t_cy:>13.3f}{t_py / t_cy:>9.1f}x")

    rows = run_end_to_end(args.repeat)
    print()
    print(f"{'end to end':<20}" + "".join(f"{b + ' [ms]':>13}" for b in rows))
    for i, label in enumerate(("lv_norm", "dual_norm_numeric")):
        print(f"{label:<20}" + "".join(f"{1e3 * rows[b][i]:>13.3f}" for b in rows))


if __name__ == "__main__":
    main()
