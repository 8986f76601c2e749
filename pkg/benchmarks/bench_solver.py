"""Compare the numba and numpy retrograde kernels on a few fixed games.

    python3 benchmarks/bench_solver.py [--repeat 3] [--quick]

The numba column includes one warm-up call (JIT compile or cache load) that
is excluded from the timings. Both kernels must agree bit for bit; a
mismatch aborts with exit code 1.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from pursuit import generators as gen
from pursuit._accel import HAVE_NUMBA
from pursuit.game import GameConfig
from pursuit.solver import analyze

CASES = [
    ("petersen", gen.petersen, 2, 1),
    ("petersen", gen.petersen, 3, 1),
    ("torus 3x5", lambda: gen.toroidal_grid(3, 5), 3, 1),
    ("heawood", lambda: gen.projective_incidence(2), 3, 1),
    ("grid 4x4", lambda: gen.grid(4, 4), 2, 2),
    ("grid 5x5", lambda: gen.grid(5, 5), 3, 1),
    ("grid 6x6", lambda: gen.grid(6, 6), 3, 1),
]


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the two largest cases")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy kernel can be timed", file=sys.stderr)
    cases = CASES[:-2] if args.quick else CASES
    print(f"{'graph':<12} {'k':>2} {'speed':>5} {'states':>10} {'numpy s':>9} {'numba s':>9} {'ratio':>7}")
    for name, make, k, rs in cases:
        g = make()
        cfg = GameConfig(k, 1, rs)
        t_np, a_np = best_of(lambda: analyze(g, cfg, backend="numpy"), args.repeat)
        if HAVE_NUMBA:
            analyze(g, cfg, backend="numba")  # warm-up
            t_nb, a_nb = best_of(lambda: analyze(g, cfg, backend="numba"), args.repeat)
            if not np.array_equal(a_np.values, a_nb.values):
                print(f"kernels disagree on {name} k={k}", file=sys.stderr)
                return 1
            ratio = f"{t_np / t_nb:7.1f}"
            nb = f"{t_nb:9.3f}"
        else:
            nb, ratio = f"{'-':>9}", f"{'-':>7}"
        print(f"{name:<12} {k:>2} {rs:>5} {a_np.state_count:>10} {t_np:9.3f} {nb} {ratio}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
