"""Backend benchmark: numba kernels against their pure-numpy twins.

Run as ``python3 -m primegaps.bench [limit]``.  Reports best-of-3 wall
times for the sieve and the deficit scan, plus the all-numpy census and
model-census stages for scale.
"""

from __future__ import annotations

import sys
import time

import numpy as np

from . import _kernels, classify, cramer
from .engine import TWO, build_table


def _best_of(fn, reps=3):
    best = float("inf")
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(limit: int = 20_000_000) -> None:
    scan_h = limit // 4
    rows = []

    t_np, flags_np = _best_of(lambda: _kernels._sieve_odds_numpy(limit, 1 << 18))
    rows.append(("sieve", "numpy", t_np))
    if _kernels.HAS_NUMBA:
        base = _kernels._odd_base_primes(limit)
        fn = lambda: _kernels._sieve_odds_numba((limit + 1) // 2, base, 1 << 18)
        fn()  # compile outside the timed region
        t_nb, flags_nb = _best_of(fn)
        rows.append(("sieve", "numba", t_nb))
        assert np.array_equal(flags_np, flags_nb), "backend outputs differ"

    t = build_table(limit)
    isp = t.is_prime_array(scan_h)
    t_np, ext_np = _best_of(lambda: _kernels._deficit_extremes_numpy(isp, 2, 1, 1000))
    rows.append(("deficit-scan", "numpy", t_np))
    if _kernels.HAS_NUMBA:
        fn = lambda: _kernels._deficit_extremes_numba(isp, 2, 1, 1000)
        fn()
        t_nb, ext_nb = _best_of(fn)
        rows.append(("deficit-scan", "numba", t_nb))
        assert np.array_equal(ext_np[1], ext_nb[1]), "backend outputs differ"

    t_c, _ = _best_of(lambda: classify.census(t, limit // 2, TWO), reps=1)
    rows.append(("census", "numpy", t_c))
    t_m, _ = _best_of(
        lambda: cramer.census_on_sample(cramer.simulate(limit // 2, 1)), reps=1
    )
    rows.append(("model-census", "numpy", t_m))

    print(f"limit={limit}  numba={'yes' if _kernels.HAS_NUMBA else 'no'}")
    print(f"{'stage':<14}{'backend':<9}{'seconds':>9}")
    speed = {}
    for stage, backend, secs in rows:
        print(f"{stage:<14}{backend:<9}{secs:>9.3f}")
        speed.setdefault(stage, {})[backend] = secs
    for stage, d in speed.items():
        if "numba" in d and "numpy" in d and d["numba"] > 0:
            print(f"{stage}: numba speedup x{d['numpy'] / d['numba']:.2f}")


if __name__ == "__main__":
    run(int(sys.argv[1]) if len(sys.argv) > 1 else 20_000_000)
