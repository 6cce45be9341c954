"""Random pseudo-prime model and the doubled-interval census over it.

Odd n >= 9 enters the sample independently with probability 2/ln n; 3, 5, 7
are always members.  The census then counts sample members strictly inside
(2*q_k, 2*q_{k+1}) for consecutive sample members, giving Monte Carlo
estimates of the probability that such an interval holds >= h members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CramerSample:
    limit: int
    seed: int
    members: np.ndarray  # ascending int64, starts 3, 5, 7


def simulate(limit: int, seed: int) -> CramerSample:
    """Draw one sample up to `limit` with a fixed PCG64 stream."""
    limit = int(limit)
    if limit < 9:
        raise ValueError("limit must be >= 9")
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    odds = np.arange(9, limit + 1, 2, dtype=np.int64)
    keep = rng.random(odds.size) < 2.0 / np.log(odds)
    members = np.concatenate([np.array([3, 5, 7], dtype=np.int64), odds[keep]])
    return CramerSample(limit, int(seed), members)


def interval_free_probability(a: int, b: int) -> float:
    """Exact model probability that (a, b) contains no sample member.

    Product of (1 - 2/ln n) over odd n in the open interval; requires a >= 8
    so every factor is a genuine Bernoulli miss.
    """
    a, b = int(a), int(b)
    if a < 8:
        raise ValueError("a must be >= 8 (3, 5, 7 are always members)")
    if b <= a:
        raise ValueError("need b > a")
    n = np.arange(a + 1 + (a % 2 == 1), b, 2, dtype=np.float64)
    if n.size == 0:
        return 1.0
    return float(np.exp(np.log1p(-2.0 / np.log(n)).sum()))


@dataclass(frozen=True)
class CensusEstimate:
    limit: int
    seed: int
    trials: int
    n_at_least: np.ndarray  # n_at_least[h] = intervals with >= h members

    @property
    def max_count(self) -> int:
        return len(self.n_at_least) - 2  # last entry is the always-0 sentinel

    def at_least(self, h: int) -> float:
        if h < 0:
            raise ValueError("h must be >= 0")
        if h >= len(self.n_at_least):
            return 0.0
        return self.n_at_least[h] / self.trials

    def exact(self, h: int) -> float:
        # integer-level identity: P(=h) = P(>=h) - P(>=h+1)
        if h < 0:
            raise ValueError("h must be >= 0")
        ge_h = self.n_at_least[h] if h < len(self.n_at_least) else 0
        ge_h1 = self.n_at_least[h + 1] if h + 1 < len(self.n_at_least) else 0
        return (ge_h - ge_h1) / self.trials

    def std_error(self, p: float) -> float:
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.trials)


def census_on_sample(s: CramerSample) -> CensusEstimate:
    """Count members in (2*q_k, 2*q_{k+1}) for every fully-covered interval."""
    q = s.members
    usable = int(np.searchsorted(q, s.limit // 2, "right"))
    if usable < 2:
        raise ValueError("limit too small: no fully covered doubled interval")
    lo = 2 * q[: usable - 1]
    hi = 2 * q[1:usable]
    counts = np.searchsorted(q, hi, "left") - np.searchsorted(q, lo, "right")
    trials = usable - 1
    hist = np.bincount(counts)
    n_ge = np.concatenate([np.cumsum(hist[::-1])[::-1], [0]]).astype(np.int64)
    return CensusEstimate(s.limit, s.seed, trials, n_ge)


def proposition1_deviation(est: CensusEstimate, h: int) -> tuple[float, float]:
    """Deviation of P(>=h) from P(>=1)**h, with a pooled standard error."""
    if h < 1:
        raise ValueError("h must be >= 1")
    p1 = est.at_least(1)
    ph = est.at_least(h)
    dev = ph - p1**h
    se = math.hypot(
        est.std_error(ph), h * p1 ** (h - 1) * est.std_error(p1)
    )
    return dev, se


def run_report(limit: int, seed: int, h_max: int = 5) -> dict:
    """One simulation + census, shaped for JSON export."""
    if h_max < 1:
        raise ValueError("h_max must be >= 1")
    s = simulate(limit, seed)
    est = census_on_sample(s)
    hs = range(1, h_max + 1)
    report = {
        "limit": limit,
        "seed": seed,
        "sample_size": int(s.members.size),
        "trials": est.trials,
        "estimates": {
            "at_least": {str(h): est.at_least(h) for h in hs},
            "exact": {str(h): est.exact(h) for h in hs},
        },
        "std_errors": {
            "at_least": {str(h): est.std_error(est.at_least(h)) for h in hs},
        },
        "product_rule": {},
    }
    for h in range(2, h_max + 1):
        dev, se = proposition1_deviation(est, h)
        report["product_rule"][str(h)] = {
            "predicted": est.at_least(1) ** h,
            "observed": est.at_least(h),
            "deviation": dev,
            "pooled_se": se,
        }
    return report
