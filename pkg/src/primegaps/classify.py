"""Census of primes inside the open intervals (m*p_k, m*p_{k+1}).

Consecutive primes p_k scale to interval endpoints; every prime q up to the
census limit then lands before the first endpoint (initial), exactly on an
endpoint (boundary, only possible for rational m), or strictly inside one
interval, where its position pattern w.r.t. interval mates determines its
gap class.  All comparisons are exact integer arithmetic on q*den vs p*num.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .engine import Multiplier, PrimeTable, TWO
from .errors import CoverageError
from .special import SpecialPrimeSeq


class GapClass(enum.IntEnum):
    INITIAL = 0     # below the first endpoint
    ISOLATED = 1    # alone in its interval
    RIGHT_ONLY = 2  # has a mate after it, none before
    LEFT_ONLY = 3   # has a mate before it, none after
    CENTRAL = 4     # mates on both sides
    BOUNDARY = 5    # q*den == p*num exactly

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class IntervalRecord:
    k: int            # 1-based interval index
    lower_prime: int  # p_k   (interval is (m*p_k, m*p_{k+1}))
    upper_prime: int
    primes_inside: np.ndarray


@dataclass
class IntervalCensus:
    m: Multiplier
    limit: int
    table: PrimeTable
    edge_primes: np.ndarray       # p_1..p_{K+1}
    counts: np.ndarray            # per-interval contained prime counts, len K
    covered: np.ndarray           # primes strictly inside some interval
    covered_interval: np.ndarray  # 0-based interval index per covered prime
    classes: np.ndarray           # int8 GapClass code per covered prime
    initial: np.ndarray
    boundary: np.ndarray

    @property
    def intervals(self) -> int:
        return len(self.counts)

    @cached_property
    def histogram(self) -> np.ndarray:
        """histogram[i] = number of intervals containing exactly i primes."""
        return np.bincount(self.counts)

    @cached_property
    def class_counts(self) -> dict[GapClass, int]:
        out = {g: 0 for g in GapClass}
        codes, n = np.unique(self.classes, return_counts=True)
        for c, k in zip(codes, n):
            out[GapClass(int(c))] = int(k)
        out[GapClass.INITIAL] = len(self.initial)
        out[GapClass.BOUNDARY] = len(self.boundary)
        return out

    @cached_property
    def _starts(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.counts)])

    def interval(self, k: int) -> IntervalRecord:
        """1-based interval accessor."""
        if not 1 <= k <= self.intervals:
            raise ValueError(f"interval index {k} out of range 1..{self.intervals}")
        lo, hi = self._starts[k - 1], self._starts[k]
        return IntervalRecord(
            k,
            int(self.edge_primes[k - 1]),
            int(self.edge_primes[k]),
            self.covered[lo:hi],
        )


def census(t: PrimeTable, limit: int, m: Multiplier = TWO) -> IntervalCensus:
    """Classify every prime <= limit against the scaled-prime interval grid."""
    limit = int(limit)
    if limit > t.limit:
        raise CoverageError(f"census limit {limit} exceeds table limit {t.limit}")
    if limit * m.den < 3 * m.num:
        raise ValueError("limit too small: no complete interval below it")
    ps = t.primes
    n_below = int(np.searchsorted(ps, limit, "right"))
    ps = ps[:n_below]

    edges = ps * m.num  # endpoint k has exact value edges[k] / den
    n_edge = int(np.searchsorted(edges, limit * m.den, "right"))
    edges = edges[:n_edge]  # n_edge endpoints => n_edge - 1 intervals
    keys = ps * m.den

    j = np.searchsorted(edges, keys, "left")
    jj = np.minimum(j, n_edge - 1)
    on_edge = (j < n_edge) & (edges[jj] == keys)
    inside = (j >= 1) & (j <= n_edge - 1) & ~on_edge
    is_initial = (j == 0) & ~on_edge

    covered = ps[inside]
    civ = j[inside] - 1  # 0-based interval index, ascending
    chg = civ[1:] != civ[:-1]
    first = np.concatenate([[True], chg])
    last = np.concatenate([chg, [True]])

    classes = np.empty(len(covered), dtype=np.int8)
    classes[first & last] = GapClass.ISOLATED
    classes[first & ~last] = GapClass.RIGHT_ONLY
    classes[~first & last] = GapClass.LEFT_ONLY
    classes[~first & ~last] = GapClass.CENTRAL

    counts = np.bincount(civ, minlength=n_edge - 1)
    assert counts.sum() == len(covered)

    return IntervalCensus(
        m=m,
        limit=limit,
        table=t,
        edge_primes=ps[:n_edge],
        counts=counts,
        covered=covered,
        covered_interval=civ,
        classes=classes,
        initial=ps[is_initial],
        boundary=ps[on_edge],
    )


def classify_prime(c: IntervalCensus, p: int) -> GapClass:
    """Gap class of one prime, or ValueError if p is composite/uncovered."""
    p = int(p)
    i = np.searchsorted(c.covered, p)
    if i < len(c.covered) and c.covered[i] == p:
        return GapClass(int(c.classes[i]))
    if p in c.initial:
        return GapClass.INITIAL
    if p in c.boundary:
        return GapClass.BOUNDARY
    if p < 2 or not c.table.is_prime(p):
        raise ValueError(f"{p} is not prime")
    raise ValueError(f"prime {p} is outside the census coverage (limit {c.limit})")


def prop2_r_mask(t: PrimeTable, ps: np.ndarray) -> np.ndarray:
    """m=2 predicate: q is non-last in its interval iff the next prime q'
    lands in the same interval, i.e. no p with q < 2p < q'.  Checked as
    pi(floor(q/2)) == pi(floor(q'/2)); exact since 2p never hits a prime."""
    all_p = t.primes
    idx = np.searchsorted(all_p, ps)
    if idx.size and idx.max() + 1 >= all_p.size:
        raise CoverageError("next prime beyond table for prop2 check")
    nxt = all_p[idx + 1]
    return t.pi_bulk(ps // 2) == t.pi_bulk(nxt // 2)


def prop3_l_mask(t: PrimeTable, ps: np.ndarray) -> np.ndarray:
    """m=2 predicate for non-first: pi(floor(q/2)) == pi(floor(q_prev/2))."""
    all_p = t.primes
    idx = np.searchsorted(all_p, ps)
    if idx.size and idx.min() < 1:
        raise ValueError("predicate undefined for the first prime")
    prv = all_p[idx - 1]
    return t.pi_bulk(ps // 2) == t.pi_bulk(prv // 2)


def _crosscheck_m2(c: IntervalCensus, values: np.ndarray, side: str) -> None:
    # census-derived membership must agree with the direct pi()-predicate
    cov = c.covered
    if side == "r":
        all_p = c.table.primes
        idx = np.searchsorted(all_p, cov)
        ok = idx + 1 < all_p.size  # next prime must exist in the table
        mask = prop2_r_mask(c.table, cov[ok])
        mine = np.isin(cov[ok], values, assume_unique=True)
    else:
        mask = prop3_l_mask(c.table, cov)
        mine = np.isin(cov, values, assume_unique=True)
    if not np.array_equal(mask, mine):
        bad = np.flatnonzero(mask != mine)[0]
        raise AssertionError(
            f"census/{side}-predicate disagreement near prime index {bad}"
        )


def r_primes(c: IntervalCensus, crosscheck: bool = False) -> np.ndarray:
    """Primes that are not the last one inside their interval."""
    out = c.covered[(c.classes == GapClass.RIGHT_ONLY) | (c.classes == GapClass.CENTRAL)]
    if crosscheck and c.m == TWO:
        _crosscheck_m2(c, out, "r")
    return out


def l_primes(c: IntervalCensus, crosscheck: bool = False) -> np.ndarray:
    """Primes that are not the first one inside their interval."""
    out = c.covered[(c.classes == GapClass.LEFT_ONLY) | (c.classes == GapClass.CENTRAL)]
    if crosscheck and c.m == TWO:
        _crosscheck_m2(c, out, "l")
    return out


def r_star_primes(c: IntervalCensus) -> np.ndarray:
    """Lower endpoint generators p_k whose interval holds >= 2 primes."""
    return c.edge_primes[:-1][c.counts >= 2]


def pseudo_primes(c: IntervalCensus, s: SpecialPrimeSeq) -> np.ndarray:
    """Non-last (resp. non-first) primes that are missing from the sequence."""
    if s.m != c.m:
        raise ValueError(f"multiplier mismatch: census {c.m}, sequence {s.m}")
    if s.kind == "ramanujan":
        base = r_primes(c)
    elif s.kind == "labos":
        base = l_primes(c)
    else:
        raise ValueError(f"unknown sequence kind {s.kind!r}")
    if base.size == 0:
        return base
    if s.complete_through < int(base[-1]):
        raise ValueError(
            f"sequence complete only through {s.complete_through}, census "
            f"classifies primes up to {int(base[-1])}"
        )
    return np.setdiff1d(base, s.terms, assume_unique=True)


@dataclass(frozen=True)
class InterleaveResult:
    ok: bool
    pairs: int
    first_violation: tuple | None  # (kind, 1-based index, value_a, value_b)


def check_interleaving(c: IntervalCensus) -> InterleaveResult:
    """Verify r_n <= l_n <= r_{n+1} over the census range.

    The non-last and non-first lists pair up one-to-one per interval; primes
    below the first endpoint never enter either list.  Equality at the upper
    end is legitimate: a prime with mates on both sides sits in both lists.
    """
    r = r_primes(c)
    l = l_primes(c)
    if r.size != l.size:
        raise AssertionError("non-last and non-first counts differ")
    bad = np.flatnonzero(r > l)
    if bad.size:
        i = int(bad[0])
        return InterleaveResult(False, r.size, ("r<=l", i + 1, int(r[i]), int(l[i])))
    bad = np.flatnonzero(l[:-1] > r[1:])
    if bad.size:
        i = int(bad[0])
        return InterleaveResult(False, r.size, ("l<=r_next", i + 1, int(l[i]), int(r[i + 1])))
    return InterleaveResult(True, int(r.size), None)


def write_classification_csv(c: IntervalCensus, fobj) -> None:
    """Per-prime rows: prime, 1-based interval (0 for initial/boundary), class."""
    fobj.write("prime,interval,class\n")
    rows = [
        (int(p), 0, GapClass.INITIAL.label) for p in c.initial
    ] + [
        (int(p), 0, GapClass.BOUNDARY.label) for p in c.boundary
    ] + [
        (int(p), int(k) + 1, GapClass(int(g)).label)
        for p, k, g in zip(c.covered, c.covered_interval, c.classes)
    ]
    for p, k, lab in sorted(rows):
        fobj.write(f"{p},{k},{lab}\n")


def census_json_dict(c: IntervalCensus) -> dict:
    return {
        "m": str(c.m),
        "limit": c.limit,
        "intervals": c.intervals,
        "classified": int(len(c.covered)),
        "histogram": {str(i): int(v) for i, v in enumerate(c.histogram)},
        "class_counts": {g.label: n for g, n in c.class_counts.items()},
    }
