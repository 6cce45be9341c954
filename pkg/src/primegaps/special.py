"""Generators for the two special prime sequences tied to the deficit walk.

For a multiplier m, the deficit c(x) = pi(x) - pi(floor(x/m)) moves in steps
of at most one.  The n-th term of the first sequence is one past the *last*
x sitting at level n-1; the n-th term of the other is the *first* x at
level n.  Both are always prime.  Completeness of a returned prefix is
certified before anything is returned: for m = 2 through the proven index
bound term_n < p_{3n}, otherwise through a scan-margin heuristic that is
recorded on the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .engine import Multiplier, PrimeTable, TWO
from .errors import CoverageError, IncompleteResultError

CERT_INDEX_BOUND = "index-bound"
CERT_HEURISTIC = "heuristic-margin"

# heuristic: trust terms no deeper than this fraction of the scanned horizon
_MARGIN_NUM, _MARGIN_DEN = 5, 6


@dataclass(frozen=True)
class SpecialPrimeSeq:
    """A certified prefix of one of the two sequences."""

    kind: str             # "ramanujan" | "labos"
    m: Multiplier
    terms: np.ndarray     # int64; terms[n-1] is the n-th term
    verified_count: int
    horizon: int          # largest x the deficit walk was evaluated at
    certification: str = field(default=CERT_INDEX_BOUND)
    # every member of the sequence <= this value is present in terms
    complete_through: int = field(default=0)


def nth_prime_upper(k: int) -> int:
    """Classical upper bound p_k <= k (ln k + ln ln k) for k >= 6."""
    if k < 6:
        return 15
    lk = math.log(k)
    return int(k * (lk + math.log(lk))) + 1


def required_limit(count: int, m: Multiplier = TWO) -> int:
    """Table limit sufficient to generate and certify `count` terms."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if m == TWO:
        # R_n < p_{3n} makes p_{3n} a safe horizon
        return max(1000, nth_prime_upper(3 * count) + 64)
    # level n is reached near p_{r*n} with r = m/(m-1); double it so the
    # terms sit inside the certification margin with room for excursions
    r = m.num / (m.num - m.den)
    return max(1000, 2 * nth_prime_upper(math.ceil(r * count)) + 64)


def _extremes(t: PrimeTable, horizon: int, m: Multiplier, max_level: int):
    isp = t.is_prime_array(horizon)
    return _kernels.deficit_extremes(isp, m.num, m.den, max_level)


def _found_prefix(levels: np.ndarray) -> int:
    miss = np.flatnonzero(levels < 0)
    return int(miss[0]) if miss.size else levels.size


def _certified_count(t, horizon, m, r_terms: np.ndarray) -> tuple[int, str]:
    if m == TWO:
        return t.prime_pi(horizon) // 3, CERT_INDEX_BOUND
    safe = (_MARGIN_NUM * horizon) // _MARGIN_DEN
    return int(np.searchsorted(r_terms, safe, "right")), CERT_HEURISTIC


def _sequences(t: PrimeTable, count: int, m: Multiplier):
    if count < 1:
        raise ValueError("count must be >= 1")
    horizon = min(t.limit, required_limit(count, m))
    first, last = _extremes(t, horizon, m, count)
    n_r = _found_prefix(last[:count])
    r_terms = last[:n_r] + 1
    n_l = _found_prefix(first[1 : count + 1])
    l_terms = first[1 : n_l + 1].copy()
    certified, cert = _certified_count(t, horizon, m, r_terms)
    certified = min(certified, n_r, n_l)
    return r_terms, l_terms, horizon, certified, cert


def ramanujan_primes(t: PrimeTable, count: int, m: Multiplier = TWO) -> SpecialPrimeSeq:
    """First `count` terms via last-occurrence of deficit levels 0..count-1."""
    r_terms, _, horizon, certified, cert = _sequences(t, count, m)
    if certified < count:
        raise IncompleteResultError(certified, count, horizon, "ramanujan")
    return SpecialPrimeSeq(
        "ramanujan", m, r_terms[:count], count, horizon, cert,
        complete_through=int(r_terms[count - 1]),
    )


def labos_primes(t: PrimeTable, count: int, m: Multiplier = TWO) -> SpecialPrimeSeq:
    """First `count` terms via first-occurrence of deficit levels 1..count."""
    _, l_terms, horizon, certified, cert = _sequences(t, count, m)
    if certified < count:
        raise IncompleteResultError(certified, count, horizon, "labos")
    return SpecialPrimeSeq(
        "labos", m, l_terms[:count], count, horizon, cert,
        complete_through=int(l_terms[count - 1]),
    )


def _up_to(t: PrimeTable, x: int, m: Multiplier):
    x = int(x)
    if x < 2:
        raise ValueError("x must be >= 2")
    if m == TWO:
        want = max(1000, (7 * x) // 4 + 64)
    else:
        want = max(1000, 2 * x + 64)
    horizon = min(t.limit, want)
    max_level = t.prime_pi(horizon)
    first, last = _extremes(t, horizon, m, max_level)
    n_r = _found_prefix(last)
    r_all = last[:n_r] + 1
    return first, r_all, horizon


def ramanujan_primes_up_to(t: PrimeTable, x: int, m: Multiplier = TWO) -> SpecialPrimeSeq:
    """All terms <= x, or IncompleteResultError if that cannot be certified."""
    first, r_all, horizon = _up_to(t, x, m)
    n = int(np.searchsorted(r_all, x, "right"))
    certified, cert = _certified_count(t, horizon, m, r_all)
    if certified < n:
        raise IncompleteResultError(certified, n, horizon, "ramanujan")
    return SpecialPrimeSeq(
        "ramanujan", m, r_all[:n].copy(), n, horizon, cert, complete_through=x,
    )


def labos_primes_up_to(t: PrimeTable, x: int, m: Multiplier = TWO) -> SpecialPrimeSeq:
    first, r_all, horizon = _up_to(t, x, m)
    n_l = _found_prefix(first[1:])
    l_all = first[1 : n_l + 1]
    n = int(np.searchsorted(l_all, x, "right"))
    # L_n <= R_n term by term, so the R-side certification covers the L side
    certified, cert = _certified_count(t, horizon, m, r_all)
    if certified < n:
        raise IncompleteResultError(certified, n, horizon, "labos")
    return SpecialPrimeSeq(
        "labos", m, l_all[:n].copy(), n, horizon, cert, complete_through=x,
    )


def verify_sondow_laishram(s: SpecialPrimeSeq, t: PrimeTable) -> list[tuple[int, bool, bool]]:
    """Check p_{2n} < term_n (n > 1) and term_n < p_{3n} for every term.

    Only defined for the last-occurrence sequence at m = 2.  Returns one
    (n, lower_ok, upper_ok) triple per term.
    """
    if s.kind != "ramanujan" or s.m != TWO:
        raise ValueError("bounds apply to the m=2 last-occurrence sequence only")
    n_terms = len(s.terms)
    if 3 * n_terms > t.count:
        raise CoverageError(
            f"need p_{3 * n_terms} but table holds only {t.count} primes"
        )
    ps = t.primes
    idx = np.arange(1, n_terms + 1)
    lower = ps[2 * idx - 1] < s.terms  # p_{2n} < term_n
    lower[0] = True                    # n = 1 exempt (term_1 = 2 = p_2)
    upper = s.terms < ps[3 * idx - 1]  # term_n < p_{3n}
    return [(int(n), bool(lo), bool(up)) for n, lo, up in zip(idx, lower, upper)]


def write_csv(s: SpecialPrimeSeq, fobj) -> None:
    fobj.write("n,term\n")
    for n, v in enumerate(s.terms, 1):
        fobj.write(f"{n},{int(v)}\n")


def write_bfile(s: SpecialPrimeSeq, fobj) -> None:
    """OEIS b-file format: 'n a(n)' per line."""
    for n, v in enumerate(s.terms, 1):
        fobj.write(f"{n} {int(v)}\n")
