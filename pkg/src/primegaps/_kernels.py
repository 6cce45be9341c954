"""Hot loops with two interchangeable implementations.

Every kernel here has a pure-numpy twin and (when numba is importable) an
``@njit`` twin.  Selection is by the ``PRIMEGAPS_BACKEND`` environment
variable: ``auto`` (default), ``numba``, or ``numpy``.  Both twins produce
bit-identical output; the test suite asserts this.
"""

from __future__ import annotations

import math
import os

import numpy as np

BACKEND_ENV = "PRIMEGAPS_BACKEND"
_VALID = ("auto", "numba", "numpy")

try:
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag instead
    HAS_NUMBA = False


def active_backend() -> str:
    """Resolve the backend name in effect for the current call."""
    req = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if req not in _VALID:
        raise ValueError(
            f"{BACKEND_ENV} must be one of {_VALID}, got {req!r}"
        )
    if req == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    if req == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    return req


def _odd_base_primes(limit: int) -> np.ndarray:
    """Odd primes up to isqrt(limit), by a small dense sieve."""
    r = math.isqrt(limit)
    flags = np.ones(r + 1, dtype=np.bool_)
    flags[:2] = False
    for p in range(2, math.isqrt(r) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    base = np.flatnonzero(flags).astype(np.int64)
    return base[base % 2 == 1]


def _sieve_odds_numpy(limit: int, segment_odds: int) -> np.ndarray:
    n_odds = (limit + 1) // 2  # index i holds value 2*i + 1
    out = np.ones(n_odds, dtype=np.bool_)
    base = _odd_base_primes(limit)
    for lo in range(0, n_odds, segment_odds):
        hi = min(lo + segment_odds, n_odds)
        vlo = 2 * lo + 1
        vhi = 2 * hi - 1
        for p in base:
            p = int(p)
            if p * p > vhi:
                break
            k = max(p, (vlo + p - 1) // p)
            if k % 2 == 0:
                k += 1
            out[(k * p - 1) // 2 : hi : p] = False
    out[0] = False  # value 1
    return out


if HAS_NUMBA:

    @njit(cache=True, parallel=True)
    def _sieve_odds_numba(n_odds, base, segment_odds):  # pragma: no cover
        out = np.full(n_odds, True)
        n_seg = (n_odds + segment_odds - 1) // segment_odds
        for s in prange(n_seg):
            lo = s * segment_odds
            hi = min(lo + segment_odds, n_odds)
            vlo = 2 * lo + 1
            vhi = 2 * hi - 1
            for bi in range(base.size):
                p = base[bi]
                if p * p > vhi:
                    break
                k = (vlo + p - 1) // p
                if k < p:
                    k = p
                if k % 2 == 0:
                    k += 1
                i = (k * p - 1) // 2
                while i < hi:
                    out[i] = False
                    i += p
        out[0] = False
        return out

    @njit(cache=True)
    def _deficit_extremes_numba(isp, num, den, max_level):  # pragma: no cover
        horizon = isp.size - 1
        first = np.full(max_level + 1, -1, np.int64)
        last = np.full(max_level + 1, -1, np.int64)
        c = 0
        prev_f = den // num  # floor at x = 1
        if max_level >= 0:
            first[0] = 1
            last[0] = 1
        for x in range(2, horizon + 1):
            if isp[x]:
                c += 1
            f = (x * den) // num
            if f != prev_f:  # den < num, so f advances by at most 1
                prev_f = f
                if isp[f]:
                    c -= 1
            if c <= max_level:
                last[c] = x
                if first[c] < 0:
                    first[c] = x
        return first, last


def _deficit_extremes_numpy(isp, num, den, max_level):
    horizon = isp.size - 1
    pi = np.cumsum(isp, dtype=np.int32)
    first = np.full(max_level + 1, -1, np.int64)
    last = np.full(max_level + 1, -1, np.int64)
    chunk = 1 << 21
    for lo in range(1, horizon + 1, chunk):
        hi = min(lo + chunk, horizon + 1)
        x = np.arange(lo, hi, dtype=np.int64)
        c = pi[x] - pi[(x * den) // num]
        sel = c <= max_level
        xs = x[sel]
        cs = c[sel]
        last[cs] = xs  # ascending duplicate writes: last one wins
        buf = np.full(max_level + 1, -1, np.int64)
        buf[cs[::-1]] = xs[::-1]
        merge = (first < 0) & (buf >= 0)
        first[merge] = buf[merge]
    return first, last


def sieve_odds(limit: int, segment_odds: int = 1 << 18) -> np.ndarray:
    """Primality flags over odd values: entry i covers the value 2*i + 1."""
    if active_backend() == "numba":
        base = _odd_base_primes(limit)
        return _sieve_odds_numba((limit + 1) // 2, base, segment_odds)
    return _sieve_odds_numpy(limit, segment_odds)


def deficit_extremes(isp: np.ndarray, num: int, den: int, max_level: int):
    """First and last x at each value of pi(x) - pi(floor(x*den/num)).

    ``isp`` is a primality array over 0..horizon.  Returns two int64 arrays
    indexed by the deficit level 0..max_level, holding the smallest and the
    largest x at which the walk sits at that level (-1 for levels never hit).
    The walk changes by at most 1 between consecutive x, which is what makes
    the extreme positions meaningful.
    """
    if num <= den:
        raise ValueError("multiplier must exceed 1")
    if active_backend() == "numba":
        return _deficit_extremes_numba(isp, num, den, max_level)
    return _deficit_extremes_numpy(isp, num, den, max_level)
