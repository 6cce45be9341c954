"""Prime table engine: exact rational multipliers and a packed-bit prime store.

A ``PrimeTable`` keeps primality for all values up to ``limit`` as one bit
per odd number, plus per-byte popcounts and block-level running totals so
``prime_pi`` answers in O(block) without materializing the prime list.
The prime array itself is materialized lazily for the bulk vector work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CoverageError, MemoryCapError

DEFAULT_SEGMENT_ODDS = 1 << 18
_BLOCK_BYTES = 8192  # pi() scans at most one block of per-byte popcounts


@dataclass(frozen=True)
class Multiplier:
    """Exact rational interval multiplier m = num/den > 1, kept reduced."""

    num: int
    den: int = 1

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if den <= 0 or num <= 0:
            raise ValueError("multiplier parts must be positive")
        if num <= den:
            raise ValueError("multiplier must be greater than 1")
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    @classmethod
    def parse(cls, text: str) -> "Multiplier":
        """Parse '2' or '3/2' style strings."""
        s = str(text).strip()
        if "/" in s:
            a, _, b = s.partition("/")
            return cls(int(a), int(b))
        return cls(int(s))

    @property
    def ratio(self) -> float:
        return self.num / self.den

    def floor_div(self, x: int) -> int:
        """floor(x / m), exact in integers."""
        return (int(x) * self.den) // self.num

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


TWO = Multiplier(2, 1)


class PrimeTable:
    """Read-only primality oracle for 0..limit."""

    def __init__(self, limit: int, bits: np.ndarray):
        self.limit = int(limit)
        self._bits = bits  # uint8, bit j of byte w = value 2*(8w+j) + 1
        self._byte_pop = np.bitwise_count(bits)
        pad = (-self._byte_pop.size) % _BLOCK_BYTES
        blocks = np.concatenate(
            [self._byte_pop, np.zeros(pad, dtype=np.uint8)]
        ).reshape(-1, _BLOCK_BYTES)
        self._block_cum = np.concatenate(
            [[0], np.cumsum(blocks.sum(axis=1, dtype=np.int64))]
        )
        self._primes: np.ndarray | None = None

    # -- scalar queries ----------------------------------------------------

    def _check_range(self, x: int) -> int:
        x = int(x)
        if x < 0:
            raise ValueError(f"negative argument {x}")
        if x > self.limit:
            raise CoverageError(f"x={x} exceeds table limit {self.limit}")
        return x

    def prime_pi(self, x: int) -> int:
        """Count of primes <= x."""
        x = self._check_range(x)
        if x < 2:
            return 0
        j = (x - 1) >> 1  # index of largest odd value <= x
        w, r = j >> 3, j & 7
        b = w // _BLOCK_BYTES
        cnt = int(self._block_cum[b])
        cnt += int(self._byte_pop[b * _BLOCK_BYTES : w].sum())
        cnt += (int(self._bits[w]) & ((2 << r) - 1)).bit_count()
        return cnt + 1  # the prime 2

    def pi_scaled(self, x: int, m: Multiplier) -> int:
        """pi(floor(x / m)) without float rounding."""
        if int(x) < 0:
            raise ValueError(f"negative argument {x}")
        return self.prime_pi(m.floor_div(x))

    def is_prime(self, x: int) -> bool:
        x = self._check_range(x)
        if x == 2:
            return True
        if x < 2 or x % 2 == 0:
            return False
        j = (x - 1) >> 1
        return bool((self._bits[j >> 3] >> (j & 7)) & 1)

    def nth_prime(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        if n > self.count:
            raise CoverageError(
                f"table holds {self.count} primes, nth_prime({n}) not covered"
            )
        return int(self.primes[n - 1])

    # -- bulk views ---------------------------------------------------------

    @property
    def count(self) -> int:
        """pi(limit)."""
        return int(self._block_cum[-1]) + 1

    @property
    def primes(self) -> np.ndarray:
        """All primes <= limit as int64, materialized on first use."""
        if self._primes is None:
            odd_idx = np.flatnonzero(np.unpackbits(self._bits, bitorder="little"))
            self._primes = np.concatenate(
                [np.array([2], dtype=np.int64), 2 * odd_idx.astype(np.int64) + 1]
            )
        return self._primes

    def primes_in_open_interval(self, a: int, b: int) -> np.ndarray:
        """Primes p with a < p < b."""
        a, b = int(a), int(b)
        if a > b:
            raise ValueError(f"empty-order interval ({a}, {b})")
        if b > self.limit + 1:
            raise CoverageError(f"interval end {b} exceeds table limit {self.limit}")
        ps = self.primes
        return ps[np.searchsorted(ps, a, "right") : np.searchsorted(ps, b, "left")]

    def pi_bulk(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized prime_pi; xs must be within the table range."""
        xs = np.asarray(xs)
        if xs.size and int(xs.max()) > self.limit:
            raise CoverageError("pi_bulk argument exceeds table limit")
        return np.searchsorted(self.primes, xs, "right")

    def is_prime_array(self, upto: int) -> np.ndarray:
        """Dense bool array over 0..upto."""
        upto = self._check_range(upto)
        out = np.zeros(upto + 1, dtype=np.bool_)
        if upto >= 2:
            out[2] = True
        n_odd = (upto + 1) // 2  # odd values 1, 3, ..., <= upto
        flags = np.unpackbits(self._bits, count=n_odd, bitorder="little")
        out[1 : 2 * n_odd : 2] = flags.view(np.bool_)
        return out


def estimate_table_bytes(limit: int) -> int:
    """Rough peak working set for build_table + lazy prime materialization."""
    n_odds = (limit + 1) // 2
    primes_est = int(1.26 * limit / max(math.log(limit), 2.0)) + 64
    return n_odds + n_odds // 8 * 2 + primes_est * 8 + (1 << 16)


def build_table(
    limit: int,
    *,
    segment_odds: int = DEFAULT_SEGMENT_ODDS,
    memory_cap: int | None = None,
) -> PrimeTable:
    """Sieve 0..limit and return the packed table.

    ``memory_cap``, if given, refuses the build up-front when the estimated
    peak working set exceeds it (raises MemoryCapError).
    """
    limit = int(limit)
    if limit < 3:
        raise ValueError("limit must be >= 3")
    if segment_odds < 1 << 10:
        raise ValueError("segment_odds unreasonably small")
    if memory_cap is not None:
        est = estimate_table_bytes(limit)
        if est > memory_cap:
            raise MemoryCapError(est, memory_cap)
    flags = _kernels.sieve_odds(limit, segment_odds)
    bits = np.packbits(flags, bitorder="little")
    return PrimeTable(limit, bits)
