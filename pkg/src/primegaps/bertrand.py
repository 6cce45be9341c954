"""Chains b(n+1) = largest prime below m*b(n), and the sieve built on them.

The step is exact in integers: largest prime <= (b*num - 1) // den.  Chains
seeded greedily at every prime not already swallowed by an earlier chain
reproduce, in seed order, the prime 2 followed by the non-last primes of the
interval census -- that equivalence is what verify_theorem1 checks.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .engine import Multiplier, PrimeTable, TWO
from .errors import ChainStallError, CoverageError


@dataclass(frozen=True)
class BertrandChain:
    seed: int
    m: Multiplier
    terms: tuple[int, ...]


def _step(plist: list[int], limit: int, b: int, m: Multiplier) -> int:
    """Largest prime strictly below m*b, or ChainStallError."""
    top = (b * m.num - 1) // m.den  # floor of the open upper bound
    if top > limit:
        raise CoverageError(
            f"chain reaches {top}, beyond table limit {limit}"
        )
    i = bisect_right(plist, top)
    nxt = plist[i - 1] if i else 0
    if nxt <= b:
        raise ChainStallError(f"no prime in ({b}, {b}*{m}) after term {b}")
    return nxt


def bertrand_chain(
    t: PrimeTable, seed: int, length: int, m: Multiplier = TWO
) -> BertrandChain:
    """The chain from `seed`, `length` terms total (seed included)."""
    seed = int(seed)
    if length < 1:
        raise ValueError("length must be >= 1")
    if not t.is_prime(seed):
        raise ValueError(f"seed {seed} is not prime")
    plist = t.primes.tolist()
    terms = [seed]
    while len(terms) < length:
        terms.append(_step(plist, t.limit, terms[-1], m))
    return BertrandChain(seed, m, tuple(terms))


def construct_chains(
    t: PrimeTable, count: int, m: Multiplier = TWO
) -> list[BertrandChain]:
    """Greedy sieve: scan primes ascending, seed a chain at each prime not
    already absorbed, keeping every live chain extended past the scan point.

    Chains may merge (e.g. for m=2 both 61 and 59 step to 113); a chain that
    lands on a value an earlier chain owns is recorded up to the merge point
    and retired, since both orbits coincide from there on.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    plist = t.primes.tolist()
    members: set[int] = set()
    chains: list[list[int]] = []
    # heap of (last_term, chain_id): pop chains whose frontier trails the scan
    frontier: list[tuple[int, int]] = []

    for q in plist:
        # advance every chain whose last term is below the candidate
        while frontier and frontier[0][0] < q:
            last, ci = heapq.heappop(frontier)
            nxt = _step(plist, t.limit, last, m)
            chains[ci].append(nxt)
            if nxt in members:
                # the successor map is a function, so hitting a value owned
                # by an earlier chain means the orbits coincide from here on;
                # retire this chain and let the earlier one carry the tail
                continue
            members.add(nxt)
            heapq.heappush(frontier, (nxt, ci))
        if q in members:
            continue
        if len(chains) == count:
            break
        chains.append([q])
        members.add(q)
        heapq.heappush(frontier, (q, len(chains) - 1))
    if len(chains) < count:
        raise CoverageError(
            f"table exhausted after {len(chains)} of {count} seeds"
        )
    return [BertrandChain(ch[0], m, tuple(ch)) for ch in chains]


def sieve_construct(t: PrimeTable, count: int, m: Multiplier = TWO) -> np.ndarray:
    """Seeds of the first `count` chains, ascending."""
    return np.array([c.seed for c in construct_chains(t, count, m)], dtype=np.int64)


@dataclass(frozen=True)
class Theorem1Result:
    ok: bool
    checked: int
    first_mismatch: tuple[int, int, int] | None  # (n, expected, got)


def verify_theorem1(t: PrimeTable, count: int) -> Theorem1Result:
    """Compare chain seeds with [2] + non-last census primes, m = 2."""
    from .classify import census, r_primes

    seeds = sieve_construct(t, count, TWO)
    top = int(seeds[-1])
    c_limit = min(t.limit, 2 * top)
    c = census(t, c_limit, TWO)
    r = r_primes(c)
    if r.size < count - 1:
        raise CoverageError(
            f"census to {c_limit} yields {r.size} non-last primes, "
            f"need {count - 1}"
        )
    expected = np.concatenate([[2], r[: count - 1]])
    if np.array_equal(expected, seeds):
        return Theorem1Result(True, count, None)
    bad = int(np.flatnonzero(expected != seeds)[0])
    return Theorem1Result(False, count, (bad + 1, int(expected[bad]), int(seeds[bad])))
