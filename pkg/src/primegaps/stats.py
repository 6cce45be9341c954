"""Limiting-probability solver and the empirical-vs-theoretical report.

Everything downstream of one number: the root in (0, 1) of
(1 - x) ln(1 - x) = -x^2 / m.  From it, closed forms give the model
probabilities of each gap class; the report compares them against the
shares measured by an interval census.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import GapClass, IntervalCensus, r_primes, l_primes, r_star_primes
from .engine import Multiplier
from .special import SpecialPrimeSeq


def _f(x: float, ratio: float) -> float:
    return (1.0 - x) * math.log1p(-x) + x * x / ratio


def _lambda_root(ratio: float, tol: float) -> tuple[float, float]:
    lo, hi = 1e-12, 1.0 - 1e-15
    if not (_f(lo, ratio) < 0.0 < _f(hi, ratio)):
        raise ValueError(f"root not bracketed for ratio {ratio}")
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if _f(mid, ratio) < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):  # Newton polish
        fp = -math.log1p(-x) - 1.0 + 2.0 * x / ratio
        if fp == 0.0:
            break
        x -= _f(x, ratio) / fp
        x = min(max(x, lo - 1e-9), hi + 1e-9)
    return x, abs(_f(x, ratio))


def solve_lambda(m: Multiplier, tol: float = 1e-12) -> float:
    """Root of (1-x)ln(1-x) + x^2/m = 0 in (0, 1), residual below tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    x, res = _lambda_root(m.ratio, tol)
    if res >= tol:
        raise RuntimeError(f"solver residual {res} not below {tol}")
    return x


@dataclass(frozen=True)
class ProbSet:
    """Limiting gap-class probabilities for one multiplier."""

    m: Multiplier
    lam: float          # limiting P(interval nonempty)
    p_s: float          # P(prime is non-last in its interval)
    p_right: float
    p_central: float
    p_isolated: float
    p_r_star: float     # P(interval holds >= 2 primes)
    residual: float

    def to_json_dict(self) -> dict:
        return {
            "m": str(self.m),
            "lambda": self.lam,
            "p_nonlast": self.p_s,
            "p_right_only": self.p_right,
            "p_central": self.p_central,
            "p_isolated": self.p_isolated,
            "p_two_or_more": self.p_r_star,
            "residual": self.residual,
        }


def theoretical_probabilities(m: Multiplier, tol: float = 1e-12) -> ProbSet:
    """Closed-form class probabilities derived from the lambda root."""
    lam, res = _lambda_root(m.ratio, tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if res >= tol:
        raise RuntimeError(f"solver residual {res} not below {tol}")
    r = m.ratio
    p_s = 1.0 - lam / r
    p_right = (1.0 + 1.0 / r) * lam - 1.0
    p_central = 2.0 - (1.0 + 2.0 / r) * lam
    p_isolated = 1.0 - lam
    p_r_star = p_s * lam
    # internal identities; both are algebraic consequences of the formulas
    assert abs(p_central + 2.0 * p_right + p_isolated - 1.0) < 1e-12
    assert abs((p_central + p_right) - p_s) < 1e-12
    # the defining relation links p_s and lam
    assert abs(p_s - (1.0 + (1.0 - lam) / lam * math.log1p(-lam))) < 10 * tol
    return ProbSet(m, lam, p_s, p_right, p_central, p_isolated, p_r_star, res)


@dataclass(frozen=True)
class DensityReport:
    m: Multiplier
    limit: int
    empirical: dict
    theoretical: ProbSet
    deviations: dict
    consistency: dict
    counts: dict
    extras: dict

    def to_json_dict(self) -> dict:
        return {
            "m": str(self.m),
            "limit": self.limit,
            "empirical": self.empirical,
            "theoretical": self.theoretical.to_json_dict(),
            "deviations": self.deviations,
            "consistency": self.consistency,
            "counts": self.counts,
            "extras": self.extras,
        }

    def write_csv(self, fobj) -> None:
        fobj.write("quantity,empirical,theoretical,abs_deviation\n")
        theo = {
            "A1": self.theoretical.lam,
            "R": self.theoretical.p_s,
            "L": self.theoretical.p_s,
            "central": self.theoretical.p_central,
            "right": self.theoretical.p_right,
            "left": self.theoretical.p_right,
            "isolated": self.theoretical.p_isolated,
            "r_star": self.theoretical.p_r_star,
        }
        for key, emp in self.empirical.items():
            if key in theo:
                fobj.write(f"{key},{emp!r},{theo[key]!r},{abs(emp - theo[key])!r}\n")
            else:
                fobj.write(f"{key},{emp!r},,\n")


def density_report(
    c: IntervalCensus,
    ramanujan: SpecialPrimeSeq,
    labos: SpecialPrimeSeq,
    probs: ProbSet,
) -> DensityReport:
    """Empirical class shares vs the limiting model, one census range."""
    if not (c.m == ramanujan.m == labos.m == probs.m):
        raise ValueError("census, sequences, and probabilities disagree on m")
    if ramanujan.kind != "ramanujan" or labos.kind != "labos":
        raise ValueError("sequence kinds are swapped or wrong")
    if c.covered.size == 0:
        raise ValueError("census classified no primes")
    top = int(c.covered[-1])
    if ramanujan.complete_through < top or labos.complete_through < top:
        raise ValueError(
            "special sequences do not cover the census range "
            f"(need {top})"
        )

    n_cls = c.covered.size
    cc = c.class_counts
    r = r_primes(c)
    l = l_primes(c)
    k = c.intervals
    nonempty = int((c.counts > 0).sum())

    ram_in = np.intersect1d(ramanujan.terms, r, assume_unique=True)
    lab_in = np.intersect1d(labos.terms, l, assume_unique=True)

    empirical = {
        "A1": nonempty / k,
        "R": r.size / n_cls,
        "L": l.size / n_cls,
        "central": cc[GapClass.CENTRAL] / n_cls,
        "right": cc[GapClass.RIGHT_ONLY] / n_cls,
        "left": cc[GapClass.LEFT_ONLY] / n_cls,
        "isolated": cc[GapClass.ISOLATED] / n_cls,
        "r_star": r_star_primes(c).size / k,
        "ramanujan_share": ram_in.size / r.size if r.size else 0.0,
    }
    theo_map = {
        "A1": probs.lam,
        "R": probs.p_s,
        "L": probs.p_s,
        "central": probs.p_central,
        "right": probs.p_right,
        "left": probs.p_right,
        "isolated": probs.p_isolated,
        "r_star": probs.p_r_star,
    }
    deviations = {key: abs(empirical[key] - theo_map[key]) for key in theo_map}
    # census-level identity: m * (1 - share of non-last) tracks A1
    ratio = c.m.ratio
    lhs = ratio * (1.0 - empirical["R"])
    consistency = {
        "identity_lhs": lhs,
        "identity_rhs": empirical["A1"],
        "abs_diff": abs(lhs - empirical["A1"]),
    }
    counts = {
        "intervals": k,
        "classified": int(n_cls),
        "initial": int(cc[GapClass.INITIAL]),
        "boundary": int(cc[GapClass.BOUNDARY]),
        "nonlast": int(r.size),
        "nonfirst": int(l.size),
    }
    extras = {
        "labos_share": lab_in.size / l.size if l.size else 0.0,
        "ramanujan_share_limit": (1.0 - 1.0 / ratio) / probs.p_s,
        "ramanujan_share_note": "slow convergence; comparison is indicative only",
    }
    return DensityReport(
        c.m, c.limit, empirical, probs, deviations, consistency, counts, extras
    )
