import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primegaps import (
    CoverageError,
    GapClass,
    Multiplier,
    build_table,
    census,
    check_interleaving,
    classify_prime,
    l_primes,
    pseudo_primes,
    r_primes,
    r_star_primes,
    ramanujan_primes,
    ramanujan_primes_up_to,
    labos_primes_up_to,
)
from primegaps.classify import census_json_dict, write_classification_csv
from primegaps.engine import TWO


class TestCensusM2Limit100:
    """Hand-checkable census: doubled intervals up to 100."""

    @pytest.fixture(scope="class")
    @staticmethod
    def c(t_small):
        return census(t_small, 100)

    def test_partition(self, c):
        assert c.initial.tolist() == [2, 3]
        assert c.boundary.tolist() == []
        assert c.covered[0] == 5 and c.covered[-1] == 89  # 97 lies past the last endpoint
        assert c.intervals == 14
        assert c.counts.sum() == len(c.covered) == 22

    def test_histogram(self, c):
        assert c.histogram.tolist() == [0, 7, 6, 1]

    def test_classes(self, c):
        expect = {
            5: GapClass.ISOLATED, 7: GapClass.ISOLATED,
            11: GapClass.RIGHT_ONLY, 13: GapClass.LEFT_ONLY,
            17: GapClass.RIGHT_ONLY, 19: GapClass.LEFT_ONLY,
            23: GapClass.ISOLATED,
            29: GapClass.RIGHT_ONLY, 31: GapClass.LEFT_ONLY,
            37: GapClass.ISOLATED,
            41: GapClass.RIGHT_ONLY, 43: GapClass.LEFT_ONLY,
            47: GapClass.RIGHT_ONLY, 53: GapClass.LEFT_ONLY,
            59: GapClass.RIGHT_ONLY, 61: GapClass.LEFT_ONLY,
            67: GapClass.RIGHT_ONLY, 71: GapClass.CENTRAL, 73: GapClass.LEFT_ONLY,
            79: GapClass.ISOLATED, 83: GapClass.ISOLATED, 89: GapClass.ISOLATED,
        }
        for p, g in expect.items():
            assert classify_prime(c, p) == g, p
        assert classify_prime(c, 2) == GapClass.INITIAL

    def test_classify_errors(self, c):
        with pytest.raises(ValueError):
            classify_prime(c, 25)  # composite
        with pytest.raises(ValueError):
            classify_prime(c, 97)  # past the last complete interval

    def test_membership_lists(self, c):
        assert r_primes(c).tolist() == [11, 17, 29, 41, 47, 59, 67, 71]
        assert l_primes(c).tolist() == [13, 19, 31, 43, 53, 61, 71, 73]
        assert r_star_primes(c).tolist() == [5, 7, 13, 19, 23, 29, 31]

    def test_interval_accessor(self, c):
        rec = c.interval(11)
        assert (rec.lower_prime, rec.upper_prime) == (31, 37)
        assert rec.primes_inside.tolist() == [67, 71, 73]
        with pytest.raises(ValueError):
            c.interval(0)
        with pytest.raises(ValueError):
            c.interval(15)

    def test_interleaving_with_equality(self, c):
        # 71 is central, so it appears in both lists; the chain
        # ... l_7 = 71 = r_8 ... exercises the non-strict step
        res = check_interleaving(c)
        assert res.ok and res.first_violation is None
        assert res.pairs == 8

    def test_json_dict(self, c):
        d = census_json_dict(c)
        assert d["intervals"] == 14
        assert d["histogram"]["3"] == 1
        assert d["class_counts"]["central"] == 1
        assert d["class_counts"]["initial"] == 2

    def test_csv_rows(self, c):
        buf = io.StringIO()
        write_classification_csv(c, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "prime,interval,class"
        assert lines[1] == "2,0,initial"
        assert "71,11,central" in lines
        assert len(lines) == 1 + 2 + 22


class TestRationalMultipliers:
    def test_boundary_prime_m32(self, t_small):
        c = census(t_small, 100, Multiplier(3, 2))
        assert c.initial.tolist() == [2]
        assert c.boundary.tolist() == [3]  # 3 == (3/2) * 2 exactly
        assert classify_prime(c, 3) == GapClass.BOUNDARY

    def test_boundary_prime_m53(self, t_small):
        c = census(t_small, 100, Multiplier(5, 3))
        assert c.boundary.tolist() == [5]  # 5 == (5/3) * 3 exactly

    def test_integer_m_has_no_boundary(self, t_small):
        for m in (TWO, Multiplier(3)):
            assert census(t_small, 50_000, m).boundary.size == 0


def test_census_range_errors(t_small):
    with pytest.raises(CoverageError):
        census(t_small, 10**6)
    with pytest.raises(ValueError):
        census(t_small, 5)  # below m * p_2


def test_pseudo_sequences_m2(t_mid):
    c = census(t_mid, 700)
    r_seq = ramanujan_primes_up_to(t_mid, int(r_primes(c)[-1]))
    assert pseudo_primes(c, r_seq).tolist() == [109, 137, 191, 197, 283, 521, 617, 683]
    l_seq = labos_primes_up_to(t_mid, int(l_primes(c)[-1]))
    assert pseudo_primes(c, l_seq).tolist() == [131, 151, 229, 233, 311, 571, 643]


def test_pseudo_argument_errors(t_small):
    c = census(t_small, 700)
    with pytest.raises(ValueError):
        pseudo_primes(c, ramanujan_primes(t_small, 8, Multiplier(3)))  # m mismatch
    with pytest.raises(ValueError):
        pseudo_primes(c, ramanujan_primes(t_small, 5))  # covers too little


def test_pseudo_smallest_for_m3(t_mid):
    c = census(t_mid, 10_000, Multiplier(3))
    seq = ramanujan_primes_up_to(t_mid, int(r_primes(c)[-1]), Multiplier(3))
    ps = pseudo_primes(c, seq)
    assert ps[0] == 197
    assert ps[:5].tolist() == [197, 313, 401, 827, 1033]


def test_crosscheck_census_against_predicates(t_small):
    c = census(t_small, 50_000)
    # raises AssertionError inside if the class-derived and pi()-derived
    # memberships ever disagree
    r = r_primes(c, crosscheck=True)
    l = l_primes(c, crosscheck=True)
    assert r.size == l.size > 0


@settings(max_examples=12, deadline=None)
@given(
    limit=st.integers(50, 40_000),
    m=st.sampled_from([(2, 1), (3, 2), (3, 1), (5, 2), (5, 3)]),
)
def test_census_structural_invariants(t_small, limit, m):
    m = Multiplier(*m)
    c = census(t_small, limit, m)
    # every prime <= limit is initial, boundary, covered, or past the grid
    ps = t_small.primes
    n_total = int(np.searchsorted(ps, limit, "right"))
    past = n_total - len(c.covered) - len(c.initial) - len(c.boundary)
    assert past >= 0
    # the histogram and the class partition both tile the covered set
    assert int(c.histogram.sum()) == c.intervals
    assert int((c.histogram * np.arange(len(c.histogram))).sum()) == len(c.covered)
    cc = c.class_counts
    assert (
        cc[GapClass.ISOLATED] + cc[GapClass.RIGHT_ONLY]
        + cc[GapClass.LEFT_ONLY] + cc[GapClass.CENTRAL]
    ) == len(c.covered)
    assert cc[GapClass.RIGHT_ONLY] == cc[GapClass.LEFT_ONLY]
    assert r_star_primes(c).size == int(c.histogram[2:].sum())
    assert check_interleaving(c).ok
