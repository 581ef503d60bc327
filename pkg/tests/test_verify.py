import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apdestroy.catalog import row_by_modulus, table_entries
from apdestroy.core import Perm
from apdestroy.verify import (Certificate, Pattern, ShuffleRNG, almost_patterns, check_almost,
                              check_pattern, check_patterns, count_survivors, destroyed_patterns,
                              parse_patterns, survivor_stats, witnesses)

import oracles


def perms(max_n=12):
    return st.integers(1, max_n).flatmap(
        lambda n: st.permutations(list(range(n))).map(Perm))


def test_row_9_destroys_0_0():
    assert check_pattern(row_by_modulus(9).perm, Pattern(0, 0)).verdict


def test_identity_counterexample():
    cert = check_pattern(Perm.identity(5), Pattern(0, 0))
    assert not cert.verdict
    ce = cert.counterexample
    assert (ce.a, ce.b, ce.c) == (0, 1, 2)
    assert (ce.eta1, ce.eta2) == (0, 0)


def test_row_11_destroys_0_minus2():
    assert check_pattern(row_by_modulus(11).perm, Pattern(0, -2)).verdict


def test_check_almost_row_23():
    assert check_almost(row_by_modulus(23).perm, 0, 1).verdict


def test_check_almost_precondition():
    with pytest.raises(ValueError, match="2s < n"):
        check_almost(Perm.identity(5), 3, 0)


def test_check_almost_any_destroyer_at_zero():
    for e in table_entries():
        assert check_almost(e.perm, 0, 0).verdict


def test_count_survivors_examples():
    assert count_survivors(Perm.identity(5)) == 20
    assert count_survivors(row_by_modulus(9).perm) == 0
    assert count_survivors(Perm.identity(1)) == 0


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_identity_survivors_odd(n):
    assert count_survivors(Perm.identity(n)) == n * n - n


@settings(max_examples=150, deadline=None)
@given(perms(), st.integers(-3, 3), st.integers(-3, 3))
def test_matches_bruteforce(p, s, t):
    brute = oracles.survivors(p.tolist(), s, t)
    assert count_survivors(p, Pattern(s, t)) == len(brute)
    cert = check_pattern(p, Pattern(s, t))
    assert cert.verdict == (not brute)
    if brute:
        ce = cert.counterexample
        # lexicographically smallest (a, b)
        assert (ce.a, ce.b, ce.c) == brute[0]
        assert witnesses(p, ce)


@settings(max_examples=40, deadline=None)
@given(perms(10))
def test_pass_iff_zero_survivors(p):
    assert check_pattern(p, Pattern(0, 0)).verdict == (count_survivors(p) == 0)


def test_a_equals_c_is_nontrivial():
    # in Z_2 every triple has c = a; (0, 1, 0) is non-trivial
    cert = check_pattern(Perm.identity(2), Pattern(0, 0))
    assert not cert.verdict
    ce = cert.counterexample
    assert ce.a == ce.c != ce.b


def test_translation_invariance_exhaustive():
    rng = np.random.default_rng(5)
    for n in range(1, 31):
        p = Perm(rng.permutation(n))
        base = {(s, t): check_pattern(p, Pattern(s, t)).verdict for s in range(-2, 3) for t in range(-2, 3)}
        for u in range(n):
            v = (3 * u + 1) % n
            q = Perm((p.images[(np.arange(n) + u) % n] + v) % n)
            for (s, t), verdict in base.items():
                assert check_pattern(q, Pattern(s, t)).verdict == verdict


@settings(max_examples=30, deadline=None)
@given(perms(14))
def test_almost_monotone(p):
    n = p.n
    top = (n - 1) // 2
    verdicts = {(s, t): check_almost(p, s, t).verdict for s in range(min(top, 2) + 1)
                for t in range(min(top, 2) + 1)}
    for (s, t), v in verdicts.items():
        if v:
            for s2 in range(s + 1):
                for t2 in range(t + 1):
                    assert verdicts[(s2, t2)]


@settings(max_examples=30, deadline=None)
@given(perms(11))
def test_almost_equals_pattern_conjunction(p):
    s = t = min(1, (p.n - 1) // 2)
    assert check_almost(p, s, t).verdict == oracles.destroys_almost(p.tolist(), s, t)


def test_thread_count_does_not_change_result():
    p = Perm(np.random.default_rng(2).permutation(2100))
    pats = almost_patterns(1, 1)
    c1 = check_patterns(p, pats, threads=1)
    c4 = check_patterns(p, pats, threads=4)
    assert c1.as_dict() == c4.as_dict()
    assert count_survivors(p, threads=1) == count_survivors(p, threads=3)


def test_certificate_json_round_trip():
    cert = check_pattern(Perm.identity(5), Pattern(0, 0))
    doc = cert.as_dict()
    assert set(doc) == {"n", "perm", "patterns", "verdict", "counterexample"}
    assert doc["verdict"] == "fail"
    assert doc["counterexample"] == {"a": 0, "b": 1, "c": 2, "eta1": 0, "eta2": 0}
    again = Certificate.from_json(cert.to_json())
    assert again == cert and again.recheck()
    good = check_pattern(row_by_modulus(9).perm, Pattern(0, 2))
    assert Certificate.from_json(good.to_json()).recheck()


def test_pattern_parsing():
    assert parse_patterns("0:0,1:-2, -1:2") == [Pattern(0, 0), Pattern(1, -2), Pattern(-1, 2)]
    assert str(Pattern(-1, 2)) == "-1:2"
    with pytest.raises(ValueError):
        parse_patterns("0-0")
    assert len(almost_patterns(1, 2)) == 15


def test_destroyed_patterns_agrees_with_checks():
    p = row_by_modulus(23).perm
    got = set(destroyed_patterns(p, 2, 2))
    want = {Pattern(s, t) for s, t in itertools.product(range(-2, 3), repeat=2)
            if check_pattern(p, Pattern(s, t)).verdict}
    assert got == want


def test_shuffle_rng_uniform_and_deterministic():
    a = ShuffleRNG(11).permutation(100)
    b = ShuffleRNG(11).permutation(100)
    assert np.array_equal(a, b)
    assert sorted(a.tolist()) == list(range(100))
    counts = np.zeros((3, 3))
    rng = ShuffleRNG(0)
    for _ in range(3000):
        pp = rng.permutation(3)
        counts[np.arange(3), pp] += 1
    assert np.all(np.abs(counts - 1000) < 120)


def test_survivor_stats_examples():
    assert survivor_stats(1, 5, 3).mean == 0
    assert survivor_stats(100, 2, 7) == survivor_stats(100, 2, 7)
    s = survivor_stats(20, 50, 1)
    assert s.mean >= 0 and s.variance >= 0
    with pytest.raises(ValueError):
        survivor_stats(5, 0, 1)


def test_survivor_stats_against_manual_loop():
    rng = ShuffleRNG(4)
    counts = [len(oracles.survivors(rng.permutation(9).tolist())) for _ in range(20)]
    s = survivor_stats(9, 20, 4)
    assert s.mean == pytest.approx(np.mean(counts))
    assert s.variance == pytest.approx(np.var(counts))
