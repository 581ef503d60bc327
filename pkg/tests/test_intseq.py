import itertools

import pytest
from hypothesis import given, settings, strategies as st

from apdestroy.intseq import IntPerm, find_int_violation, int_ap_destroyer, transport, verify_int

import oracles


def test_k1():
    assert int_ap_destroyer(1).images == (0,)


def test_k3_candidate_and_exhaustive():
    assert verify_int(IntPerm((0, 2, 1)))
    valid = [p for p in itertools.permutations(range(3)) if not oracles.int_violations(p)]
    assert (0, 2, 1) in valid
    assert int_ap_destroyer(3).images in valid


def test_verify_int_examples():
    assert not verify_int(IntPerm((0, 1, 2)))
    assert find_int_violation((0, 1, 2)) == (0, 1, 2)
    assert verify_int(IntPerm((1, 0)))


@pytest.mark.parametrize("k", [64, 100, 257])
def test_larger_k(k):
    tau = int_ap_destroyer(k)
    assert tau.k == k and verify_int(tau)


def test_all_up_to_40_against_oracle():
    for k in range(1, 41):
        tau = int_ap_destroyer(k)
        assert sorted(tau.images) == list(range(k))
        assert oracles.int_violations(tau.images) == []


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(lambda k: st.permutations(list(range(k)))))
def test_violation_finder_matches_oracle(images):
    brute = oracles.int_violations(images)
    got = find_int_violation(images)
    assert (got is None) == (not brute)
    if got:
        assert got == brute[0]


def test_deterministic_without_cache():
    a = int_ap_destroyer(150)
    int_ap_destroyer.cache_clear()
    assert int_ap_destroyer(150) == a


def test_rejects_bad_k():
    with pytest.raises(ValueError):
        int_ap_destroyer(0)
    with pytest.raises(ValueError):
        IntPerm((0, 0))


def test_transport_examples():
    tau = IntPerm((0, 2, 1))
    assert transport(tau, 10, 5) == {10: 10, 15: 20, 20: 15}
    t7 = int_ap_destroyer(7)
    assert transport(t7, 0, 1) == dict(enumerate(t7.images))
    assert transport(IntPerm((0,)), 42, 3) == {42: 42}
    with pytest.raises(ValueError):
        transport(tau, 0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 64), st.integers(-1000, 1000), st.integers(1, 50))
def test_transport_preserves_destruction(k, start, step):
    mp = transport(int_ap_destroyer(k), start, step)
    pts = sorted(mp)
    img = set(mp.values())
    assert img == set(pts)
    for a in pts:
        for b in pts:
            c = 2 * b - a
            if a != b and c in mp:
                assert mp[a] + mp[c] != 2 * mp[b]
