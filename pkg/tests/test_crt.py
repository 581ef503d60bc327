import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apdestroy.catalog import derived_components, row_by_modulus
from apdestroy.core import Perm
from apdestroy.crt import CrtBasis, check_coverage, combine, compose_perms, split
from apdestroy.verify import Pattern, check_patterns

import oracles

B = CrtBasis((9, 11))


def test_split_examples():
    assert split(50, B) == (5, 6)
    assert split(98, B) == (8, 10)
    assert split(0, CrtBasis((4, 9, 25))) == (0, 0, 0)
    with pytest.raises(ValueError):
        split(99, B)


def test_combine_examples():
    assert combine((5, 6), B) == 50
    assert combine((0, 0), B) == 0
    # independent sweep for the second congruence pair
    assert combine((6, 5), B) == next(x for x in range(99) if x % 9 == 6 and x % 11 == 5) == 60
    with pytest.raises(ValueError):
        combine((9, 0), B)


def test_basis_validation():
    with pytest.raises(ValueError, match="share the factor 3"):
        CrtBasis((9, 12))
    with pytest.raises(ValueError):
        CrtBasis((1, 5))
    assert CrtBasis((9, 11, 16)).N == 1584


@pytest.mark.parametrize("moduli", [(9, 11), (4, 9, 25), (7, 8, 11, 13), (1000, 999)])
def test_round_trip_exhaustive(moduli):
    b = CrtBasis(moduli)
    assert b.N <= 10**6
    for x in range(b.N) if b.N <= 10**4 else range(0, b.N, 97):
        assert combine(split(x, b), b) == x
    for e, m in zip(b.idempotents, moduli):
        assert all((e % q) == (1 if q == m else 0) for q in moduli)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(9, 11), (4, 9, 25), (7, 8, 11, 13)]), st.data())
def test_compose_congruence(moduli, data):
    b = CrtBasis(moduli)
    comps = [Perm(data.draw(st.permutations(list(range(m))))) for m in moduli]
    q = compose_perms(comps, b)
    xs = data.draw(st.lists(st.integers(0, b.N - 1), min_size=1, max_size=20))
    for x in xs:
        for p, m in zip(comps, moduli):
            assert q(x) % m == p(x % m)


def test_compose_example_value():
    q = compose_perms([row_by_modulus(9).perm, row_by_modulus(11).perm], B)
    assert q(50) == 60


def test_compose_identities():
    b = CrtBasis((5, 7, 8))
    assert compose_perms([Perm.identity(m) for m in b.moduli], b).is_identity()


def test_compose_is_bijection():
    b = CrtBasis((16, 17, 19))
    q = compose_perms([row_by_modulus(m).perm for m in b.moduli], b)
    assert sorted(q.tolist()) == list(range(b.N))


def test_compose_modulus_mismatch():
    with pytest.raises(ValueError, match="component 1"):
        compose_perms([Perm.identity(9), Perm.identity(10)], B)


def test_z99_composite_union_patterns():
    q = compose_perms([row_by_modulus(9).perm, row_by_modulus(11).perm], B)
    pats = [Pattern(0, 0), Pattern(0, 2), Pattern(0, -2), Pattern(-1, -2), Pattern(-1, 2)]
    assert check_patterns(q, pats).verdict
    imgs = q.tolist()
    for p in pats:
        assert oracles.destroys(imgs, p.s, p.t)


def test_small_composite_three_factors():
    # rows 9, 11 and 16: union claims cover 0:+-2, -1:+-2, 1:1, -1:-1
    b = CrtBasis((9, 11, 16))
    q = compose_perms([row_by_modulus(m).perm for m in b.moduli], b)
    pats = [Pattern(0, 0), Pattern(0, 2), Pattern(0, -2), Pattern(-1, -2), Pattern(-1, 2),
            Pattern(1, 1), Pattern(-1, -1)]
    assert check_patterns(q, pats).verdict


def test_coverage_part_one():
    rep = check_coverage(derived_components(1), 1, 2)
    assert rep.passed, rep.reason


def test_coverage_parts_one_and_two():
    rep = check_coverage(derived_components(1) + derived_components(2), 2, 2)
    assert rep.passed, rep.reason


def test_coverage_gap():
    c = derived_components(1)[:2]
    rep = check_coverage(c, 1, 2)
    assert not rep.passed
    assert Pattern(1, 1) in rep.uncovered


def test_coverage_modulus_bound():
    p = row_by_modulus(9).perm
    rep = check_coverage([(p, [Pattern(0, 0)])], 0, 5)
    assert not rep.passed and "modulus 9" in rep.reason


def test_coverage_requires_zero_claim():
    p = row_by_modulus(16).perm
    rep = check_coverage([(p, [Pattern(1, 1), Pattern(-1, -1)])], 1, 1)
    assert not rep.passed and rep.uncovered == (Pattern(0, 0),)



def test_six_factor_master_congruence():
    comps = derived_components(1)
    basis = CrtBasis(tuple(c.modulus for c in comps))
    assert basis.N == 11767536
    q = compose_perms([c.perm for c in comps], basis)
    xs = np.random.default_rng(0).integers(0, basis.N, 10**6)
    img = q.images[xs]
    for c in comps:
        m = c.modulus
        assert np.array_equal(img % m, c.perm.images[xs % m])
    # bijection: the images hit every residue exactly once
    assert np.bincount(q.images, minlength=basis.N).max() == 1
