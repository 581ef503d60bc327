import random

import pytest
from hypothesis import given, settings, strategies as st

from apdestroy.prime import (case_coefficients, case_quantities, discriminant_checks, find_xi,
                             form_solvable, form_solvable_bruteforce, is_prime, legendre,
                             prime_destroyer, primes_3_mod_8)
from apdestroy.verify import Pattern, check_pattern

import oracles


def test_is_prime_against_trial_division():
    for n in range(-2, 5000):
        assert is_prime(n) == oracles.trial_division_prime(n)
    assert is_prime(2**31 - 1) and not is_prime(2**31 + 1)


def test_legendre_examples():
    assert legendre(2, 11) == -1
    for p in (3, 7, 101):
        assert legendre(1, p) == 1
        assert legendre(0, p) == 0
        assert legendre(p, p) == 0


def test_legendre_rejects_non_odd_primes():
    for p in (2, 9, 15, 1):
        with pytest.raises(ValueError):
            legendre(3, p)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 19, 23, 43, 97])
def test_legendre_against_residue_table(p):
    res = oracles.residue_set(p)
    for a in range(-p, 2 * p):
        want = 0 if a % p == 0 else (1 if a % p in res else -1)
        assert legendre(a, p) == want


def test_find_xi_examples():
    assert find_xi(11).xi == 7
    assert sorted(set(range(1, 11)) - oracles.residue_set(11)) == [2, 6, 7, 8, 10]
    for p in (5, 19):
        res = oracles.residue_set(p)
        want = next(x for x in range(2, p) if x not in res and (x - 1) not in res)
        assert find_xi(p).xi == want
    with pytest.raises(ValueError):
        find_xi(3)


def test_prime_destroyer_11():
    p = prime_destroyer(11)
    assert p.tolist() == [0, 7, 4, 8, 5, 10, 3, 2, 9, 6, 1]


def test_prime_destroyer_formula_19():
    p = prime_destroyer(19)
    xi = find_xi(19).xi
    assert p.tolist() == [x * x % 19 if x % 2 == 0 else xi * x * x % 19 for x in range(19)]
    assert check_pattern(p, Pattern(0, 0)).verdict


@pytest.mark.parametrize("p", [13, 7, 17, 3, 15, 2])
def test_prime_destroyer_preconditions(p):
    with pytest.raises(ValueError):
        prime_destroyer(p)


@pytest.mark.parametrize("p", primes_3_mod_8(5, 300))
def test_destroys_and_ap_equation(p):
    perm = prime_destroyer(p)
    assert check_pattern(perm, Pattern(0, 0)).verdict
    f = perm.tolist()
    # f(x) + f(x + 2y) = 2 f(x + y) has no solution with y != 0
    if p < 120:
        for x in range(p):
            for y in range(1, p):
                assert (f[x] + f[(x + 2 * y) % p] - 2 * f[(x + y) % p]) % p


def test_primes_3_mod_8_listing():
    got = primes_3_mod_8(4, 2003)
    want = [q for q in range(4, 2004) if q % 8 == 3 and oracles.trial_division_prime(q)]
    assert got == want
    assert got[:4] == [11, 19, 43, 59]
    assert len(got) == 77


def test_form_solvable_examples():
    assert form_solvable(1, 0, -1, 7)
    assert form_solvable_bruteforce(1, 0, -1, 7)
    assert not form_solvable(1, 1, 1, 5)
    assert not form_solvable_bruteforce(1, 1, 1, 5)
    assert form_solvable(1, 2, 1, 7)
    with pytest.raises(ValueError):
        form_solvable(1, 1, 1, 9)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_form_solvable_all_coefficients(p):
    # zero coefficients included
    for a in range(p):
        for b in range(p):
            for c in range(p):
                assert form_solvable(a, b, c, p) == form_solvable_bruteforce(a, b, c, p)


SMALL_PRIMES = [q for q in range(3, 102) if is_prime(q)]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(SMALL_PRIMES), st.data())
def test_form_solvable_oracle(p, data):
    a, b, c = (data.draw(st.integers(1, p - 1)) for _ in range(3))
    assert form_solvable(a, b, c, p) == form_solvable_bruteforce(a, b, c, p)


def test_form_solvable_oracle_seeded_sweep():
    rng = random.Random(2024)
    for _ in range(300):
        p = rng.choice(SMALL_PRIMES)
        a, b, c = (rng.randrange(1, p) for _ in range(3))
        assert form_solvable(a, b, c, p) == form_solvable_bruteforce(a, b, c, p)


@pytest.mark.parametrize("p", primes_3_mod_8(5, 500))
def test_discriminant_checks(p):
    checks = discriminant_checks(p)
    assert all(checks.values()), {k: v for k, v in checks.items() if not v}
    xi = find_xi(p).xi
    qs = case_quantities(p, xi)
    assert len(qs) == 4
    for v in qs.values():
        assert v not in oracles.residue_set(p) and v % p
    for a, b, c in case_coefficients(xi).values():
        if p < 200:
            assert not form_solvable_bruteforce(a, b, c, p)


def test_case_quantities_definition():
    p, xi = 11, 7
    q = case_quantities(p, xi)
    assert q["-1/(2(xi-1))"] * 2 * (xi - 1) % p == p - 1
    assert q["1/(xi-1)"] * (xi - 1) % p == 1
    assert q["xi/(2(xi-1))"] * 2 * (xi - 1) % p == xi
    assert q["-xi/(xi-1)"] * (xi - 1) % p == (-xi) % p
