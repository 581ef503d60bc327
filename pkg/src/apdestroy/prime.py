"""Quadratic-residue permutations of Z_p for primes p = 3 (mod 8).

For such ``p`` pick the smallest ``xi`` with both ``xi`` and ``xi - 1``
non-residues, and send even representatives ``x`` to ``x^2`` and odd ones
to ``xi x^2``.  The resulting map is a bijection of Z_p destroying APs.
Solvability of the binary quadratic forms that arise is decided by the
Legendre symbol of their discriminant; no square roots are taken.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Perm, mod_inv


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_odd_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    _require_odd_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@dataclass(frozen=True)
class XiWitness:
    p: int
    xi: int


def find_xi(p: int) -> XiWitness:
    if p <= 3:
        raise ValueError("need p > 3")
    _require_odd_prime(p)
    for xi in range(2, p):
        if legendre(xi, p) == -1 and legendre(xi - 1, p) == -1:
            return XiWitness(p, xi)
    raise AssertionError(f"no xi for p={p}")  # excluded by counting residues


def prime_destroyer(p: int) -> Perm:
    _require_odd_prime(p)
    if p <= 3 or p % 8 != 3:
        raise ValueError(f"need a prime p > 3 with p = 3 (mod 8), got {p} (= {p % 8} mod 8)")
    xi = find_xi(p).xi
    x = np.arange(p, dtype=np.int64)
    sq = x * x % p
    return Perm(np.where(x % 2 == 0, sq, xi * sq % p))


def form_solvable(a: int, b: int, c: int, p: int) -> bool:
    """Whether a x^2 + b x y + c y^2 = 0 (mod p) has a solution other than (0, 0).

    The discriminant test is exact for every coefficient triple once p is
    odd (zero coefficients included), so only ``p`` is validated.
    """
    _require_odd_prime(p)
    return legendre(b * b - 4 * a * c, p) != -1


def form_solvable_bruteforce(a: int, b: int, c: int, p: int) -> bool:
    x = np.arange(p, dtype=np.int64)[:, None]
    y = np.arange(p, dtype=np.int64)[None, :]
    zero = (a * x * x + b * x * y + c * y * y) % p == 0
    zero[0, 0] = False
    return bool(zero.any())


def case_quantities(p: int, xi: int) -> dict[str, int]:
    """Residues whose non-residuosity rules out each mixed-parity case."""
    inv = lambda v: mod_inv(v % p, p)  # noqa: E731
    return {
        "-1/(2(xi-1))": (-1) * inv(2 * (xi - 1)) % p,
        "1/(xi-1)": inv(xi - 1),
        "xi/(2(xi-1))": xi * inv(2 * (xi - 1)) % p,
        "-xi/(xi-1)": (-xi) * inv(xi - 1) % p,
    }


def case_coefficients(xi: int) -> dict[str, tuple[int, int, int]]:
    """The binary forms (x^2, xy, y^2 coefficients) of the mixed-parity cases."""
    return {
        "E,E,O": (xi - 1, 4 * (xi - 1), 2 * (2 * xi - 1)),
        "E,O,E": (xi - 1, 2 * (xi - 1), xi - 2),
        "O,O,E": (xi - 1, 4 * (xi - 1), 2 * (xi - 2)),
        "O,E,O": (xi - 1, 2 * (xi - 1), 2 * xi - 1),
    }


def discriminant_checks(p: int) -> dict[str, bool]:
    """Every condition the correctness argument needs, evaluated for ``p``."""
    xi = find_xi(p).xi
    out = {
        "-1 non-residue": legendre(-1, p) == -1,
        "2 non-residue": legendre(2, p) == -1,
        "xi non-residue": legendre(xi, p) == -1,
        "xi-1 non-residue": legendre(xi - 1, p) == -1,
    }
    for name, q in case_quantities(p, xi).items():
        out[f"{name} non-residue"] = legendre(q, p) == -1
    for name, (a, b, c) in case_coefficients(xi).items():
        out[f"{name} coefficients nonzero"] = all(v % p for v in (a, b, c))
        # discriminant is a non-residue: only (0, 0) solves the form
        out[f"{name} form unsolvable"] = (a * b * c) % p != 0 and not form_solvable(a, b, c, p)
    return out


def primes_3_mod_8(lo: int, hi: int) -> list[int]:
    return [q for q in range(max(lo, 5), hi + 1) if q % 8 == 3 and is_prime(q)]
