"""Embedded reference permutations and the constants built from them.

The fifteen base rows are found by computer search; each row records the
patterns it destroys in addition to ``0 -> 0``.  ``derived_components``
builds the two families of CRT factors used for the (1,2)- and
(2,2)-almost constructions and re-verifies every claim on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from operator import mul

from .core import Perm, perm_inverse
from .transform import scale_both, scale_output, transported
from .verify import Pattern, check_patterns

P = Pattern

# (index, modulus, images, claims other than 0->0)
_ROWS = [
    (1, 9, (0, 1, 8, 3, 2, 6, 4, 7, 5), [P(0, 2), P(-1, -2)]),
    (2, 11, (0, 1, 8, 10, 6, 9, 5, 7, 3, 2, 4), [P(0, -2), P(-1, 2)]),
    (3, 16, (0, 2, 5, 3, 15, 12, 1, 14, 10, 8, 11, 13, 4, 7, 6, 9), [P(1, 1), P(-1, -1)]),
    (4, 17, (0, 1, 3, 9, 11, 7, 4, 8, 15, 12, 16, 10, 14, 5, 2, 13, 6), [P(-1, 1), P(1, -1)]),
    (5, 19, (0, 2, 14, 4, 10, 17, 9, 13, 18, 3, 6, 15, 8, 12, 5, 1, 7, 11, 16),
     [P(1, 1), P(-1, 1)]),
    (6, 23, (0, 1, 4, 3, 21, 22, 2, 11, 12, 7, 8, 5, 10, 9, 6, 19, 16, 15, 20, 17, 18, 13, 14),
     [P(0, 1), P(1, 0), P(0, -1), P(-1, 0)]),
    (7, 25, (0, 2, 5, 1, 3, 9, 13, 20, 10, 15, 23, 4, 21, 17, 24, 7, 22, 18, 12, 16, 19, 8,
             14, 6, 11),
     [P(1, 1), P(-1, 1)]),
    (8, 29, (0, 2, 1, 3, 6, 5, 7, 4, 13, 12, 8, 10, 9, 24, 16, 14, 20, 18, 25, 23, 27, 26, 28,
             17, 15, 21, 11, 19, 22),
     [P(1, 1)]),
    (9, 31, (0, 2, 1, 3, 6, 5, 7, 4, 13, 12, 8, 10, 9, 11, 14, 20, 27, 23, 25, 24, 26, 29, 28,
             30, 16, 18, 17, 19, 22, 21, 15),
     [P(1, 1)]),
    (10, 37, (0, 2, 1, 3, 6, 5, 7, 4, 13, 12, 8, 10, 9, 11, 14, 18, 15, 17, 21, 24, 22, 32, 31,
              35, 30, 33, 19, 34, 36, 23, 20, 27, 25, 29, 26, 28, 16),
     [P(1, 1)]),
    (11, 41, (0, 2, 1, 3, 6, 5, 7, 4, 13, 12, 8, 10, 9, 11, 14, 18, 15, 17, 21, 23, 22, 25, 29,
              35, 38, 36, 31, 34, 40, 19, 37, 39, 16, 27, 26, 28, 32, 24, 33, 30, 20),
     [P(1, 1)]),
    (12, 43, (0, 2, 1, 3, 6, 5, 7, 4, 13, 12, 8, 10, 9, 11, 14, 18, 15, 17, 21, 23, 22, 19, 26,
              35, 41, 36, 39, 34, 16, 33, 40, 38, 37, 27, 24, 20, 28, 42, 25, 31, 29, 32, 30),
     [P(1, 1)]),
    (13, 47, (0, 2, 1, 3, 6, 5, 7, 4, 13, 12, 8, 10, 9, 11, 14, 18, 15, 17, 21, 23, 22, 19, 26,
              20, 31, 16, 29, 39, 41, 44, 37, 43, 24, 45, 38, 28, 46, 25, 33, 27, 34, 30, 40, 42,
              36, 32, 35),
     [P(1, 1)]),
    (14, 13, (0, 1, 4, 2, 7, 6, 12, 9, 11, 8, 3, 5, 10), [P(0, 1)]),
    (15, 49, (0, 1, 4, 2, 3, 6, 7, 12, 5, 8, 9, 15, 11, 13, 10, 16, 14, 21, 20, 22, 28, 17, 25,
              18, 19, 23, 24, 35, 38, 40, 37, 43, 44, 48, 45, 41, 42, 31, 47, 46, 26, 32, 36, 27,
              30, 29, 39, 34, 33),
     [P(0, 1)]),
]

PART_ONE_MODULI = (9, 11, 16, 17, 19, 23)
PART_TWO_MODULI = (25, 29, 31, 37, 41, 43, 47, 13, 49)


class ClaimError(AssertionError):
    """An embedded or derived claim failed brute-force verification."""


@dataclass(frozen=True)
class TableEntry:
    index: int
    modulus: int
    perm: Perm
    claims: tuple[Pattern, ...]  # always begins with 0 -> 0


@dataclass(frozen=True)
class Component:
    """A CRT factor together with the patterns it is certified to destroy."""

    name: str
    perm: Perm
    claims: tuple[Pattern, ...]

    @property
    def modulus(self) -> int:
        return self.perm.n


@dataclass(frozen=True)
class PaperConstants:
    sqrt_n0: int
    n0: int
    r: int


@lru_cache(maxsize=None)
def table_entries() -> tuple[TableEntry, ...]:
    return tuple(
        TableEntry(i, n, Perm(images), (P(0, 0), *claims))
        for i, n, images, claims in _ROWS
    )


def table_entry(index: int) -> TableEntry:
    return table_entries()[index - 1]


def row_by_modulus(n: int) -> TableEntry:
    for e in table_entries():
        if e.modulus == n:
            return e
    raise KeyError(n)


def verify_entry(entry: TableEntry) -> bool:
    return check_patterns(entry.perm, entry.claims).verdict


def _certified(name: str, perm: Perm, claims) -> Component:
    claims = tuple(claims)
    cert = check_patterns(perm, claims)
    if not cert.verdict:
        raise ClaimError(f"{name}: claim fails, counterexample {cert.counterexample}")
    return Component(name, perm, claims)


def _part_one() -> tuple[Component, ...]:
    out = []
    for e in table_entries()[:6]:
        if e.index == 5:
            # pi_5(x) = 2 pi^{-1}(x)
            perm = scale_output(perm_inverse(e.perm), 2)
            claims = transported(transported(e.claims, invert=True), 1, 2)
            out.append(_certified("pi5", perm, claims))
        else:
            out.append(_certified(f"pi{e.index}", e.perm, e.claims))
    return tuple(out)


# Part two: each factor is a row pushed through scale_both (rows destroying
# 1 -> 1) or through scale_output followed by inversion (rows destroying
# 0 -> 1).  (row index, s, t, invert after scaling)
_PART_TWO_RECIPES = [
    (7, 2, 1, False),    # 1->1, -1->1  =>  2->1, -2->1
    (8, 2, -1, False),   # 2->-1
    (9, 2, 2, False),    # 2->2
    (10, 2, -2, False),  # 2->-2
    (11, -2, -1, False),  # -2->-1
    (12, -2, 2, False),  # -2->2
    (13, -2, -2, False),  # -2->-2
    (14, 1, 2, True),    # 0->1 => 0->2 => inverse 2->0
    (15, 1, -2, True),   # 0->1 => 0->-2 => inverse -2->0
]


def _part_two() -> tuple[Component, ...]:
    out = []
    for idx, s, t, invert in _PART_TWO_RECIPES:
        e = table_entry(idx)
        perm = scale_both(e.perm, s, t)
        if invert:
            perm = perm_inverse(perm)
        claims = transported(e.claims, s, t, invert)
        out.append(_certified(f"pi{idx}", perm, claims))
    return tuple(out)


@lru_cache(maxsize=None)
def derived_components(part: int) -> tuple[Component, ...]:
    """CRT factors for the (1,2)-almost (part 1) or extra (2,2) (part 2) families."""
    if part == 1:
        return _part_one()
    if part == 2:
        return _part_two()
    raise ValueError("part must be 1 or 2")


def covered_patterns(components) -> set[tuple[int, int]]:
    return {(p.s, p.t) for comp in components for p in comp.claims}


def constants() -> PaperConstants:
    sqrt_n0 = reduce(mul, PART_ONE_MODULI)
    r = reduce(mul, (e.modulus for e in table_entries()))
    return PaperConstants(sqrt_n0=sqrt_n0, n0=sqrt_n0 * sqrt_n0, r=r)


def pairwise_coprime(moduli) -> bool:
    moduli = list(moduli)
    return all(math.gcd(a, b) == 1 for i, a in enumerate(moduli) for b in moduli[i + 1:])
