"""Chinese-remainder split/combine and componentwise composition.

``compose_perms`` builds ``pi_0 = sigma^-1 o (pi_1, ..., pi_k) o sigma``,
where ``sigma`` is the CRT isomorphism ``Z_N -> prod Z_{n_i}``.  Because
``pi_0(x) = pi_i(x mod n_i) (mod n_i)`` for every ``i``, the image offset
``pi_0(a) + pi_0(c) - 2 pi_0(b)`` reduces mod ``n_i`` to the factor's
offset, which is what ``check_coverage`` leans on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from operator import mul
from typing import Sequence

import numpy as np

from .core import Perm, mod_inv
from .verify import Pattern


class CoverageError(ValueError):
    pass


@dataclass(frozen=True)
class CrtBasis:
    moduli: tuple[int, ...]

    def __post_init__(self):
        mods = tuple(int(m) for m in self.moduli)
        object.__setattr__(self, "moduli", mods)
        if not mods:
            raise ValueError("empty basis")
        for m in mods:
            if m < 2:
                raise ValueError(f"modulus {m} < 2")
        for i, a in enumerate(mods):
            for b in mods[i + 1:]:
                g = math.gcd(a, b)
                if g != 1:
                    raise ValueError(f"moduli {a} and {b} share the factor {g}")

    @property
    def N(self) -> int:
        return reduce(mul, self.moduli, 1)

    @property
    def idempotents(self) -> tuple[int, ...]:
        """e_i with e_i = 1 mod n_i and e_i = 0 mod n_j (j != i)."""
        N = self.N
        return tuple((N // m) * mod_inv((N // m) % m, m) % N for m in self.moduli)


def split(x: int, basis: CrtBasis) -> tuple[int, ...]:
    if not 0 <= x < basis.N:
        raise ValueError(f"{x} not in [0, {basis.N})")
    return tuple(x % m for m in basis.moduli)


def combine(residues: Sequence[int], basis: CrtBasis) -> int:
    if len(residues) != len(basis.moduli):
        raise ValueError("residue count does not match basis")
    for r, m in zip(residues, basis.moduli):
        if not 0 <= r < m:
            raise ValueError(f"residue {r} not in [0, {m})")
    N = basis.N
    return sum(r * e for r, e in zip(residues, basis.idempotents)) % N


def compose_perms(components: Sequence[Perm], basis: CrtBasis, chunk: int = 1 << 21) -> Perm:
    if len(components) != len(basis.moduli):
        raise ValueError(f"{len(components)} components for {len(basis.moduli)} moduli")
    for i, (p, m) in enumerate(zip(components, basis.moduli)):
        if p.n != m:
            raise ValueError(f"component {i} has modulus {p.n}, basis expects {m}")
    N = basis.N
    idem = basis.idempotents
    # sum of r_i * e_i stays below len * max(n_i) * N; guard int64
    if len(idem) * max(basis.moduli) * N >= 2**62:
        raise OverflowError("composite too large for int64 accumulation")
    out = np.empty(N, dtype=np.int64)
    for lo in range(0, N, chunk):
        x = np.arange(lo, min(N, lo + chunk), dtype=np.int64)
        acc = np.zeros_like(x)
        for p, m, e in zip(components, basis.moduli, idem):
            acc += p.images[x % m] * e
        out[lo:lo + x.size] = acc % N
    return Perm._trusted(out)


@dataclass(frozen=True)
class CoverageReport:
    passed: bool
    uncovered: tuple[Pattern, ...] = ()
    reason: str = ""

    def as_dict(self) -> dict:
        return {"verdict": "pass" if self.passed else "fail",
                "uncovered": [[p.s, p.t] for p in self.uncovered],
                "reason": self.reason}


def check_coverage(components, S: int, T: int) -> CoverageReport:
    """Mechanical precondition check for the componentwise composition.

    ``components`` is a sequence of ``(perm, claims)`` pairs (or objects with
    ``perm`` and ``claims`` attributes).  Passes iff every component claims
    ``0 -> 0``, every nonzero ``(s, t)`` in the box is claimed by some
    component, and every modulus exceeds ``2 * max(S, T)``.
    """
    pairs = [(c.perm, c.claims) if hasattr(c, "perm") else c for c in components]
    bound = 2 * max(S, T)
    for perm, claims in pairs:
        n = perm.n
        if n <= bound:
            return CoverageReport(False, (), f"modulus {n} <= 2*max(S, T) = {bound}")
        red = {(c.s % n, c.t % n) for c in claims}
        if (0, 0) not in red:
            return CoverageReport(False, (Pattern(0, 0),), f"component of modulus {n} does not claim 0:0")
    uncovered = []
    for s in range(-S, S + 1):
        for t in range(-T, T + 1):
            if (s, t) == (0, 0):
                continue
            if not any((s % perm.n, t % perm.n) in {(c.s % perm.n, c.t % perm.n) for c in claims}
                       for perm, claims in pairs):
                uncovered.append(Pattern(s, t))
    if uncovered:
        return CoverageReport(False, tuple(uncovered), f"pattern {uncovered[0]} uncovered")
    return CoverageReport(True)
