"""Brute-force verdicts for pattern destruction.

A permutation ``pi`` of ``Z_n`` destroys the pattern ``s -> t`` when no
triple ``(a, b, c)``, not all equal, has ``a + c - 2b = s`` and
``pi(a) + pi(c) - 2 pi(b) = t`` modulo ``n``.  Every check enumerates all
``(a, b)`` pairs and sets ``c = 2b - a + s``, so the work is Theta(n^2) per
input offset.  Rows of ``a`` are processed in chunks; chunks may run on a
thread pool (numpy releases the GIL) without changing any result, because
the reported counterexample is always the lexicographically smallest
failing ``(a, b)``.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import Perm, centered, centered_array

# cells per chunk (rows * n); keeps temporaries around 100 MB
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True, order=True)
class Pattern:
    s: int
    t: int

    def reduced(self, n: int) -> "Pattern":
        return Pattern(centered(self.s, n), centered(self.t, n))

    def __str__(self) -> str:
        return f"{self.s}:{self.t}"

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        s, sep, t = text.strip().partition(":")
        if not sep:
            raise ValueError(f"pattern {text!r} is not of the form s:t")
        return cls(int(s), int(t))


def parse_patterns(text: str) -> list[Pattern]:
    """Parse ``"0:0,1:1,-1:2"``."""
    return [Pattern.parse(tok) for tok in text.split(",") if tok.strip()]


def almost_patterns(s: int, t: int) -> list[Pattern]:
    return [Pattern(a, b) for a in range(-s, s + 1) for b in range(-t, t + 1)]


@dataclass(frozen=True)
class Counterexample:
    a: int
    b: int
    c: int
    eta1: int
    eta2: int

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "eta1": self.eta1, "eta2": self.eta2}


@dataclass(frozen=True)
class Certificate:
    perm: Perm
    claims: tuple[Pattern, ...]
    verdict: bool
    counterexample: Optional[Counterexample] = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return self.verdict

    def as_dict(self) -> dict:
        doc = {
            "n": self.perm.n,
            "perm": self.perm.tolist(),
            "patterns": [[p.s, p.t] for p in self.claims],
            "verdict": "pass" if self.verdict else "fail",
            "counterexample": None if self.counterexample is None else self.counterexample.as_dict(),
        }
        doc.update(self.extra)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        doc = json.loads(text)
        perm = Perm(doc["perm"])
        if perm.n != doc["n"]:
            raise ValueError("certificate 'n' disagrees with 'perm' length")
        ce = doc.get("counterexample")
        known = {"n", "perm", "patterns", "verdict", "counterexample"}
        return cls(
            perm=perm,
            claims=tuple(Pattern(int(s), int(t)) for s, t in doc["patterns"]),
            verdict=doc["verdict"] == "pass",
            counterexample=None if ce is None else Counterexample(**{k: int(ce[k]) for k in ("a", "b", "c", "eta1", "eta2")}),
            extra={k: v for k, v in doc.items() if k not in known},
        )

    def recheck(self) -> bool:
        """Re-run verification and confirm it agrees with the stored verdict."""
        again = check_patterns(self.perm, self.claims)
        if again.verdict != self.verdict:
            return False
        if self.counterexample is not None:
            return witnesses(self.perm, self.counterexample)
        return True


def witnesses(p: Perm, ce: Counterexample) -> bool:
    """Whether ``ce`` really realizes the pattern ``eta1 -> eta2`` for ``p``."""
    n = p.n
    a, b, c = ce.a, ce.b, ce.c
    if a == b == c:
        return False
    return (a + c - 2 * b - ce.eta1) % n == 0 and (p(a) + p(c) - 2 * p(b) - ce.eta2) % n == 0


def _default_threads() -> int:
    return os.cpu_count() or 1


def _chunks(n: int) -> list[tuple[int, int]]:
    rows = max(1, _CHUNK_CELLS // max(n, 1))
    return [(lo, min(n, lo + rows)) for lo in range(0, n, rows)]


def _image_offsets(img: np.ndarray, s: int, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (offsets, trivial-mask) for rows a in [lo, hi), all b.

    offsets[a - lo, b] = pi(a) + pi(c) - 2 pi(b) mod n with c = 2b - a + s.
    """
    n = img.shape[0]
    a = np.arange(lo, hi, dtype=np.int64)[:, None]
    b = np.arange(n, dtype=np.int64)[None, :]
    c = (2 * b - a + s) % n
    off = (img[a] + img[c] - 2 * img[b]) % n
    trivial = (a == b) & (c == a)
    return off, trivial


def _map_chunks(fn, n: int, threads: Optional[int]):
    chunks = _chunks(n)
    threads = threads or 1
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, chunks))
    return [fn(ch) for ch in chunks]


def _first_violation(p: Perm, s: int, targets: Sequence[int], threads: Optional[int]):
    """Smallest (a, b) whose image offset lies in ``targets``; None if none."""
    n = p.n
    img = p.images
    tset = np.array(sorted({t % n for t in targets}), dtype=np.int64)

    def scan(chunk):
        lo, hi = chunk
        off, trivial = _image_offsets(img, s, lo, hi)
        bad = np.isin(off, tset) & ~trivial
        flat = np.flatnonzero(bad.ravel())
        if flat.size == 0:
            return None
        i = int(flat[0])
        return lo + i // n, i % n

    for res in _map_chunks(scan, n, threads):
        if res is not None:
            return res
    return None


def _make_cert(p: Perm, claims, hit) -> Certificate:
    if hit is None:
        return Certificate(p, tuple(claims), True, None)
    a, b, s = hit
    n = p.n
    c = (2 * b - a + s) % n
    eta2 = centered(p(a) + p(c) - 2 * p(b), n)
    return Certificate(p, tuple(claims), False, Counterexample(a, b, c, centered(s, n), eta2))


def check_pattern(p: Perm, pat: Pattern, threads: Optional[int] = None) -> Certificate:
    """Certificate for the single pattern ``pat``."""
    n = p.n
    s = pat.s % n
    hit = _first_violation(p, s, [pat.t], threads)
    return _make_cert(p, [pat], None if hit is None else (*hit, s))


def check_patterns(p: Perm, pats: Iterable[Pattern], threads: Optional[int] = None) -> Certificate:
    """Certificate for a set of patterns.

    Input offsets are grouped so each distinct ``s`` is enumerated once.  On
    failure the counterexample is the smallest ``(a, b)`` over all patterns,
    ties broken by the order of first appearance of ``s``.
    """
    pats = list(pats)
    n = p.n
    by_s: dict[int, list[int]] = {}
    for pat in pats:
        by_s.setdefault(pat.s % n, []).append(pat.t)
    best = None
    for s, ts in by_s.items():
        hit = _first_violation(p, s, ts, threads)
        if hit is not None and (best is None or hit < best[:2]):
            best = (*hit, s)
    return _make_cert(p, pats, best)


def check_almost(p: Perm, s: int, t: int, threads: Optional[int] = None) -> Certificate:
    """Certificate for destroying (s, t)-almost APs."""
    n = p.n
    if s < 0 or t < 0:
        raise ValueError("s and t must be non-negative")
    if 2 * s >= n or 2 * t >= n:
        raise ValueError(f"(s, t) = ({s}, {t}) needs 2s < n and 2t < n (n = {n})")
    return check_patterns(p, almost_patterns(s, t), threads)


def destroys(p: Perm, pat: Pattern, threads: Optional[int] = None) -> bool:
    return check_pattern(p, pat, threads).verdict


def count_survivors(p: Perm, pat: Pattern = Pattern(0, 0), threads: Optional[int] = None) -> int:
    """Number of ordered non-trivial triples realizing ``pat``."""
    n = p.n
    s = pat.s % n
    t = pat.t % n
    img = p.images

    def count(chunk):
        off, trivial = _image_offsets(img, s, *chunk)
        return int(np.count_nonzero((off == t) & ~trivial))

    return sum(_map_chunks(count, n, threads))


def destroyed_patterns(p: Perm, s_max: int, t_max: int) -> list[Pattern]:
    """All patterns in the box |s| <= s_max, |t| <= t_max that ``p`` destroys."""
    n = p.n
    img = p.images
    out = []
    for s in range(-s_max, s_max + 1):
        seen = np.zeros(n, dtype=bool)
        for lo, hi in _chunks(n):
            off, trivial = _image_offsets(img, s % n, lo, hi)
            seen[np.unique(off[~trivial])] = True
        out.extend(Pattern(s, t) for t in range(-t_max, t_max + 1) if not seen[t % n])
    return out


# ---------------------------------------------------------------------------
# Random-permutation statistic


class ShuffleRNG:
    """Fisher-Yates shuffles driven by PCG64 raw 64-bit outputs.

    Only ``random_raw`` is used, whose stream is fixed by the PCG64
    algorithm itself, so results do not depend on numpy's distribution
    code.  Bounded draws use rejection sampling (no modulo bias).
    """

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)

    def below(self, bound: int) -> int:
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            r = int(self._bits.random_raw())
            if r < limit:
                return r % bound

    def permutation(self, n: int) -> np.ndarray:
        arr = np.arange(n, dtype=np.int64)
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            arr[i], arr[j] = arr[j], arr[i]
        return arr


@dataclass(frozen=True)
class SurvivorStats:
    n: int
    trials: int
    mean: float
    variance: float
    seed: int

    def as_dict(self) -> dict:
        return {"n": self.n, "trials": self.trials, "mean": self.mean,
                "variance": self.variance, "seed": self.seed}


def survivor_stats(n: int, trials: int, seed: int) -> SurvivorStats:
    """Mean and (population) variance of the 0->0 survivor count."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = ShuffleRNG(seed)
    counts = np.empty(trials, dtype=np.float64)
    for i in range(trials):
        counts[i] = count_survivors(Perm._trusted(rng.permutation(n)))
    return SurvivorStats(n, trials, float(counts.mean()), float(counts.var()), seed)
