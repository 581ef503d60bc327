"""AP-destroying permutations of integer intervals.

An :class:`IntPerm` of length ``k`` permutes ``{0, ..., k-1}`` viewed as
ordinary integers: whenever ``a + c = 2b`` with ``a, b, c`` not all equal,
``tau(a) + tau(c) != 2 tau(b)``.  There is no wraparound.

``int_ap_destroyer`` finds one by backtracking.  Position ``i`` prefers
values close to ``frac(i * phi) * k`` (phi the golden ratio), which spreads
any arithmetic progression of positions across the value range; in
practice this finds a witness for every ``k`` up to a few thousand with at
most a handful of backtracks.  Correctness rests on ``verify_int`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import engine

_PHI_FRAC = 0.6180339887498949

# Measured: k = 2000 takes ~0.4 s; forbid table is k^2 int32, constraints ~k^2/4.
MAX_LENGTH = 4096


@dataclass(frozen=True)
class IntPerm:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("images are not a bijection of {0, ..., k-1}")
        object.__setattr__(self, "images", imgs)

    @property
    def k(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __len__(self) -> int:
        return len(self.images)


def _ap_arrays(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All integer APs a < b < c inside [0, k)."""
    x = np.arange(k, dtype=np.int64)[:, None]
    d = np.arange(1, max(k, 1), dtype=np.int64)[None, :]
    ok = x + 2 * d < k
    a = np.broadcast_to(x, ok.shape)[ok]
    step = np.broadcast_to(d, ok.shape)[ok]
    return a, a + step, a + 2 * step


def find_int_violation(images) -> Optional[tuple[int, int, int]]:
    """First AP (a, b, c), in (a, b) order, whose images are an AP."""
    img = np.asarray(images, dtype=np.int64)
    k = img.shape[0]
    if k < 3:
        return None
    a = np.arange(k, dtype=np.int64)[:, None]
    b = np.arange(k, dtype=np.int64)[None, :]
    c = 2 * b - a
    inside = (c >= 0) & (c < k) & (a != b)
    cc = np.where(inside, c, 0)
    bad = inside & (img[a] + img[cc] == 2 * img[b])
    hits = np.flatnonzero(bad.ravel())
    if hits.size == 0:
        return None
    i = int(hits[0])
    ai, bi = divmod(i, k)
    return ai, bi, 2 * bi - ai


def verify_int(p) -> bool:
    images = p.images if isinstance(p, IntPerm) else p
    return find_int_violation(images) is None


def _value_order(k: int) -> np.ndarray:
    target = (np.arange(k) * _PHI_FRAC * k) % k
    return np.argsort(np.abs(np.arange(k)[None, :] - target[:, None]), axis=1, kind="stable")


@lru_cache(maxsize=None)
def int_ap_destroyer(k: int) -> IntPerm:
    """Deterministic, verified integer-AP-destroying permutation of length ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > MAX_LENGTH:
        raise ValueError(f"k = {k} exceeds the supported length {MAX_LENGTH}")
    a, b, c = _ap_arrays(k)
    prob = engine.Problem.from_triples(k, 0, a, b, c, np.zeros(a.size, np.int64))
    adj = prob.adjacency()
    # static golden order first, then MRV fallbacks with growing budgets
    attempts = [(_value_order(k), False, 50 * k), (_value_order(k), True, None)]
    for order, mrv, limit in attempts:
        res = engine.solve(prob, order, mrv=mrv, node_limit=limit, adjacency=adj)
        if res.status == engine.FOUND:
            tau = IntPerm(res.solution.tolist())
            if not verify_int(tau):
                raise AssertionError(f"search returned a non-destroying permutation for k={k}")
            return tau
    raise RuntimeError(f"no integer AP destroyer found for k={k}")


def transport(p: IntPerm, start: int, step: int) -> dict[int, int]:
    """Move the element at index ``i`` of ``start, start+step, ...`` to index ``p(i)``."""
    if step < 1:
        raise ValueError("step must be positive")
    return {start + i * step: start + p(i) * step for i in range(p.k)}
