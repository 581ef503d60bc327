"""Block layouts and the block-reordering builder.

``0, ..., n-1`` sit clockwise on a circle, cut into ``m`` consecutive
blocks of size ``k = n // m`` or ``k + 1``.  The floor layout puts ``x`` in
block ``floor(m x / n)``.

``check_claims`` decides, for every AP ``(a, b, 2b - a)`` modulo ``n``,
whether the block-index offset ``beta(a) + beta(c) - 2 beta(b)`` (centered
mod ``m``) stays within radius 1 (claim 2) or 2 (claim 1).  Rather than
walking all ``n^2`` pairs it works per pair of blocks ``(i, j)`` holding
``a`` and ``b``: when block ``i`` has at least two elements, ``c`` sweeps
the full integer interval ``[2 start_j - end_i, 2 end_j - start_i]``, so
the reachable ``beta(c)`` values form a cyclic run of consecutive block
indices that can be counted exactly.  Layouts containing singleton blocks
fall back to direct enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .core import Perm, centered_array, perm_inverse
from .intseq import IntPerm, int_ap_destroyer
from .verify import check_almost


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class BlockLayout:
    n: int
    m: int
    sizes: tuple[int, ...]

    @property
    def k(self) -> int:
        return self.n // self.m

    @property
    def l(self) -> int:
        return self.n - self.k * self.m

    @property
    def starts(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.sizes)[:-1]]).astype(np.int64)

    @property
    def boundaries(self) -> list[tuple[int, int]]:
        """Half-open position intervals of the blocks."""
        st = self.starts.tolist()
        return [(s, s + z) for s, z in zip(st, self.sizes)]

    @property
    def beta(self) -> np.ndarray:
        return np.repeat(np.arange(self.m, dtype=np.int64), self.sizes)


def block_layout(n: int, m: int) -> BlockLayout:
    """The floor layout ``beta(x) = floor(m x / n)``."""
    if not 1 <= m <= n:
        raise PreconditionError(f"need 1 <= m <= n, got m={m}, n={n}")
    beta = (m * np.arange(n, dtype=np.int64)) // n
    sizes = np.bincount(beta, minlength=m)
    return BlockLayout(n, m, tuple(int(z) for z in sizes))


def layout_from_big(n: int, m: int, big: Sequence[int]) -> BlockLayout:
    """Layout whose blocks listed in ``big`` have size ``k + 1``."""
    k, l = divmod(n, m)
    if len(set(big)) != l:
        raise PreconditionError(f"exactly {l} blocks must have size k+1")
    sizes = [k + 1 if i in set(big) else k for i in range(m)]
    return BlockLayout(n, m, tuple(sizes))


def all_layouts(n: int, m: int):
    k, l = divmod(n, m)
    for big in combinations(range(m), l):
        yield layout_from_big(n, m, big)


def claim_radius(which: str) -> int:
    if which in ("claim-1", "1", 1):
        return 2
    if which in ("claim-2", "2", 2):
        return 1
    raise ValueError(f"unknown claim {which!r}")


def max_offset_bruteforce(layout: BlockLayout) -> int:
    """Largest |centered block offset| over all APs mod n, by direct enumeration."""
    n, m = layout.n, layout.m
    beta = layout.beta
    worst = 0
    rows = max(1, (1 << 20) // n)
    b = np.arange(n, dtype=np.int64)[None, :]
    for lo in range(0, n, rows):
        a = np.arange(lo, min(n, lo + rows), dtype=np.int64)[:, None]
        c = (2 * b - a) % n
        off = centered_array(beta[a] + beta[c] - 2 * beta[b], m)
        worst = max(worst, int(np.abs(off).max()))
    return worst


def offsets_within(layout: BlockLayout, radius: int) -> bool:
    """Exact decision: every AP mod n has block offset in [-radius, radius]."""
    n, m = layout.n, layout.m
    if 2 * radius + 1 >= m:
        return True
    sizes = np.asarray(layout.sizes, dtype=np.int64)
    if sizes.min() < 2:
        return max_offset_bruteforce(layout) <= radius
    beta = layout.beta
    st = layout.starts
    en = st + sizes - 1
    i = np.arange(m, dtype=np.int64)[:, None]  # block of a
    j = np.arange(m, dtype=np.int64)[None, :]  # block of b
    lo = 2 * st[j] - en[i]
    hi = 2 * en[j] - st[i]

    def starts_upto(x):
        return (x // n) * m + beta[x % n] + 1

    crossings = starts_upto(hi) - starts_upto(lo)
    cnt = np.minimum(crossings + 1, m)
    v_lo = beta[lo % n]
    x0 = (i + v_lo - 2 * j + radius) % m
    return bool(np.all(x0 + cnt - 1 <= 2 * radius))


def check_claims(n: int, m: int, which: str = "claim-2",
                 layout: Optional[BlockLayout] = None) -> bool:
    """Claim verdict for the floor layout (or a supplied ``layout``)."""
    radius = claim_radius(which)
    if radius == 2:
        k = n // m
        if k < m:
            raise PreconditionError(f"claim-1 needs k >= m (k={k}, m={m})")
    lay = layout if layout is not None else block_layout(n, m)
    if (lay.n, lay.m) != (n, m):
        raise ValueError("layout does not match (n, m)")
    return offsets_within(lay, radius)


def claim1_inequalities(k: int, m: int) -> bool:
    """The two worst-case inequalities behind claim 1, for all 0 <= i < m/2."""
    return all(
        (k + 1) * (2 * i - 2) < 2 * k * (i + 1) - 2 and 2 * (k + 1) * (i + 1) - 2 < k * (2 * i + 3)
        for i in range(0, (m + 1) // 2)
    )


# ---------------------------------------------------------------------------
# Builder

IntraFactory = Callable[[int], Sequence[int]]


def _default_intra(size: int) -> tuple[int, ...]:
    return int_ap_destroyer(size).images


def _intra_tables(sizes, intra: IntraFactory) -> dict[int, np.ndarray]:
    return {z: np.asarray(intra(z), dtype=np.int64) for z in sorted(set(sizes))}


def slot_starts(layout: BlockLayout, master: Perm) -> np.ndarray:
    """Start position of each slot once block ``master^-1(j)`` occupies slot ``j``."""
    inv = perm_inverse(master).images
    slot_sizes = np.asarray(layout.sizes, dtype=np.int64)[inv]
    return np.concatenate([[0], np.cumsum(slot_sizes)[:-1]]).astype(np.int64)


def build_with_layout(layout: BlockLayout, master: Perm, intra: IntraFactory = _default_intra,
                      intra_first: bool = False) -> Perm:
    """Reorder blocks by ``master`` and permute inside each block.

    ``intra_first`` applies the intra-block permutation before the move
    instead of after; the two orders give the same permutation.
    """
    n, m = layout.n, layout.m
    if master.n != m:
        raise PreconditionError(f"master has modulus {master.n}, layout has {m} blocks")
    sizes = np.asarray(layout.sizes, dtype=np.int64)
    beta = layout.beta
    st = layout.starts
    tables = _intra_tables(layout.sizes, intra)
    x = np.arange(n, dtype=np.int64)
    local = x - st[beta]
    moved_local = np.empty(n, dtype=np.int64)
    for z, tab in tables.items():
        sel = sizes[beta] == z
        moved_local[sel] = tab[local[sel]]
    slots = slot_starts(layout, master)
    if intra_first:
        # permute in place inside the original window, then carry the window
        inside = st[beta] + moved_local
        out = slots[master.images[beta[inside]]] + (inside - st[beta[inside]])
    else:
        carried = slots[master.images[beta]] + local
        out = carried - local + moved_local
    return Perm._trusted(out)


def build_destroyer(n: int, master: Perm, intra: IntraFactory = _default_intra,
                    check_master: bool = True) -> Perm:
    """AP-destroying permutation of Z_n from a (1,2)-almost-destroying master."""
    m = master.n
    if n < m * m:
        raise PreconditionError(f"need n >= m^2 = {m * m}, got n = {n}")
    if check_master:
        if 2 * 2 >= m:
            raise PreconditionError(f"master modulus {m} too small for (1,2)-almost checks")
        cert = check_almost(master, 1, 2)
        if not cert.verdict:
            raise PreconditionError(f"master is not (1,2)-almost AP-destroying: {cert.counterexample}")
    return build_with_layout(block_layout(n, m), master, intra)
