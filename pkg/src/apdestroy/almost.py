"""Machinery for (t, t)-almost AP-destroying permutations.

* ``product_perm``: the product ``chi(r x + y) = r chi_m(x) + chi_r(y)``.
* ``restrict_at_fixed_point``: drop a fixed point at ``N - 1`` to get a
  permutation of ``Z_{N-1}``.
* ``coprime_ap_terms``: greedy pairwise-coprime terms of an AP.
* ``build_almost``: the four-stage rearrangement.

The four stages of ``build_almost`` act on the string ``0, ..., n-1``:

1. Cut into ``M`` floor-layout blocks, group consecutive blocks into
   superblocks of ``w = t+1`` (or ``t+2``, the last few) blocks, and deal
   the numbers of each superblock so the block of rank ``r`` (stable,
   size-descending) holds ``P + r, P + r + w, P + r + 2w, ...``.
2. Move block ``j`` (with its contents) to slot ``master(j)``.
3. Permute each slot's contents with an integer AP destroyer of its length.
4. Regroup slots exactly as in stage 1 and deal each slot's contents, in
   order, onto the positions of its superblock congruent to its rank mod
   ``w``.

``StageTrace`` records the block index of every number after each stage.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numba
import numpy as np

from .blocks import PreconditionError, block_layout
from .core import Perm, centered_array, perm_inverse
from .intseq import int_ap_destroyer
from .verify import check_almost


def product_perm(chi_m: Perm, chi_r: Perm) -> Perm:
    m, r = chi_m.n, chi_r.n
    if m <= 2:
        raise PreconditionError(f"outer factor needs m > 2, got m = {m}")
    out = (r * chi_m.images)[:, None] + chi_r.images[None, :]
    return Perm._trusted(out.ravel())


def restrict_at_fixed_point(p: Perm, check: bool = True) -> Perm:
    """Restriction of ``p`` to ``{0, ..., N-2}``, a permutation of Z_{N-1}.

    With ``check``, ``p`` must destroy (2,2)-almost APs whenever that is
    meaningful (``N > 4``); the result then destroys (1,1)-almost APs.
    """
    N = p.n
    if N < 2:
        raise PreconditionError("need N >= 2")
    if p(N - 1) != N - 1:
        raise PreconditionError(f"{N - 1} is not a fixed point (maps to {p(N - 1)})")
    if check and N > 4:
        cert = check_almost(p, 2, 2)
        if not cert.verdict:
            raise PreconditionError(f"input is not (2,2)-almost AP-destroying: {cert.counterexample}")
    return Perm._trusted(p.images[:-1].copy())


def coprime_ap_terms(first: int, diff: int, count: int) -> list[int]:
    if first < 2:
        raise ValueError("first term must be >= 2")
    if math.gcd(first, diff) != 1:
        raise ValueError(f"gcd(first, diff) = {math.gcd(first, diff)} != 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    terms = [first]
    prod = first
    j = 1
    while len(terms) < count:
        cand = first + j * diff
        if math.gcd(cand, prod) == 1:
            terms.append(cand)
            prod *= cand
        j += 1
    return terms


@dataclass(frozen=True)
class SuperblockPlan:
    M: int
    t: int
    groups: tuple[tuple[int, ...], ...]

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)


def superblock_partition(M: int, t: int) -> SuperblockPlan:
    if t < 0:
        raise ValueError("t must be >= 0")
    if M < t + 1:
        raise PreconditionError(f"need M >= t+1, got M = {M}, t = {t}")
    q, extra = divmod(M, t + 1)
    if extra > q:
        raise PreconditionError(f"M = {M} cannot be split into superblocks of {t + 1} or {t + 2} blocks")
    sizes = [t + 1] * (q - extra) + [t + 2] * extra
    groups, start = [], 0
    for z in sizes:
        groups.append(tuple(range(start, start + z)))
        start += z
    return SuperblockPlan(M, t, tuple(groups))


def _group_arrays(plan: SuperblockPlan):
    M = plan.M
    group_of = np.empty(M, np.int64)
    first = np.empty(len(plan.groups), np.int64)
    width = np.empty(len(plan.groups), np.int64)
    for g, blocks in enumerate(plan.groups):
        group_of[list(blocks)] = g
        first[g] = blocks[0]
        width[g] = len(blocks)
    return group_of, first, width


def _ranks(sizes: np.ndarray, plan: SuperblockPlan) -> tuple[np.ndarray, np.ndarray]:
    """(rank of each block within its group, block index holding each (group, rank))."""
    M = plan.M
    rank = np.empty(M, np.int64)
    holder = np.full((len(plan.groups), plan.t + 2), -1, np.int64)
    for g, blocks in enumerate(plan.groups):
        idx = np.array(blocks, dtype=np.int64)
        order = idx[np.argsort(-sizes[idx], kind="stable")]
        rank[order] = np.arange(order.size)
        holder[g, :order.size] = order
    return rank, holder


@dataclass(frozen=True)
class StageTrace:
    beta1: np.ndarray
    beta2: np.ndarray
    beta3: np.ndarray
    beta4: np.ndarray

    def as_dict(self) -> dict:
        return {f"beta{i}": getattr(self, f"beta{i}").tolist() for i in range(1, 5)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict())

    def check_bounds(self, t: int, master: Perm) -> bool:
        return bool(
            np.all(np.abs(self.beta2 - self.beta1) <= t + 1)
            and np.array_equal(self.beta3, master.images[self.beta2])
            and np.all(np.abs(self.beta4 - self.beta3) <= t + 1)
        )


IntraFactory = Callable[[int], Sequence[int]]


def _default_intra(size: int):
    return int_ap_destroyer(size).images


def identity_intra(size: int):
    return range(size)


def almost_preconditions(n: int, t: int, M: int) -> None:
    if t < 0:
        raise PreconditionError("t must be >= 0")
    if n < M * M:
        raise PreconditionError(f"need n >= M^2 = {M * M}, got n = {n}")
    if n // M <= t:
        raise PreconditionError(f"need floor(n/M) > t, got {n // M}")
    if M < (t + 2) ** 2:
        raise PreconditionError(f"need M >= (t+2)^2 = {(t + 2) ** 2}, got M = {M}")


def build_almost(n: int, t: int, master: Perm, intra: IntraFactory = _default_intra,
                 check_master: bool = True) -> tuple[Perm, StageTrace]:
    """(t, t)-almost AP-destroying permutation of Z_n and its stage trace.

    ``master`` must destroy (4t+7, 4t+7)-almost APs; ``check_master=False``
    skips that (O(M^2)) verification, which is how synthetic masters are fed
    in to exercise the structural guarantees.
    """
    M = master.n
    almost_preconditions(n, t, M)
    if check_master:
        L = 4 * t + 7
        if 2 * L >= M:
            raise PreconditionError(f"master modulus {M} too small for ({L},{L})-almost checks")
        cert = check_almost(master, L, L)
        if not cert.verdict:
            raise PreconditionError(f"master is not ({L},{L})-almost AP-destroying: {cert.counterexample}")

    plan = superblock_partition(M, t)
    group_of, gfirst, gwidth = _group_arrays(plan)
    layout = block_layout(n, M)
    sizes = np.asarray(layout.sizes, np.int64)
    _, holder1 = _ranks(sizes, plan)
    slot_sizes = sizes[perm_inverse(master).images]
    slot_starts = np.concatenate([[0], np.cumsum(slot_sizes)[:-1]]).astype(np.int64)
    slot_rank, _ = _ranks(slot_sizes, plan)
    k = n // M
    tau_k = np.asarray(list(intra(k)), dtype=np.int64)
    tau_k1 = np.asarray(list(intra(k + 1)), dtype=np.int64) if layout.l else tau_k
    final, b1, b2, b3, b4 = _stages(n, layout.starts, sizes, gfirst, gwidth, group_of, holder1,
                                    master.images, slot_starts, slot_rank, k, tau_k, tau_k1)
    return Perm._trusted(final), StageTrace(b1, b2, b3, b4)


@numba.njit(cache=True)
def _stages(n, starts, sizes, gfirst, gwidth, group_of, holder1, master, slot_starts,
            slot_rank, k, tau_k, tau_k1):
    final = np.empty(n, np.int64)
    b1 = np.empty(n, np.int64)
    b2 = np.empty(n, np.int64)
    b3 = np.empty(n, np.int64)
    b4 = np.empty(n, np.int64)
    for g in range(gfirst.shape[0]):
        w = gwidth[g]
        first = gfirst[g]
        base = starts[first]
        total = 0
        for j in range(first, first + w):
            total += sizes[j]
        blk = first
        for o in range(total):
            x = base + o
            # stage 1
            while blk + 1 < first + w and x >= starts[blk + 1]:
                blk += 1
            b1[x] = blk
            q = o // w
            src = holder1[g, o - q * w]
            b2[x] = src
            # stage 2
            dst = master[src]
            b3[x] = dst
            # stage 3
            u = tau_k[q] if sizes[src] == k else tau_k1[q]
            # stage 4
            g4 = group_of[dst]
            f4 = gfirst[g4]
            pos = slot_starts[f4] + slot_rank[dst] + gwidth[g4] * u
            final[x] = pos
            s = f4
            while s + 1 < f4 + gwidth[g4] and pos >= slot_starts[s + 1]:
                s += 1
            b4[x] = s
    return final, b1, b2, b3, b4


# ---------------------------------------------------------------------------
# Audits of the correctness argument on enumerable instances


@dataclass
class ChainReport:
    qualifying: int = 0          # triples with beta2 not all equal
    beta1_outside_3: int = 0     # violations of the beta1 bound
    beta2_outside_L: int = 0     # violations of the beta2 bound
    master_leaks: int = 0        # beta3 offset inside [-L, L] (master defect)
    beta4_inside_3_after_leak_free: int = 0  # beta3 outside but beta4 within 3
    final_inside_t_despite_beta4: int = 0    # beta4 outside 3 yet final offset within t
    case1_triples: int = 0
    case1_failures: int = 0      # same-block triples not ending on a nonzero multiple of w

    @property
    def structural_ok(self) -> bool:
        return (self.beta1_outside_3 == 0 and self.beta2_outside_L == 0
                and self.beta4_inside_3_after_leak_free == 0
                and self.final_inside_t_despite_beta4 == 0 and self.case1_failures == 0)

    @property
    def chain_ok(self) -> bool:
        return self.structural_ok and self.master_leaks == 0


def audit_chain(n: int, t: int, master: Perm, perm: Perm, trace: StageTrace,
                chunk_rows: int = 256) -> ChainReport:
    """Enumerate every triple with |a + c - 2b| <= t (mod n), not all equal."""
    M = master.n
    L = 4 * t + 7
    rep = ChainReport()
    plan = superblock_partition(M, t)
    group_of, _, gwidth = _group_arrays(plan)
    img = perm.images
    b1, b2, b3, b4 = trace.beta1, trace.beta2, trace.beta3, trace.beta4
    b = np.arange(n, dtype=np.int64)[None, :]
    for lo in range(0, n, chunk_rows):
        a = np.arange(lo, min(n, lo + chunk_rows), dtype=np.int64)[:, None]
        for eta in range(-t, t + 1):
            c = (2 * b - a + eta) % n
            nontriv = ~((a == b) & (b == c))
            same = (b2[a] == b2[b]) & (b2[b] == b2[c])
            qual = nontriv & ~same

            def off(beta, mod):
                return centered_array(beta[a] + beta[c] - 2 * beta[b], mod)

            o1 = off(b1, M)
            o2 = off(b2, M)
            o3 = off(b3, M)
            o4 = off(b4, M)
            raw = img[a] + img[c] - 2 * img[b]
            fin = centered_array(raw, n)
            rep.qualifying += int(qual.sum())
            rep.beta1_outside_3 += int((qual & (np.abs(o1) > 3)).sum())
            rep.beta2_outside_L += int((qual & (np.abs(o2) > L)).sum())
            leak = qual & (np.abs(o3) <= L)
            rep.master_leaks += int(leak.sum())
            rep.beta4_inside_3_after_leak_free += int((qual & ~leak & (np.abs(o4) <= 3)).sum())
            rep.final_inside_t_despite_beta4 += int((qual & (np.abs(o4) > 3) & (np.abs(fin) <= t)).sum())

            c1 = nontriv & same
            wgrp = gwidth[group_of[b3[b]]]
            good = (raw != 0) & (raw % wgrp == 0) & (np.abs(fin) > t)
            rep.case1_triples += int(c1.sum())
            rep.case1_failures += int((c1 & ~good).sum())
    return rep
