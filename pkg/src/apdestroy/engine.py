"""Forward-checking backtracking over permutations.

The problem is a set of positions ``0..n-1`` to be assigned distinct values
``0..n-1`` subject to *forbidden linear relations*: each constraint names
up to three distinct positions with integer coefficients and a right-hand
side, and the assignment must avoid ``sum(coef * value) == rhs``, taken
modulo ``modulus`` (or over the integers when ``modulus == 0``).

Whenever a constraint is left with one unassigned position, the values
that would complete the forbidden relation are struck from that
position's domain; a position with an empty domain prunes the branch.  A
leaf is therefore always a valid solution.

The kernel is compiled with numba; ``solve`` is the Python entry point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

FOUND = 0
EXHAUSTED = 1
LIMIT = 2

STATUS_NAMES = {FOUND: "found", EXHAUSTED: "none", LIMIT: "limit"}


@numba.njit(cache=True)
def _egcd_inv(a, m):
    # inverse of a modulo m, gcd(a, m) == 1 assumed
    t, new_t = 0, 1
    r, new_r = m, a % m
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % m


@numba.njit(cache=True)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@numba.njit(cache=True)
def _kernel(n, modulus, cpos, ccoef, crhs, adj_ptr, adj_idx, value_order,
            assigned, mrv, count_all, node_limit, out_solution):
    """Returns (status, nodes, solutions_counted)."""
    C = crhs.shape[0]
    val = np.full(n, -1, np.int64)
    used = np.zeros(n, np.bool_)
    forbid = np.zeros((n, n), np.int32)
    avail = np.full(n, n, np.int64)
    cnt = np.zeros(C, np.int64)
    for c in range(C):
        k = 0
        for j in range(3):
            if cpos[c, j] >= 0:
                k += 1
        cnt[c] = k

    # trail of forbid increments, shared stack
    trail_y = np.empty(16, np.int64)
    trail_v = np.empty(16, np.int64)
    trail_len = 0

    depth_var = np.full(n + 1, -1, np.int64)
    depth_next = np.zeros(n + 1, np.int64)   # next index into value_order
    depth_trail = np.zeros(n + 1, np.int64)  # trail length before this depth's assignment
    depth_assigned = np.zeros(n + 1, np.bool_)

    nodes = 0
    solutions = 0
    sol_buf = np.empty(2, np.int64)

    # apply preassigned prefix as depth-less fixed assignments
    n_fixed = 0
    for x in range(n):
        if assigned[x] >= 0:
            n_fixed += 1

    depth = 0
    total = n
    # fixed assignments are processed first, in index order, as forced depths
    fixed_list = np.empty(n_fixed, np.int64)
    k = 0
    for x in range(n):
        if assigned[x] >= 0:
            fixed_list[k] = x
            k += 1

    while True:
        if depth == total:
            solutions += 1
            if not count_all:
                for x in range(n):
                    out_solution[x] = val[x]
                return 0, nodes, solutions
            depth -= 1
            if depth < 0:
                break
            # fall through to undo/advance at this depth
        # choose variable if not yet chosen at this depth
        if depth_var[depth] < 0:
            if depth < n_fixed:
                y = fixed_list[depth]
            elif mrv:
                y = -1
                best = n + 1
                for z in range(n):
                    if val[z] < 0 and avail[z] < best:
                        best = avail[z]
                        y = z
            else:
                y = -1
                for z in range(n):
                    if val[z] < 0:
                        y = z
                        break
            depth_var[depth] = y
            depth_next[depth] = 0
            depth_assigned[depth] = False
        y = depth_var[depth]

        # undo previous assignment at this depth
        if depth_assigned[depth]:
            v_old = val[y]
            while trail_len > depth_trail[depth]:
                trail_len -= 1
                yy = trail_y[trail_len]
                vv = trail_v[trail_len]
                forbid[yy, vv] -= 1
                if forbid[yy, vv] == 0 and not used[vv]:
                    avail[yy] += 1
            for p in range(adj_ptr[y], adj_ptr[y + 1]):
                cnt[adj_idx[p]] += 1
            val[y] = -1
            used[v_old] = False
            for z in range(n):
                if val[z] < 0 and z != y and forbid[z, v_old] == 0:
                    avail[z] += 1
            depth_assigned[depth] = False

        # find next candidate value
        v = -1
        if depth < n_fixed:
            if depth_next[depth] == 0:
                cand = assigned[y]
                if not used[cand] and forbid[y, cand] == 0:
                    v = cand
                depth_next[depth] = 1
        else:
            while depth_next[depth] < n:
                cand = value_order[y, depth_next[depth]]
                depth_next[depth] += 1
                if not used[cand] and forbid[y, cand] == 0:
                    v = cand
                    break
        if v < 0:
            depth_var[depth] = -1
            depth -= 1
            if depth < 0:
                break
            continue

        if node_limit > 0 and nodes >= node_limit:
            return 2, nodes, solutions
        nodes += 1

        # assign y = v
        depth_trail[depth] = trail_len
        val[y] = v
        used[v] = True
        depth_assigned[depth] = True
        wiped = False
        for z in range(n):
            if val[z] < 0 and forbid[z, v] == 0:
                avail[z] -= 1
                if avail[z] == 0:
                    wiped = True
        for p in range(adj_ptr[y], adj_ptr[y + 1]):
            c = adj_idx[p]
            cnt[c] -= 1
            if cnt[c] != 1:
                continue
            # one free position left: strike the completing values
            free = -1
            lam = 0
            r = crhs[c]
            for j in range(3):
                q = cpos[c, j]
                if q < 0:
                    continue
                if val[q] < 0:
                    free = q
                    lam = ccoef[c, j]
                else:
                    r -= ccoef[c, j] * val[q]
            if free < 0:
                continue
            nsol = 0
            if modulus == 0:
                if lam != 0 and r % lam == 0:
                    w = r // lam
                    if 0 <= w < n:
                        sol_buf[0] = w
                        nsol = 1
            else:
                lm = lam % modulus
                rm = r % modulus
                g = _gcd(lm, modulus)
                if g == 0:
                    g = modulus
                if rm % g == 0:
                    mg = modulus // g
                    if mg == 1:
                        base = 0
                    else:
                        base = ((rm // g) * _egcd_inv((lm // g) % mg, mg)) % mg
                    nsol = 0
                    for j in range(g):
                        if nsol < 2:
                            sol_buf[nsol] = base + j * mg
                            nsol += 1
                    if g > 2:
                        # coefficients are in {+-1, +-2}; g <= 2 always holds
                        nsol = 0
            for j in range(nsol):
                w = sol_buf[j]
                if trail_len == trail_y.shape[0]:
                    ny = np.empty(2 * trail_len, np.int64)
                    nv = np.empty(2 * trail_len, np.int64)
                    ny[:trail_len] = trail_y
                    nv[:trail_len] = trail_v
                    trail_y = ny
                    trail_v = nv
                trail_y[trail_len] = free
                trail_v[trail_len] = w
                trail_len += 1
                forbid[free, w] += 1
                if forbid[free, w] == 1 and not used[w]:
                    avail[free] -= 1
                    if avail[free] == 0:
                        wiped = True
        if wiped:
            continue  # loop re-enters this depth, undoes, tries next value
        depth += 1

    return 1, nodes, solutions


@dataclass
class Problem:
    """Constraint arrays for ``solve``; build with ``from_triples``."""

    n: int
    modulus: int
    cpos: np.ndarray   # (C, 3) int64, -1 = unused slot
    ccoef: np.ndarray  # (C, 3) int64
    crhs: np.ndarray   # (C,) int64

    @classmethod
    def from_triples(cls, n: int, modulus: int, a, b, c, rhs) -> "Problem":
        """Constraints ``v(a) + v(c) - 2 v(b) != rhs`` with coincident positions merged."""
        a = np.asarray(a, np.int64)
        b = np.asarray(b, np.int64)
        c = np.asarray(c, np.int64)
        rhs = np.asarray(rhs, np.int64)
        C = a.shape[0]
        pos = np.stack([a, b, c], axis=1)
        coef = np.tile(np.array([1, -2, 1], np.int64), (C, 1))
        # merge duplicates: a == c, a == b, b == c
        ac = pos[:, 0] == pos[:, 2]
        coef[ac, 0] += coef[ac, 2]
        pos[ac, 2] = -1
        coef[ac, 2] = 0
        ab = (pos[:, 0] == pos[:, 1]) & (pos[:, 1] >= 0)
        coef[ab, 0] += coef[ab, 1]
        pos[ab, 1] = -1
        coef[ab, 1] = 0
        bc = (pos[:, 1] == pos[:, 2]) & (pos[:, 2] >= 0)
        coef[bc, 1] += coef[bc, 2]
        pos[bc, 2] = -1
        coef[bc, 2] = 0
        return cls(n, modulus, pos, coef, rhs)

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        flat_pos = self.cpos.ravel()
        cid = np.repeat(np.arange(self.crhs.shape[0], dtype=np.int64), 3)
        keep = flat_pos >= 0
        flat_pos = flat_pos[keep]
        cid = cid[keep]
        order = np.argsort(flat_pos, kind="stable")
        ptr = np.zeros(self.n + 1, np.int64)
        np.add.at(ptr, flat_pos + 1, 1)
        return np.cumsum(ptr), cid[order]


@dataclass
class SolveResult:
    status: int
    nodes: int
    count: int
    solution: Optional[np.ndarray]

    @property
    def status_name(self) -> str:
        return STATUS_NAMES[self.status]


def solve(problem: Problem, value_order: Optional[np.ndarray] = None,
          fixed: Optional[dict] = None, mrv: bool = False, count_all: bool = False,
          node_limit: Optional[int] = None, adjacency=None) -> SolveResult:
    n = problem.n
    if value_order is None:
        value_order = np.tile(np.arange(n, dtype=np.int64), (n, 1))
    assigned = np.full(n, -1, np.int64)
    for x, v in (fixed or {}).items():
        assigned[x] = v
    ptr, idx = adjacency if adjacency is not None else problem.adjacency()
    out = np.full(n, -1, np.int64)
    status, nodes, count = _kernel(
        n, problem.modulus, problem.cpos, problem.ccoef, problem.crhs, ptr, idx,
        np.ascontiguousarray(value_order, dtype=np.int64), assigned, mrv, count_all,
        int(node_limit or 0), out)
    if count_all:
        # a full enumeration that ran to completion reports EXHAUSTED
        return SolveResult(status if status == LIMIT else EXHAUSTED, nodes, count, None)
    return SolveResult(status, nodes, count, out if status == FOUND else None)
