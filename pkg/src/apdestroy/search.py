"""Backtracking search for permutations of Z_n destroying a pattern set.

Positions are assigned in index order (``pi(0), pi(1), ...``) unless
``mrv`` is set, in which case the position with the fewest remaining
values goes next.  With ``normalize`` on, ``pi(0)`` is pinned to 0: if
``pi`` destroys a pattern set then so does ``x -> pi(x) - pi(0)``, so no
solution class is lost.

Parallel mode splits the tree on the values of the first two free
positions and farms the subtrees out to worker processes.  Counts and
exists/none verdicts do not depend on the worker count; the identity of a
first-found witness may, and such certificates carry
``"deterministic": false``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import engine
from .core import Perm
from .verify import Certificate, Pattern, check_patterns

LOG = logging.getLogger(__name__)

# factorial blow-up: exhaustive counting is refused above this modulus
EXHAUST_CEILING = 11


class NodeLimitReached(RuntimeError):
    """The node budget ran out before the search space was exhausted."""


@dataclass
class SearchConfig:
    patterns: Sequence[Pattern]
    normalize: bool = True
    node_limit: Optional[int] = None
    threads: int = 1
    seed: Optional[int] = None
    mode: str = "first"  # "first" | "count"
    mrv: bool = False

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be >= 1")
        if self.mode not in ("first", "count"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass
class SearchResult:
    status: str  # "found" | "none" | "limit"
    perm: Optional[Perm] = None
    certificate: Optional[Certificate] = None
    nodes: int = 0
    count: Optional[int] = None
    deterministic: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == "found"


def reduce_patterns(n: int, patterns) -> list[tuple[int, int]]:
    return sorted({(p.s % n, p.t % n) for p in patterns})


def pattern_problem(n: int, patterns) -> engine.Problem:
    """Constraint arrays forbidding every pattern on Z_n."""
    a_all, b_all, c_all, r_all = [], [], [], []
    a = np.repeat(np.arange(n, dtype=np.int64), n)
    b = np.tile(np.arange(n, dtype=np.int64), n)
    for s, t in reduce_patterns(n, patterns):
        c = (2 * b - a + s) % n
        keep = (a <= c) & ~((a == b) & (b == c))
        a_all.append(a[keep])
        b_all.append(b[keep])
        c_all.append(c[keep])
        r_all.append(np.full(int(keep.sum()), t, np.int64))
    if not a_all:
        empty = np.empty(0, np.int64)
        return engine.Problem.from_triples(n, n, empty, empty, empty, empty)
    return engine.Problem.from_triples(n, n, np.concatenate(a_all), np.concatenate(b_all),
                                       np.concatenate(c_all), np.concatenate(r_all))


def value_order(n: int, seed: Optional[int]) -> np.ndarray:
    """Per-position value order: ascending when ``seed`` is None, else shuffled."""
    if seed is None:
        return np.tile(np.arange(n, dtype=np.int64), (n, 1))
    rng = np.random.Generator(np.random.PCG64(seed))
    return np.stack([rng.permutation(n) for _ in range(n)]).astype(np.int64)


def _base_fixed(config: SearchConfig) -> dict:
    return {0: 0} if config.normalize else {}


def _subtasks(n: int, config: SearchConfig) -> list[dict]:
    base = _base_fixed(config)
    free = [x for x in range(n) if x not in base][:2]
    taken = set(base.values())
    tasks = []
    if len(free) < 2:
        return [base]
    for v1 in range(n):
        if v1 in taken:
            continue
        for v2 in range(n):
            if v2 in taken or v2 == v1:
                continue
            tasks.append({**base, free[0]: v1, free[1]: v2})
    return tasks


def _run(n: int, patterns, config: SearchConfig, fixed: dict, node_limit: Optional[int]):
    prob = pattern_problem(n, patterns)
    res = engine.solve(prob, value_order(n, config.seed), fixed=fixed, mrv=config.mrv,
                       count_all=config.mode == "count", node_limit=node_limit)
    return res.status, res.nodes, res.count, None if res.solution is None else res.solution.tolist()


def _finish(n: int, patterns, status: int, nodes: int, count, solution,
            deterministic: bool) -> SearchResult:
    name = engine.STATUS_NAMES[status]
    if solution is None:
        return SearchResult(name, nodes=nodes, count=count, deterministic=deterministic)
    perm = Perm(solution)
    cert = check_patterns(perm, patterns)
    if not cert.verdict:  # soundness is enforced, not assumed
        raise AssertionError(f"search produced an invalid witness: {cert.counterexample}")
    cert = Certificate(perm, cert.claims, True, None,
                       extra={"deterministic": deterministic, "nodes": nodes})
    return SearchResult("found", perm, cert, nodes, count, deterministic)


def search_perm(n: int, config: SearchConfig) -> SearchResult:
    """Find (or count) permutations of Z_n destroying ``config.patterns``."""
    patterns = list(config.patterns)
    if n < 1:
        raise ValueError("n must be >= 1")
    counting = config.mode == "count"
    if config.threads == 1 or n < 4:
        status, nodes, count, sol = _run(n, patterns, config, _base_fixed(config), config.node_limit)
        return _finish(n, patterns, status, nodes, count if counting else None, sol, True)
    return _search_parallel(n, patterns, config)


def _search_parallel(n: int, patterns, config: SearchConfig) -> SearchResult:
    tasks = _subtasks(n, config)
    counting = config.mode == "count"
    total_nodes = 0
    total_count = 0
    hit_limit = False
    # node_limit applies per subtree in parallel mode
    with ProcessPoolExecutor(max_workers=config.threads) as pool:
        pending = {pool.submit(_run, n, patterns, config, fx, config.node_limit) for fx in tasks}
        while pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                status, nodes, count, sol = fut.result()
                total_nodes += nodes
                if status == engine.LIMIT:
                    hit_limit = True
                if counting:
                    total_count += count
                elif status == engine.FOUND:
                    for p in pending:
                        p.cancel()
                    return _finish(n, patterns, engine.FOUND, total_nodes, None, sol, False)
    if hit_limit:
        return SearchResult("limit", nodes=total_nodes, count=total_count if counting else None,
                            deterministic=not counting)
    return SearchResult("none", nodes=total_nodes, count=total_count if counting else None)


def exhaust_count(n: int, patterns, normalize: bool = False, threads: int = 1) -> int:
    """Number of permutations of Z_n destroying every pattern.

    With ``normalize``, only ``pi(0) = 0`` is enumerated and the result is
    multiplied by ``n`` (output translation is a bijection between the
    classes ``pi(0) = v``).
    """
    if n > EXHAUST_CEILING:
        raise ValueError(f"n = {n} exceeds the exhaustive ceiling {EXHAUST_CEILING}")
    cfg = SearchConfig(patterns, normalize=normalize, threads=threads, mode="count")
    res = search_perm(n, cfg)
    if res.status == "limit":
        raise NodeLimitReached("count incomplete")
    return res.count * n if normalize else res.count
