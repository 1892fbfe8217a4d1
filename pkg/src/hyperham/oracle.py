"""Exhaustive search for spanning ell-cycles and ell-paths on small hypergraphs.

Positions are filled left to right. A vertex is a candidate for position p when,
for every window containing p, the vertices already placed in that window
together with it form a supported set. Full windows are therefore edges.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .core import CycleParams, Hypergraph, _bits, max_strong_independent_set
from .errors import ParameterError
from .walks import verify_ell_cycle, verify_ell_path

FOUND, NONE, BUDGET = "found", "none", "budget-exhausted"


@dataclass(frozen=True)
class OracleBudget:
    node_limit: int | None = None
    time_limit: float | None = None
    symmetry_breaking: bool = True

    def __post_init__(self):
        if self.node_limit is not None and self.node_limit <= 0:
            raise ParameterError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ParameterError("time_limit must be positive")


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: tuple[int, ...] | None = None
    nodes: int = 0
    reason: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.reason:
            out["reason"] = self.reason
        return out


class _OutOfBudget(Exception):
    pass


class _Search:
    def __init__(self, G: Hypergraph, n: int, windows: list[list[int]], fixed: dict[int, int], budget: OracleBudget):
        self.G = G
        self.n = n
        self.fixed = fixed
        self.budget = budget
        self.nodes = 0
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        self.containing: list[list[list[int]]] = [[] for _ in range(n)]
        for w in windows:
            for p in w:
                self.containing[p].append(w)
        self.seq: list[int | None] = [None] * n
        for p, v in fixed.items():
            self.seq[p] = v
        self.extra = None  # optional callable(position, vertex) -> bool

    def _tick(self):
        self.nodes += 1
        lim = self.budget.node_limit
        if lim is not None and self.nodes > lim:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def candidates(self, p: int, used: int) -> int:
        mask = ((1 << self.G.n) - 1) & ~used
        for w in self.containing[p]:
            placed = tuple(self.seq[q] for q in w if q != p and self.seq[q] is not None)
            mask &= self.G.neighbourhood_mask(placed)
            if not mask:
                break
        return mask

    def run(self, order: list[int], used: int) -> bool:
        return self._rec(order, 0, used)

    def _rec(self, order: list[int], i: int, used: int) -> bool:
        self._tick()
        if i == len(order):
            return True
        p = order[i]
        for v in _bits(self.candidates(p, used)):
            if self.extra is not None and not self.extra(p, v):
                continue
            self.seq[p] = v
            if self._rec(order, i + 1, used | (1 << v)):
                return True
        self.seq[p] = None
        return False


def cycle_windows(n: int, params: CycleParams) -> list[list[int]]:
    return [[(s * params.step + j) % n for j in range(params.k)] for s in range(n // params.step)]


def path_windows(n: int, params: CycleParams) -> list[list[int]]:
    return [[s * params.step + j for j in range(params.k)] for s in range((n - params.k) // params.step + 1)]


def hamilton_ell_cycle(
    G: Hypergraph, params: CycleParams, budget: OracleBudget | None = None, mis_prune: bool = True
) -> Verdict:
    """Spanning ell-cycle of G, a definitive ``none``, or budget exhaustion.

    Vertex 0 is placed in the first block of k-ell positions, which every cycle
    reaches after rotating by a multiple of k-ell. For tight cycles a reversal
    is ruled out by requiring the second vertex to be smaller than the last.
    With ``mis_prune`` a strong independent set larger than floor(n/t) settles
    the answer before any search.
    """
    budget = budget or OracleBudget()
    n, k, step = G.n, G.k, params.step
    if k != params.k:
        raise ParameterError(f"graph is {k}-uniform but parameters have k={params.k}")
    if n % step:
        raise ParameterError(f"n={n} is not divisible by k-ell={step}")
    if n < k or not G.edges or G.isolated_vertices():
        return Verdict(NONE, reason="fewer than k vertices, no edges or an isolated vertex")
    if mis_prune:
        size, _, _ = max_strong_independent_set(G)
        if size > n // params.t:
            return Verdict(NONE, reason=f"strong independent set of size {size} > floor(n/t) = {n // params.t}")
    windows = cycle_windows(n, params)
    total = 0
    starts = range(step) if budget.symmetry_breaking else [None]
    for start in starts:
        search = _Search(G, n, windows, {}, budget)
        if start is not None:
            search.seq[start] = 0

            def extra(p, v, start=start, s=search):
                if step == 1 and p == n - 1 and n > 2:
                    return s.seq[1] < v
                return True

            search.extra = extra
            order = [p for p in range(n) if p != start]
            used = 1
        else:
            order = list(range(n))
            used = 0
        try:
            ok = search.run(order, used)
        except _OutOfBudget:
            return Verdict(BUDGET, nodes=total + search.nodes)
        total += search.nodes
        if ok:
            cyc = tuple(search.seq)
            assert verify_ell_cycle(G, cyc, params, spanning=True)
            return Verdict(FOUND, cyc, total)
    return Verdict(NONE, nodes=total)


def hamilton_ell_path_between(
    G: Hypergraph,
    e1: Sequence[int],
    e2: Sequence[int],
    params: CycleParams,
    budget: OracleBudget | None = None,
) -> Verdict:
    """Spanning ell-path whose first k vertices are e1 and last k vertices are e2."""
    budget = budget or OracleBudget()
    n, k, step = G.n, G.k, params.step
    e1, e2 = tuple(e1), tuple(e2)
    for name, e in (("e1", e1), ("e2", e2)):
        if len(e) != k or not G.has_edge(e):
            raise ParameterError(f"{name}={e} is not an ordered edge")
    if set(e1) & set(e2):
        raise ParameterError(f"e1 and e2 share {sorted(set(e1) & set(e2))}")
    if n < 2 * k or (n - k) % step:
        raise ParameterError(f"n={n} is not congruent to k={k} mod {step}")
    fixed = {p: v for p, v in enumerate(e1)}
    fixed.update({n - k + p: v for p, v in enumerate(e2)})
    search = _Search(G, n, path_windows(n, params), fixed, budget)
    used = 0
    for v in fixed.values():
        used |= 1 << v
    try:
        ok = search.run(list(range(k, n - k)), used)
    except _OutOfBudget:
        return Verdict(BUDGET, nodes=search.nodes)
    if not ok:
        return Verdict(NONE, nodes=search.nodes)
    path = tuple(search.seq)
    assert verify_ell_path(G, path, params) and len(path) == n
    return Verdict(FOUND, path, search.nodes)
