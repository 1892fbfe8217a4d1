"""Lower-bound constructions and the explicit spanning cycle of a complete k-partite graph.

Each generator checks its own output before returning it. Vertex ids follow one
convention: the sparse side ``A`` takes the highest ids.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .core import (
    CycleParams,
    Hypergraph,
    ImplicitKPartite,
    compute_t,
    is_strong_independent,
    mask_of,
    supported_codegree,
)
from .errors import ParameterError, SelfCheckError
from .walks import verify_ell_cycle


class WitnessKind(enum.Enum):
    WEAK_BOUND = "weak"
    STRONG_BOUND = "strong"
    LOOSE_THREE_UNIFORM = "loose"


@dataclass(frozen=True)
class ExtremalWitness:
    graph: Hypergraph
    A: tuple[int, ...]
    B: tuple[int, ...]
    kind: WitnessKind
    params: CycleParams
    delta_star: int
    extra: dict = field(default_factory=dict)

    def metadata(self) -> dict:
        meta = {
            "kind": self.kind.value,
            "k": self.params.k,
            "ell": self.params.ell,
            "t": self.params.t,
            "n": self.graph.n,
            "A": list(self.A),
            "size_A": len(self.A),
            "delta_star": self.delta_star,
        }
        for key, val in self.extra.items():
            if isinstance(val, (list, tuple)):
                val = [list(x) if isinstance(x, (list, tuple)) else x for x in val]
            meta[key] = val
        return meta


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise SelfCheckError(message)


def gen_weak_lower_bound(k: int, ell: int, n: int) -> ExtremalWitness:
    """All k-sets meeting a set of floor(n/t)+1 vertices at most once."""
    params = compute_t(k, ell)
    if n % params.step:
        raise ParameterError(f"n={n} is not divisible by k-ell={params.step}")
    a = n // params.t + 1
    b = n - a
    if b < k - 1:
        raise ParameterError(f"n={n} leaves |B|={b} < k-1; no edges would meet A")
    B = tuple(range(b))
    A = tuple(range(b, n))
    edges = list(itertools.combinations(B, k))
    for core in itertools.combinations(B, k - 1):
        edges.extend(core + (x,) for x in A)
    G = Hypergraph(n, k, frozenset(edges))
    dstar = supported_codegree(G)
    _check(is_strong_independent(G, A), "A is not strongly independent")
    # counting gives |B| - (k-2) for sets with one A-vertex
    _check(dstar == b - (k - 2), f"supported co-degree {dstar} != |B|-(k-2) = {b - (k - 2)}")
    return ExtremalWitness(G, A, B, WitnessKind.WEAK_BOUND, params, dstar)


def gen_strong_lower_bound(k: int, n: int) -> ExtremalWitness:
    """Like the weak bound, but A carries a perfect matching of supported pairs."""
    if not isinstance(k, int) or k < 3 or k % 2 == 0:
        raise ParameterError(f"k must be odd and at least 3, got {k}")
    params = compute_t(k, (k - 1) // 2)
    t = params.t
    if n % t:
        raise ParameterError(f"t={t} does not divide n={n}")
    a = n // t + 1
    if a % 2:
        raise ParameterError(f"n/t+1 = {a} must be even")
    b = n - a
    if b < k - 2:
        raise ParameterError(f"n={n} leaves |B|={b} < k-2")
    B = tuple(range(b))
    A = tuple(range(b, n))
    pairs = [(A[2 * i], A[2 * i + 1]) for i in range(a // 2)]
    edges = list(itertools.combinations(B, k))
    for core in itertools.combinations(B, k - 1):
        edges.extend(core + (x,) for x in A)
    for core in itertools.combinations(B, k - 2):
        edges.extend(core + p for p in pairs)
    G = Hypergraph(n, k, frozenset(edges))
    dstar = supported_codegree(G)
    amask = mask_of(A)
    matched = {frozenset(p) for p in pairs}
    for u in A:
        nb = [v for v in A if (G.adjacency[u] >> v) & 1]
        _check(len(nb) == 1 and frozenset((u, nb[0])) in matched, f"A-vertex {u} is not matched exactly once")
    _check(all(bin(mask_of(e) & amask).count("1") <= 2 for e in G.edges), "an edge meets A three times")
    _check(dstar == b - (k - 3), f"supported co-degree {dstar} != |B|-(k-3) = {b - (k - 3)}")
    return ExtremalWitness(G, A, B, WitnessKind.STRONG_BOUND, params, dstar, {"pairs": pairs})


def gen_loose_3uniform(n: int) -> ExtremalWitness:
    """Two complete 3-graphs on n/2+1 vertices glued along two vertices."""
    if n % 4 != 2 or n < 6:
        raise ParameterError(f"n must be 2 mod 4 and at least 6, got {n}")
    params = compute_t(3, 1)
    half = n // 2 - 1
    shared = (n - 2, n - 1)
    left = tuple(range(half)) + shared
    right = tuple(range(half, 2 * half)) + shared
    edges = set(itertools.combinations(left, 3)) | set(itertools.combinations(right, 3))
    G = Hypergraph(n, 3, frozenset(edges))
    dstar = supported_codegree(G)
    _check(set(left) & set(right) == set(shared), "cliques must share exactly two vertices")
    _check(
        all(set(e) <= set(left) or set(e) <= set(right) for e in G.edges),
        "edge outside both cliques",
    )
    _check(dstar == n // 2 - 1, f"supported co-degree {dstar} != n/2-1")
    return ExtremalWitness(
        G,
        shared,
        tuple(range(n - 2)),
        WitnessKind.LOOSE_THREE_UNIFORM,
        params,
        dstar,
        {"H1": left, "H2": right},
    )


@dataclass(frozen=True)
class KPartiteCycle:
    graph: object  # Hypergraph or ImplicitKPartite
    sequence: tuple[int, ...]
    marked_edge: tuple[int, ...]
    A: tuple[int, ...]
    B_parts: tuple[tuple[int, ...], ...]


def construct_kpartite_ell_cycle(params: CycleParams, r: int, materialize: bool | None = None) -> KPartiteCycle:
    """Spanning ell-cycle of the complete k-partite k-graph with |A| = r/t.

    The cycle repeats blocks of t-1 B-vertices followed by one A-vertex, cycling
    through B_1..B_{k-1}; the first k entries form the marked ordered edge.
    """
    k, t = params.k, params.t
    period = t * (k - 1)
    if not isinstance(r, int) or r < 1 or r % period:
        raise ParameterError(f"r={r} must be a positive multiple of t(k-1)={period}")
    size_b = r * (t - 1) // period
    B_parts = tuple(tuple(range(i * size_b, (i + 1) * size_b)) for i in range(k - 1))
    A = tuple(range((k - 1) * size_b, r))
    used = [0] * (k - 1)
    a_used = 0
    b_index = 0
    seq = []
    for pos in range(1, r + 1):
        if pos % t == 0:
            seq.append(A[a_used])
            a_used += 1
        else:
            part = b_index % (k - 1)
            seq.append(B_parts[part][used[part]])
            used[part] += 1
            b_index += 1
    implicit = ImplicitKPartite(B_parts + (A,))
    if materialize is None:
        materialize = implicit.num_edges <= 200_000
    graph = implicit.materialize() if materialize else implicit
    seq_t = tuple(seq)
    _check(len(set(seq_t)) == r, "cycle does not span the vertex set")
    _check(verify_ell_cycle(graph, seq_t, params), "emitted sequence is not an ell-cycle")
    return KPartiteCycle(graph, seq_t, seq_t[:k], A, B_parts)
