"""Bipartite and k-partite matchings, and a directed Hamilton cycle solver."""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .core import _bits, as_fraction
from .errors import ParameterError, ResourceError, SearchExhausted


def derive_rng(label: str, seed: int) -> random.Random:
    """Independent generator for one named operation under a root seed."""
    digest = hashlib.sha256(f"{label}:{seed}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


# -- bipartite -----------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteGraph:
    """Edges are (x, y) with x in range(nx) and y in range(ny)."""

    nx: int
    ny: int
    edges: frozenset

    def __post_init__(self):
        es = frozenset((int(x), int(y)) for x, y in self.edges)
        for x, y in es:
            if not (0 <= x < self.nx and 0 <= y < self.ny):
                raise ParameterError(f"edge ({x}, {y}) leaves the parts X={self.nx}, Y={self.ny}")
        object.__setattr__(self, "edges", es)
        adj_x = [0] * self.nx
        adj_y = [0] * self.ny
        for x, y in es:
            adj_x[x] |= 1 << y
            adj_y[y] |= 1 << x
        object.__setattr__(self, "_adj_x", tuple(adj_x))
        object.__setattr__(self, "_adj_y", tuple(adj_y))

    @classmethod
    def complete(cls, n: int) -> "BipartiteGraph":
        return cls(n, n, frozenset((x, y) for x in range(n) for y in range(n)))

    def neighbours_x(self, x: int) -> int:
        return self._adj_x[x]

    def neighbours_y(self, y: int) -> int:
        return self._adj_y[y]

    def min_degree(self) -> int:
        degs = [m.bit_count() if hasattr(m, "bit_count") else bin(m).count("1") for m in self._adj_x + self._adj_y]
        return min(degs) if degs else 0

    def induced(self, xs: Sequence[int], ys: Sequence[int]) -> "BipartiteGraph":
        xi = {x: i for i, x in enumerate(xs)}
        yi = {y: i for i, y in enumerate(ys)}
        return BipartiteGraph(len(xs), len(ys), frozenset((xi[x], yi[y]) for x, y in self.edges if x in xi and y in yi))


def maximum_matching(G: BipartiteGraph) -> dict[int, int]:
    """x -> y via augmenting paths."""
    match_y: dict[int, int] = {}

    def augment(x: int, seen: set) -> bool:
        for y in _bits(G.neighbours_x(x)):
            if y in seen:
                continue
            seen.add(y)
            if y not in match_y or augment(match_y[y], seen):
                match_y[y] = x
                return True
        return False

    for x in range(G.nx):
        augment(x, set())
    return {x: y for y, x in match_y.items()}


def hall_perfect_matching(G: BipartiteGraph) -> dict[int, int]:
    """Perfect matching of a balanced bipartite graph with minimum degree at least n/2."""
    if G.nx != G.ny:
        raise ParameterError(f"parts have sizes {G.nx} and {G.ny}")
    n = G.nx
    if n and 2 * G.min_degree() < n:
        raise ParameterError(f"minimum degree {G.min_degree()} is below n/2 = {n / 2}")
    M = maximum_matching(G)
    assert len(M) == n, "Hall's condition holds, so the matching must be perfect"
    return M


FamilyLike = Union[BipartiteGraph, frozenset, set, Callable[[int, int], bool]]


def _as_predicate(F: FamilyLike) -> Callable[[int, int], bool]:
    if isinstance(F, BipartiteGraph):
        return lambda x, y, _e=F.edges: (x, y) in _e
    if isinstance(F, (set, frozenset)):
        return lambda x, y, _e=F: (x, y) in _e
    if callable(F):
        return F
    raise ParameterError(f"unsupported family member {type(F).__name__}")


@dataclass(frozen=True)
class RandomMatching:
    matching: dict[int, int]
    counts: tuple[int, ...]
    order: tuple[int, ...]
    greedy_steps: int
    hall_bound_met: bool


def random_matching_with_families(
    H: BipartiteGraph,
    families: Sequence[FamilyLike],
    beta=Fraction(1, 10),
    seed: int = 0,
    eps=None,
) -> RandomMatching:
    """Random greedy matching of a (1-beta) fraction of X, completed by augmenting paths.

    X is visited in a permutation drawn from the seed (recorded in ``order``).
    With ``eps`` the density hypotheses on H and on every explicit family are checked.
    """
    if H.nx != H.ny:
        raise ParameterError(f"parts have sizes {H.nx} and {H.ny}")
    n = H.nx
    beta = as_fraction(beta)
    if not 0 <= beta <= 1:
        raise ParameterError(f"beta must lie in [0, 1], got {beta}")
    if eps is not None:
        eps = as_fraction(eps)
        if H.min_degree() < (1 - eps) * n:
            raise ParameterError(f"minimum degree {H.min_degree()} is below (1-eps)n = {(1 - eps) * n}")
        for i, F in enumerate(families):
            if isinstance(F, (BipartiteGraph, set, frozenset)):
                es = F.edges if isinstance(F, BipartiteGraph) else F
                if len(es) < (1 - eps) * n * n:
                    raise ParameterError(f"family {i} has {len(es)} < (1-eps)n^2 edges")
                if not set(es) <= H.edges:
                    raise ParameterError(f"family {i} is not a subgraph of H")
    rng = derive_rng("random-matching", seed)
    order = list(range(n))
    rng.shuffle(order)
    m = int((1 - beta) * n)
    used = 0
    M: dict[int, int] = {}
    for x in order[:m]:
        free = _bits(H.neighbours_x(x) & ~used)
        if not free:
            raise SearchExhausted(f"greedy step starved at X-vertex {x}; the degree hypothesis fails")
        y = rng.choice(free)
        M[x] = y
        used |= 1 << y
    rest_x = order[m:]
    rest_y = [y for y in range(n) if not (used >> y) & 1]
    sub = H.induced(rest_x, rest_y)
    hall_ok = 2 * sub.min_degree() >= len(rest_x) if rest_x else True
    tail = maximum_matching(sub)
    if len(tail) != len(rest_x):
        raise SearchExhausted(f"remaining {len(rest_x)} vertices admit only {len(tail)} matched pairs")
    for xi, yi in tail.items():
        M[rest_x[xi]] = rest_y[yi]
    preds = [_as_predicate(F) for F in families]
    counts = tuple(sum(1 for x, y in M.items() if p(x, y)) for p in preds)
    return RandomMatching(M, counts, tuple(order), m, hall_ok)


def is_perfect_matching(H: BipartiteGraph, M: dict[int, int]) -> bool:
    return (
        H.nx == H.ny
        and sorted(M) == list(range(H.nx))
        and len(set(M.values())) == H.ny
        and all((x, y) in H.edges for x, y in M.items())
    )


# -- k-partite -------------------------------------------------------------------------


@dataclass
class KPartiteMatching:
    edges: list[tuple[int, ...]]  # one vertex per part, in part order
    counts: tuple[int, ...]
    levels: list[list[tuple[int, ...]]] = field(default_factory=list)
    level_min_degree: dict[int, int] = field(default_factory=dict)


def _covered(F) -> set[int]:
    if hasattr(F, "covered_mask"):
        return set(_bits(F.covered_mask))
    return set(range(F.n))


def check_cross_codegree(H, parts: Sequence[Sequence[int]], eps) -> None:
    """Every supported set S disjoint from X_i extends into at least (1-eps)|X_i| vertices of X_i."""
    eps = as_fraction(eps)
    n = len(parts[0])
    part_of = {v: i for i, p in enumerate(parts) for v in p}
    k = len(parts)
    for size in range(1, k):
        for S in H.supported_sets(size):
            used = {part_of[v] for v in S}
            for i in range(k):
                if i in used:
                    continue
                d = sum(1 for x in parts[i] if H.is_supported(tuple(sorted(S + (x,)))))
                if d < (1 - eps) * n:
                    raise ParameterError(f"supported set {S} reaches only {d} vertices of part {i}")


def kpartite_matching(
    H,
    parts: Sequence[Sequence[int]],
    families: Sequence = (),
    seed: int = 0,
    beta=Fraction(1, 10),
    eps=None,
    audit_levels: bool = True,
) -> KPartiteMatching:
    """Perfect matching of a balanced k-partite k-graph built one part at a time.

    ``H`` and each family member need ``is_supported`` on sorted tuples and
    ``has_edge``. Counts report |M ∩ E(F)| for every family member. With
    ``audit_levels`` off, intermediate levels only track H and the families
    are queried on full edges alone.
    """
    k = len(parts)
    if k < 2:
        raise ParameterError("need at least two parts")
    sizes = {len(p) for p in parts}
    if len(sizes) != 1:
        raise ParameterError(f"part sizes differ: {[len(p) for p in parts]}")
    n = sizes.pop()
    flat = [v for p in parts for v in p]
    if len(set(flat)) != len(flat):
        raise ParameterError("parts overlap")
    for v in flat:
        if not H.is_supported((v,)):
            raise ParameterError(f"vertex {v} is isolated")
    if eps is not None:
        check_cross_codegree(H, parts, eps)
        for F in families:
            check_cross_codegree(F, parts, eps)

    def key(S):
        return tuple(sorted(S))

    fams = list(families)
    M: list[tuple[int, ...]] = [(x,) for x in parts[0]]
    out = KPartiteMatching([], (), [list(M)])
    for i in range(1, k):
        X = list(parts[i])
        last = i == k - 1
        test = (lambda F, s: F.has_edge(s)) if last else (lambda F, s: F.is_supported(s))
        edges = frozenset(
            (a, b) for a, S in enumerate(M) for b, x in enumerate(X) if test(H, key(S + (x,)))
        )
        T = BipartiteGraph(n, n, edges)
        delta = T.min_degree()
        out.level_min_degree[i + 1] = delta
        if delta < int((1 - as_fraction(beta)) * n):
            raise ParameterError(
                f"level {i + 1}: auxiliary bipartite graph has minimum degree {delta} < (1-beta)n"
            )
        preds: list[Callable[[int, int], bool]] = []
        if not last:
            later = set(v for p in parts[i + 1:] for v in p)
            for F in (fams + [H]) if audit_levels else [H]:
                for v in sorted(_covered(F) & later):
                    preds.append(
                        lambda a, b, F=F, v=v: (a, b) in edges and F.is_supported(key(M[a] + (X[b], v)))
                    )
        else:
            for F in fams:
                preds.append(lambda a, b, F=F: (a, b) in edges and F.has_edge(key(M[a] + (X[b],))))
        res = random_matching_with_families(T, preds, beta=beta, seed=seed * 1000 + i)
        M = [M[a] + (X[b],) for a, b in sorted(res.matching.items())]
        out.levels.append(list(M))
        if last:
            out.counts = res.counts
    out.edges = M
    if not all(H.has_edge(key(e)) for e in M):
        raise AssertionError("matching contains a non-edge")
    return out


def verify_kpartite_matching(H, parts, result: KPartiteMatching) -> bool:
    n = len(parts[0])
    for i, level in enumerate(result.levels):
        flat = [v for S in level for v in S]
        if len(level) != n or len(set(flat)) != len(flat):
            return False
        for S in level:
            if len(S) != i + 1 or any(S[j] not in parts[j] for j in range(i + 1)):
                return False
            if not H.is_supported(tuple(sorted(S))):
                return False
    return all(H.has_edge(tuple(sorted(e))) for e in result.edges)


# -- digraphs ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset

    def __post_init__(self):
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"arc ({u}, {v}) leaves the vertex set")
        object.__setattr__(self, "arcs", arcs)
        out = [0] * self.n
        inn = [0] * self.n
        for u, v in arcs:
            out[u] |= 1 << v
            inn[v] |= 1 << u
        object.__setattr__(self, "_out", tuple(out))
        object.__setattr__(self, "_in", tuple(inn))

    def out_mask(self, v: int) -> int:
        return self._out[v]

    def in_mask(self, v: int) -> int:
        return self._in[v]

    def min_semidegree(self) -> int:
        if not self.n:
            return 0
        return min(min(bin(m).count("1") for m in self._out), min(bin(m).count("1") for m in self._in))


def verify_directed_cycle(D: Digraph, cycle: Sequence[int]) -> bool:
    cyc = list(cycle)
    if len(cyc) != D.n or sorted(cyc) != list(range(D.n)) or D.n < 2:
        return False
    return all((cyc[i], cyc[(i + 1) % D.n]) in D.arcs for i in range(D.n))


def _insertion_heuristic(D: Digraph, rng: random.Random, tries: int = 20) -> list[int] | None:
    n = D.n
    for _ in range(tries):
        # grow a path at both ends, close it, then insert leftovers between arcs
        start = rng.randrange(n)
        path = [start]
        used = 1 << start
        grown = True
        while grown:
            grown = False
            nxt = _bits(D.out_mask(path[-1]) & ~used)
            if nxt:
                v = rng.choice(nxt)
                path.append(v)
                used |= 1 << v
                grown = True
            prv = _bits(D.in_mask(path[0]) & ~used)
            if prv:
                v = rng.choice(prv)
                path.insert(0, v)
                used |= 1 << v
                grown = True
        cyc = None
        for j in range(len(path) - 1, 0, -1):
            if (D.out_mask(path[j]) >> path[0]) & 1:
                cyc = path[: j + 1]
                break
        if cyc is None:
            continue
        left = [v for v in range(n) if v not in set(cyc)]
        progress = True
        while left and progress:
            progress = False
            for v in list(left):
                for i in range(len(cyc)):
                    u, w = cyc[i], cyc[(i + 1) % len(cyc)]
                    if (D.out_mask(u) >> v) & 1 and (D.out_mask(v) >> w) & 1:
                        cyc.insert(i + 1, v)
                        left.remove(v)
                        progress = True
                        break
        if not left:
            return cyc
    return None


def _exact_dfs(D: Digraph, node_limit: int | None) -> list[int] | None:
    n = D.n
    full = (1 << n) - 1
    path = [0]
    nodes = [0]

    def rec(v: int, visited: int) -> bool:
        nodes[0] += 1
        if node_limit is not None and nodes[0] > node_limit:
            raise ResourceError(f"exact search exceeded {node_limit} nodes")
        if visited == full:
            return bool((D.out_mask(v) >> 0) & 1)
        rest = full & ~visited
        for u in _bits(rest):
            if not D.in_mask(u) & (rest | (1 << v)) or not D.out_mask(u) & (rest | 1):
                return False
        for u in _bits(D.out_mask(v) & rest):
            path.append(u)
            if rec(u, visited | (1 << u)):
                return True
            path.pop()
        return False

    return list(path) if rec(0, 1) else None


def directed_hamilton(
    D: Digraph, cap: int = 16, seed: int = 0, node_limit: int | None = None, heuristic: bool = True
) -> tuple[int, ...] | None:
    """Directed Hamilton cycle, or None after exhaustive search.

    Above ``cap`` vertices only semi-degree at least n/2 instances are accepted,
    since a cycle is then guaranteed and the search terminates quickly.
    """
    n = D.n
    if n < 2:
        return None
    guaranteed = 2 * D.min_semidegree() >= n
    if n > cap and not guaranteed:
        raise ResourceError(f"exact mode is capped at {cap} vertices, got {n}")
    if heuristic:
        cyc = _insertion_heuristic(D, derive_rng("dham", seed))
        if cyc is not None:
            assert verify_directed_cycle(D, cyc)
            return tuple(cyc)
    cyc = _exact_dfs(D, node_limit)
    if cyc is None:
        return None
    assert verify_directed_cycle(D, cyc)
    return tuple(cyc)


def random_dense_digraph(n: int, min_semi: int, rng: random.Random, p: float = 0.5) -> Digraph:
    """Random digraph with arc probability p, topped up until the semi-degree bound holds."""
    arcs = {(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p}
    for v in range(n):
        outs = [w for w in range(n) if w != v and (v, w) not in arcs]
        rng.shuffle(outs)
        while sum(1 for w in range(n) if (v, w) in arcs) < min_semi:
            arcs.add((v, outs.pop()))
        ins = [u for u in range(n) if u != v and (u, v) not in arcs]
        rng.shuffle(ins)
        while sum(1 for u in range(n) if (u, v) in arcs) < min_semi:
            arcs.add((ins.pop(), v))
    return Digraph(n, frozenset(arcs))

