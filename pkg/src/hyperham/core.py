"""Hypergraph representation and the counting primitives everything else builds on.

Vertices are the integers ``0..n-1``; an edge is stored as a sorted tuple.
Supported sets, vertex neighbourhoods and degrees are answered from an index
built once per graph, with neighbourhoods kept as integer bitmasks.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, FormatError, ParameterError, ResourceError

Edge = tuple[int, ...]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on ``range(n)`` with a canonical edge set."""

    n: int
    k: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ParameterError(f"vertex count must be a non-negative integer, got {self.n!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ParameterError(f"uniformity must be a positive integer, got {self.k!r}")
        canon = set()
        for e in self.edges:
            t = tuple(sorted(e))
            if len(t) != self.k or len(set(t)) != self.k:
                raise ParameterError(f"edge {tuple(e)} is not a set of {self.k} distinct vertices")
            if t[0] < 0 or t[-1] >= self.n:
                raise ParameterError(f"edge {t} has a vertex outside 0..{self.n - 1}")
            canon.add(t)
        object.__setattr__(self, "edges", frozenset(canon))

    # -- basic views -------------------------------------------------------

    @cached_property
    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return tuple(sorted(vertices)) in self.edges

    @cached_property
    def _index(self) -> dict[Edge, list[int]]:
        # proper subset S of some edge -> [neighbourhood bitmask, number of edges containing S]
        idx: dict[Edge, list[int]] = {}
        k = self.k
        for e in self.edges:
            emask = mask_of(e)
            for size in range(k):
                for sub in itertools.combinations(e, size):
                    slot = idx.get(sub)
                    if slot is None:
                        slot = idx[sub] = [0, 0]
                    slot[0] |= emask & ~mask_of(sub)
                    slot[1] += 1
        return idx

    def is_supported(self, vertices: Iterable[int]) -> bool:
        key = tuple(sorted(vertices))
        if len(key) > self.k or len(set(key)) != len(key):
            return False
        if len(key) == self.k:
            return key in self.edges
        return key in self._index

    def neighbourhood_mask(self, vertices: Iterable[int]) -> int:
        """Bitmask of N¹(S); zero when S is unsupported or already a full edge."""
        key = tuple(sorted(vertices))
        slot = self._index.get(key)
        return slot[0] if slot is not None else 0

    def neighbourhood(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(_bits(self.neighbourhood_mask(vertices)))

    def vertex_codegree(self, vertices: Iterable[int]) -> int:
        return popcount(self.neighbourhood_mask(vertices))

    def degree(self, vertices: Iterable[int]) -> int:
        """Number of edges containing the given set (zero when unsupported)."""
        key = tuple(sorted(vertices))
        if len(key) == self.k:
            return 1 if key in self.edges else 0
        slot = self._index.get(key)
        return slot[1] if slot is not None else 0

    def supported_sets(self, size: int) -> list[Edge]:
        if size == self.k:
            return self.edge_list
        return sorted(s for s in self._index if len(s) == size)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Bitmask adjacency of the 2-shadow."""
        if self.k < 2:
            return tuple(0 for _ in range(self.n))
        return tuple(self.neighbourhood_mask((v,)) for v in range(self.n))

    @cached_property
    def covered_mask(self) -> int:
        m = 0
        for e in self.edges:
            m |= mask_of(e)
        return m

    def isolated_vertices(self) -> list[int]:
        cov = self.covered_mask
        return [v for v in range(self.n) if not (cov >> v) & 1]

    def complement(self) -> "Hypergraph":
        return Hypergraph(
            self.n,
            self.k,
            frozenset(c for c in itertools.combinations(range(self.n), self.k) if c not in self.edges),
        )

    def with_edges(self, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.k, frozenset(tuple(e) for e in edges))

    def relabel(self, mapping: Mapping[int, int] | Sequence[int], n: int | None = None) -> "Hypergraph":
        """Image under ``mapping``; edges with an unmapped vertex are dropped."""
        get = mapping.get if isinstance(mapping, Mapping) else (lambda v: mapping[v])
        size = self.n if n is None else n
        out = []
        for e in self.edges:
            img = [get(v) for v in e]
            if any(x is None for x in img):
                continue
            out.append(tuple(img))
        return Hypergraph(size, self.k, frozenset(out))

    def induced(self, vertices: Iterable[int]) -> "Hypergraph":
        """Induced subgraph, keeping the original vertex ids."""
        keep = mask_of(vertices)
        return Hypergraph(self.n, self.k, frozenset(e for e in self.edges if mask_of(e) & keep == mask_of(e)))


class ImplicitKPartite:
    """Complete k-partite k-graph answered by part lookups instead of an edge list.

    Needed where the explicit edge set would run into the millions.
    """

    def __init__(self, parts: Sequence[Sequence[int]]):
        self.parts = tuple(tuple(p) for p in parts)
        self.k = len(self.parts)
        self.part_of: dict[int, int] = {}
        for i, p in enumerate(self.parts):
            for v in p:
                if v in self.part_of:
                    raise ParameterError(f"vertex {v} appears in two parts")
                self.part_of[v] = i
        self.n = len(self.part_of)
        if set(self.part_of) != set(range(self.n)):
            raise ParameterError("parts must cover 0..n-1 exactly")

    def is_supported(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        if len(vs) > self.k:
            return False
        seen = set()
        for v in vs:
            p = self.part_of.get(v)
            if p is None or p in seen:
                return False
            seen.add(p)
        return all(self.parts[i] for i in range(self.k))

    def has_edge(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return len(vs) == self.k and self.is_supported(vs)

    @property
    def num_edges(self) -> int:
        return math.prod(len(p) for p in self.parts)

    def materialize(self) -> Hypergraph:
        return Hypergraph(self.n, self.k, frozenset(itertools.product(*self.parts)))


# -- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class CycleParams:
    k: int
    ell: int
    t: int

    @property
    def step(self) -> int:
        """k - ell: the shift between consecutive edges of an ell-cycle."""
        return self.k - self.ell

    def divides(self, n: int) -> bool:
        return n % self.step == 0

    def walk_length_ok(self, r: int) -> bool:
        return r >= self.k and (r - self.k) % self.step == 0


def compute_t(k: int, ell: int) -> CycleParams:
    if not isinstance(k, int) or k < 3:
        raise ParameterError(f"k must be an integer >= 3, got {k!r}")
    if not isinstance(ell, int) or not 1 <= ell <= k - 1:
        raise ParameterError(f"ell must lie in [1, {k - 1}], got {ell!r}")
    step = k - ell
    return CycleParams(k, ell, (k // step) * step)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise ParameterError("tolerances must be exact rationals, not floats")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not a rational: {value!r}") from exc


@dataclass(frozen=True)
class ToleranceConfig:
    eps: Fraction
    mu: Fraction
    mu_prime: Fraction | None = None
    gamma: Fraction | None = None
    delta: Fraction | None = None
    eps_A: Fraction | None = None
    eps_km1: Fraction | None = None

    def __post_init__(self):
        for name in ("eps", "mu", "mu_prime", "gamma", "delta", "eps_A", "eps_km1"):
            val = getattr(self, name)
            if val is None:
                continue
            val = as_fraction(val)
            if not 0 < val < 1:
                raise ParameterError(f"tolerance {name}={val} must lie strictly between 0 and 1")
            object.__setattr__(self, name, val)
        if self.mu <= self.eps:
            raise ParameterError(f"mu={self.mu} must exceed eps={self.eps}")


# -- blow-ups ------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupSpec:
    base: Hypergraph
    parts: tuple[tuple[int, ...], ...]
    gamma: Fraction
    m: int

    @cached_property
    def projection(self) -> dict[int, int]:
        return {w: v for v, part in enumerate(self.parts) for w in part}

    @property
    def size(self) -> int:
        return sum(len(p) for p in self.parts)

    def _in_window(self, size: int, gamma: Fraction, m: int) -> bool:
        return (1 - gamma) * m <= size <= (1 + gamma) * m

    def is_regular(self, gamma=None, m: int | None = None) -> bool:
        g = self.gamma if gamma is None else as_fraction(gamma)
        mm = self.m if m is None else m
        return all(self._in_window(len(p), g, mm) for p in self.parts)

    def is_nearly_regular(self, gamma=None, m: int | None = None) -> bool:
        g = self.gamma if gamma is None else as_fraction(gamma)
        mm = self.m if m is None else m
        bad = [p for p in self.parts if not self._in_window(len(p), g, mm)]
        return len(bad) == 0 or (len(bad) == 1 and len(bad[0]) == 1)


def build_blowup(
    F: Hypergraph,
    sizes: Mapping[int, int] | Sequence[int],
    m: int | None = None,
    gamma=None,
) -> tuple[Hypergraph, BlowupSpec]:
    """Replace each vertex v by an independent set of ``sizes[v]`` fresh vertices.

    Blow-up ids are contiguous per base vertex, in base order.
    """
    size_list = [sizes[v] for v in range(F.n)]
    if any(not isinstance(s, int) or s < 1 for s in size_list):
        raise ParameterError("every blow-up part needs a positive integer size")
    parts = []
    nxt = 0
    for s in size_list:
        parts.append(tuple(range(nxt, nxt + s)))
        nxt += s
    if m is None:
        m = max(1, round(sum(size_list) / len(size_list))) if size_list else 1
    if gamma is None:
        gamma = max((Fraction(abs(s - m), m) for s in size_list), default=Fraction(0))
    edges = []
    for e in F.edges:
        edges.extend(itertools.product(*(parts[v] for v in e)))
    G = Hypergraph(nxt, F.k, frozenset(edges))
    return G, BlowupSpec(F, tuple(parts), as_fraction(gamma), m)


# -- shadows and co-degrees -----------------------------------------------------


def shadow(G: Hypergraph, i: int) -> Hypergraph:
    if not 1 <= i <= G.k - 1:
        raise ParameterError(f"shadow level must lie in [1, {G.k - 1}], got {i}")
    return Hypergraph(G.n, i, frozenset(G.supported_sets(i)))


def supported_codegree(G: Hypergraph) -> int | None:
    """Minimum positive co-degree; ``None`` marks the edgeless case."""
    if not G.edges:
        return None
    return min(G.degree(S) for S in G.supported_sets(G.k - 1))


def vertex_neighbourhood(G: Hypergraph, S: Iterable[int]) -> frozenset[int]:
    S = tuple(S)
    if len(S) > G.k - 1:
        raise ParameterError(f"|S|={len(S)} exceeds k-1={G.k - 1}")
    if not G.is_supported(S):
        raise DomainError(f"{S} is not supported")
    return G.neighbourhood(S)


def max_strong_independent_set(G: Hypergraph, exact_limit: int = 48) -> tuple[int, frozenset[int], bool]:
    """Largest vertex set meeting every edge at most once.

    Returns ``(size, witness, exact)``; above ``exact_limit`` vertices only a greedy
    lower bound is computed.
    """
    adj = G.adjacency
    n = G.n
    if n > exact_limit:
        chosen = 0
        cand = (1 << n) - 1
        while cand:
            v = min(_bits(cand), key=lambda u: popcount(adj[u] & cand))
            chosen |= 1 << v
            cand &= ~(adj[v] | (1 << v))
        return popcount(chosen), frozenset(_bits(chosen)), False

    best = [0, 0]

    def rec(cand: int, cur: int, size: int):
        # vertices with at most one neighbour left are always safe to take
        while True:
            forced = 0
            for v in _bits(cand):
                if popcount(adj[v] & cand) <= 1:
                    forced = v + 1
                    break
            if not forced:
                break
            v = forced - 1
            cur |= 1 << v
            size += 1
            cand &= ~(adj[v] | (1 << v))
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, cur
            return
        if size + popcount(cand) <= best[0]:
            return
        v = max(_bits(cand), key=lambda u: popcount(adj[u] & cand))
        rec(cand & ~(adj[v] | (1 << v)), cur | (1 << v), size + 1)
        rec(cand & ~(1 << v), cur, size)

    rec((1 << n) - 1, 0, 0)
    return best[0], frozenset(_bits(best[1])), True


def is_strong_independent(G: Hypergraph, vertices: Iterable[int]) -> bool:
    m = mask_of(vertices)
    return all(popcount(mask_of(e) & m) <= 1 for e in G.edges)


def check_special_vertex_property(W: Sequence[int], params: CycleParams) -> bool:
    """Every cyclic edge window holds exactly one position j (1-based) with t | j."""
    r = len(W)
    if r == 0 or r % params.step:
        raise ParameterError(f"sequence length {r} is not a positive multiple of {params.step}")
    for s in range(r // params.step):
        start = s * params.step
        positions = {(start + j) % r for j in range(params.k)}
        if sum(1 for p in positions if (p + 1) % params.t == 0) != 1:
            return False
    return True


# -- extremal / non-extremal classification ------------------------------------------


@dataclass(frozen=True)
class ClassVerdict:
    status: str  # "member", "non-member", "inconclusive"
    reason: str
    witness: tuple[int, ...] | None = None


def pairs_within(G: Hypergraph, vertices: Iterable[int]) -> int:
    m = mask_of(vertices)
    adj = G.adjacency
    return sum(popcount(adj[v] & m) for v in _bits(m)) // 2


def classify_non_extremal(
    G: Hypergraph,
    params: CycleParams,
    tol: ToleranceConfig,
    mode: str = "exact",
    cap: int = 10**7,
) -> ClassVerdict:
    n = G.n
    if n % params.step:
        return ClassVerdict("non-member", f"n={n} is not divisible by k-ell={params.step}")
    iso = G.isolated_vertices()
    if iso:
        return ClassVerdict("non-member", f"isolated vertex {iso[0]}", (iso[0],))
    dstar = supported_codegree(G)
    need = (1 - Fraction(1, params.t) - tol.eps) * n
    if dstar is None or dstar < need:
        return ClassVerdict("non-member", f"supported co-degree {dstar} below {need}")
    size = n // params.t
    threshold = tol.mu * n * n
    if mode == "exact":
        if math.comb(n, size) > cap:
            raise ResourceError(f"C({n},{size}) subsets exceed the exact cap {cap}")
        for U in itertools.combinations(range(n), size):
            if pairs_within(G, U) < threshold:
                return ClassVerdict("non-member", f"subset spans fewer than {threshold} supported pairs", U)
        return ClassVerdict("member", "every floor(n/t)-subset is dense enough")
    if mode == "sufficient":
        if tol.mu_prime is None:
            raise ParameterError("sufficient mode needs tol.mu_prime")
        high = (1 - Fraction(1, params.t) + 3 * tol.mu_prime * params.t) * n
        full = (1 << n) - 1
        adj = G.adjacency
        for v in range(n):
            if popcount(adj[v]) >= high:
                continue
            rest = full & ~adj[v]
            if pairs_within(G, _bits(rest)) >= threshold:
                continue
            return ClassVerdict("inconclusive", f"vertex {v} passes neither branch of the per-vertex test", (v,))
        return ClassVerdict("member", f"per-vertex test certifies density mu_prime={tol.mu_prime}")
    raise ParameterError(f"unknown mode {mode!r}")


def find_sparse_set(G: Hypergraph, size: int, seed: int = 0, restarts: int = 8) -> tuple[tuple[int, ...], int]:
    """Heuristic search for a ``size``-set spanning few supported pairs.

    Each restart grows a set greedily (fewest chosen neighbours first) and then
    applies improving single-vertex swaps. Returns the best set and its pair count.
    """
    import random

    adj = G.adjacency
    n = G.n
    rng = random.Random(seed)
    best: tuple[tuple[int, ...], int] | None = None
    for attempt in range(restarts):
        pool = list(range(n))
        if attempt:
            rng.shuffle(pool)
        else:
            pool.sort(key=lambda v: popcount(adj[v]))
        rank = {v: i for i, v in enumerate(pool)}
        chosen = 0
        cur: list[int] = []
        while len(cur) < size:
            v = min(pool, key=lambda u: (popcount(adj[u] & chosen), rank[u]))
            pool.remove(v)
            cur.append(v)
            chosen |= 1 << v
        improved = True
        while improved:
            improved = False
            for idx, u in enumerate(cur):
                cu = popcount(adj[u] & chosen)
                rest = chosen & ~(1 << u)
                for w in range(n):
                    if (chosen >> w) & 1:
                        continue
                    if popcount(adj[w] & rest) < cu:
                        chosen = rest | (1 << w)
                        cur[idx] = w
                        improved = True
                        break
                if improved:
                    break
        score = pairs_within(G, cur)
        if best is None or score < best[1]:
            best = (tuple(sorted(cur)), score)
    assert best is not None
    return best


def codeg_to_deg_bound_check(G: Hypergraph) -> bool:
    dstar = supported_codegree(G)
    if dstar is None:
        raise DomainError("the bound is stated for graphs with at least one edge")
    for size in range(1, G.k):
        bound = Fraction(dstar ** (G.k - size), math.factorial(G.k - size))
        for S in G.supported_sets(size):
            if G.degree(S) < bound:
                return False
    return True


# -- serialization ---------------------------------------------------------------


def hypergraph_to_json(G: Hypergraph) -> dict:
    return {"k": G.k, "n": G.n, "edges": [list(e) for e in G.edge_list]}


def hypergraph_from_json(obj) -> Hypergraph:
    if not isinstance(obj, dict):
        raise FormatError("top level: expected an object with keys k, n, edges")
    for key in ("k", "n", "edges"):
        if key not in obj:
            raise FormatError(f"top level: missing key {key!r}")
    k, n, edges = obj["k"], obj["n"], obj["edges"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise FormatError(f"k: expected a positive integer, got {k!r}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError(f"n: expected a non-negative integer, got {n!r}")
    if not isinstance(edges, list):
        raise FormatError("edges: expected a list")
    seen = set()
    for i, e in enumerate(edges):
        if not isinstance(e, list):
            raise FormatError(f"edges[{i}]: expected a list of vertex ids")
        if len(e) != k:
            raise FormatError(f"edges[{i}]: expected {k} vertices, got {len(e)}")
        for j, v in enumerate(e):
            if not isinstance(v, int) or isinstance(v, bool):
                raise FormatError(f"edges[{i}][{j}]: vertex id must be an integer, got {v!r}")
            if not 0 <= v < n:
                raise FormatError(f"edges[{i}][{j}]: vertex {v} outside 0..{n - 1}")
            if j and v <= e[j - 1]:
                raise FormatError(f"edges[{i}][{j}]: vertices must be strictly increasing")
        t = tuple(e)
        if t in seen:
            raise FormatError(f"edges[{i}]: duplicate edge {e}")
        seen.add(t)
    return Hypergraph(n, k, frozenset(seen))


def loads_hypergraph(text: str) -> Hypergraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return hypergraph_from_json(obj)


def dumps_hypergraph(G: Hypergraph) -> str:
    return json.dumps(hypergraph_to_json(G), separators=(",", ":"))


def read_hypergraph(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return loads_hypergraph(fh.read())


def write_hypergraph(G: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_hypergraph(G))
        fh.write("\n")


def shadow_to_dot(G: Hypergraph, name: str = "shadow") -> str:
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in range(G.n))
    if G.k >= 2:
        for u, v in G.supported_sets(2):
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
