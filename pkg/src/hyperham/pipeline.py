"""Desk-scale construction of a Hamilton ell-cycle in a near-extremal k-graph.

Stages: decompose the vertex set into a sparse side A' and a dense side B',
cover A' by short path pieces so that the leftover of B' balances them, build
the auxiliary t-partite graph G+, take a random perfect matching of G+, and
link the matched pieces along a directed Hamilton cycle of the transition
digraph. Asymptotic inequalities are measured and reported, never assumed.
Every emitted cycle is re-verified from scratch.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cleaning import clean_dense
from .constructions import gen_weak_lower_bound
from .core import (
    CycleParams,
    Hypergraph,
    ToleranceConfig,
    _bits,
    classify_non_extremal,
    find_sparse_set,
    mask_of,
    pairs_within,
    popcount,
    supported_codegree,
)
from .errors import DomainError, ParameterError, ResourceError, SearchExhausted, StageFailure
from .matchings import Digraph, derive_rng, directed_hamilton, kpartite_matching
from .walks import (
    assemble_cycle_from_segments,
    verify_ell_cycle,
    verify_supports_ell_path,
    verify_supports_extended_ell_path,
)

DESK_TOLERANCE = ToleranceConfig(
    eps=Fraction(1, 50), mu=Fraction(1, 4), eps_A=Fraction(1, 4), eps_km1=Fraction(1, 8)
)


def required_codegree(n: int, params: CycleParams) -> int:
    return n - n // params.t - (params.k - 3)


# -- synthetic instances ----------------------------------------------------------


def synthetic_near_extremal(k: int, ell: int, n: int, seed: int = 0) -> tuple[Hypergraph, tuple[int, ...]]:
    """Weak lower-bound graph with A split into small blocks that are filled in.

    A is cut into blocks of size 3 (a few of size 4 or 5 when |A| is not a
    multiple of 3), and every k-set meeting A in 2 or 3 vertices of one block is
    added. Supported sets touching a block now reach one more A-vertex, which
    lifts the supported co-degree to n - floor(n/t) - (k-3); it is exact as soon
    as one block has size 3. Vertex labels are shuffled by the seed.
    Returns the graph and the image of A.
    """
    base = gen_weak_lower_bound(k, ell, n)
    rng = derive_rng("synthetic", seed)
    A = list(base.A)
    if len(A) < 3:
        raise ParameterError(f"|A|={len(A)} is too small to fill in")
    rng.shuffle(A)
    q, rem = divmod(len(A), 3)
    sizes = [3] * q
    if rem == 1:
        sizes[-1] = 4
    elif rem == 2:
        if q >= 2:
            sizes[-1] = sizes[-2] = 4
        else:
            sizes[-1] = 5
    blocks, i = [], 0
    for size in sizes:
        blocks.append(A[i:i + size])
        i += size
    edges = set(base.graph.edges)
    for block in blocks:
        for j in (2, 3):
            if j > k:
                continue
            for inside in itertools.combinations(block, j):
                for core in itertools.combinations(base.B, k - j):
                    edges.add(tuple(sorted(core + inside)))
    perm = list(range(n))
    rng.shuffle(perm)
    G = Hypergraph(n, k, frozenset(tuple(perm[v] for v in e) for e in edges))
    dstar = supported_codegree(G)
    need = required_codegree(n, base.params)
    if dstar is None or dstar < need or (3 in sizes and dstar != need):
        raise AssertionError(f"synthetic instance has supported co-degree {dstar}, expected {need}")
    return G, tuple(sorted(perm[a] for a in base.A))


# -- decomposition ----------------------------------------------------------------


@dataclass
class ExtremalDecomposition:
    A: tuple[int, ...]
    A_prime: tuple[int, ...]
    B_prime: tuple[int, ...]
    F_B_plus: Hypergraph  # (k-1)-graph on local ids 0..|B|-1
    b_index: tuple[int, ...]  # local id -> vertex of G
    witness: tuple[int, ...]
    moved: tuple[int, ...]
    diagnostics: dict = field(default_factory=dict)

    def fb_supported(self, vertices: Sequence[int]) -> bool:
        local = {v: i for i, v in enumerate(self.b_index)}
        try:
            ids = [local[v] for v in vertices]
        except KeyError:
            return False
        return self.F_B_plus.is_supported(ids)

    @property
    def x(self) -> int:
        return self.diagnostics["x"]


def _tolerances(tol: ToleranceConfig) -> tuple[Fraction, Fraction]:
    if tol.eps_A is None or tol.eps_km1 is None:
        raise ParameterError("decomposition needs tol.eps_A and tol.eps_km1")
    return tol.eps_A, tol.eps_km1


def find_extremal_witness(G: Hypergraph, params: CycleParams, eps, seed: int = 0) -> tuple[int, ...]:
    size = G.n // params.t
    U, pairs = find_sparse_set(G, size, seed=seed)
    if pairs > eps * G.n * G.n:
        raise DomainError(f"best {size}-set found spans {pairs} supported pairs > eps*n^2 = {eps * G.n * G.n}")
    return U


def decompose_extremal(
    G: Hypergraph,
    params: CycleParams,
    tol: ToleranceConfig,
    witness: Sequence[int] | None = None,
    seed: int = 0,
    clean_mu=None,
    enforce_codegree: bool = True,
) -> ExtremalDecomposition:
    n, k = G.n, G.k
    eps_A, eps_km1 = _tolerances(tol)
    mu = tol.mu
    clean_mu = mu / 2 if clean_mu is None else Fraction(clean_mu)
    if enforce_codegree:
        dstar = supported_codegree(G)
        need = required_codegree(n, params)
        if dstar is None or dstar < need:
            raise ParameterError(f"supported co-degree {dstar} is below n - floor(n/t) - (k-3) = {need}")
    if witness is None:
        witness = find_extremal_witness(G, params, tol.eps, seed)
    witness = tuple(sorted(witness))
    if len(witness) != n // params.t:
        raise ParameterError(f"witness must have floor(n/t) = {n // params.t} vertices")
    if pairs_within(G, witness) > tol.eps * n * n:
        raise DomainError("witness spans more than eps*n^2 supported pairs")

    # vertices with many supported partners inside A move to B
    amask = mask_of(witness)
    adj = G.adjacency
    moved = tuple(u for u in witness if popcount(adj[u] & amask) >= eps_A * n / 2)
    A = tuple(u for u in witness if u not in moved)
    amask = mask_of(A)
    B = tuple(v for v in range(n) if not (amask >> v) & 1)

    # A-rich (k-1)-sets inside B, cleaned with clean_mu
    local = {v: i for i, v in enumerate(B)}
    rich = []
    bset = set(B)
    for S in G.supported_sets(k - 1):
        if set(S) <= bset and popcount(G.neighbourhood_mask(S) & amask) > len(A) - eps_km1 * n:
            rich.append(tuple(local[v] for v in S))
    Fp = Hypergraph(len(B), k - 1, frozenset(rich))
    rep = clean_dense(Fp, clean_mu)
    F_plus = rep.output
    B_prime = tuple(B[i] for i in rep.kept_vertices)
    if not B_prime:
        raise StageFailure("decomposition", "cleaning removed every vertex of B", {"rich_sets": len(rich)})
    bp_mask = mask_of(B_prime)
    A_prime = tuple(v for v in range(n) if not (bp_mask >> v) & 1)

    diag: dict = {
        "rich_sets": len(rich),
        "rich_fraction": Fraction(len(rich), math.comb(len(B), k - 1)) if len(B) >= k - 1 else Fraction(0),
        "clean_mu": clean_mu,
        "mu": mu,
        "size_A": len(A),
        "size_A_prime": len(A_prime),
        "x": len(A_prime) - n // params.t,
    }
    # property audits
    lo, hi = Fraction(n, params.t) - mu * n, Fraction(n, params.t) + mu * n
    diag["ii_sizes_ok"] = lo <= len(A) <= hi and lo <= len(A_prime) <= hi
    worst = None
    for size in range(1, k):
        for S in G.supported_sets(size):
            if not mask_of(S) & amask:
                continue
            d = popcount(G.neighbourhood_mask(S) & bp_mask)
            slack = d - (len(B_prime) - mu * n)
            if worst is None or slack < worst:
                worst = slack
    diag["iii_margin"] = worst
    fstar = supported_codegree(F_plus)
    diag["iv_codegree"] = fstar
    diag["iv_codegree_margin"] = None if fstar is None else fstar - (1 - mu) * len(B_prime)
    richest = min(
        (popcount(G.neighbourhood_mask(tuple(B[i] for i in S)) & amask) for S in F_plus.edges), default=None
    )
    diag["iv_rich_margin"] = None if richest is None else richest - (len(A) - mu * n)
    diag["iv_no_isolated"] = set(rep.kept_vertices) == set(_bits(F_plus.covered_mask))
    return ExtremalDecomposition(A, A_prime, B_prime, F_plus, B, witness, moved, diag)


# -- cherries ----------------------------------------------------------------------


def find_cherries(H: Hypergraph, A: Sequence[int], x: int, strict: bool = True) -> list[tuple[int, int, int]]:
    """x-1 vertex-disjoint cherries (leaf, centre, leaf) of the graph H with both leaves in A.

    A maximal packing is grown greedily and improved by replacing one cherry with
    two. ``strict`` enforces the degree and size hypotheses that guarantee success.
    """
    if H.k != 2:
        raise ParameterError("cherries live in a 2-graph")
    if x < 1:
        raise ParameterError("x must be at least 1")
    n = H.n
    adj = H.adjacency
    if strict:
        mindeg = min(popcount(m) for m in adj) if n else 0
        if mindeg < x:
            raise ParameterError(f"minimum degree {mindeg} is below x={x}")
        if not len(A) > Fraction(n, 2) + Fraction(9 * x, 2):
            raise ParameterError(f"|A|={len(A)} does not exceed n/2 + 9x/2 = {Fraction(n, 2) + Fraction(9 * x, 2)}")
    need = x - 1
    amask = mask_of(A)
    cherries: list[tuple[int, int, int]] = []

    def grab(free: int, centres) -> tuple[int, int, int] | None:
        for c in centres:
            if not (free >> c) & 1:
                continue
            leaves = _bits(adj[c] & amask & free & ~(1 << c))
            if len(leaves) >= 2:
                return (leaves[0], c, leaves[1])
        return None

    while len(cherries) < need:
        used = 0
        for ch in cherries:
            used |= mask_of(ch)
        free = ((1 << n) - 1) & ~used
        new = grab(free, range(n))
        if new is not None:
            cherries.append(new)
            continue
        improved = False
        for idx, ch in enumerate(cherries):
            pool = free | mask_of(ch)
            first = grab(pool, ch)
            if first is None:
                continue
            second = grab(pool & ~mask_of(first), ch)
            if second is not None:
                cherries[idx:idx + 1] = [first, second]
                improved = True
                break
        if not improved:
            raise SearchExhausted(f"found only {len(cherries)} of {need} disjoint cherries with leaves in A")
    return cherries[:need]


# -- path system -------------------------------------------------------------------


@dataclass
class PathSystem:
    sequences: list[tuple[int, ...]]
    covered_A: int
    covered_B: int
    diagnostics: dict = field(default_factory=dict)


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceError("search node budget exhausted")


def _tight_next(G: Hypergraph, seq: Sequence[int], forward: bool) -> int:
    k = G.k
    if forward:
        tail = tuple(seq[-(k - 1):])
    else:
        tail = tuple(seq[:k - 1])
    return G.neighbourhood_mask(tail)


def _grow(G, seq, count, forward, allowed: int, budget: _Budget, accept) -> tuple[int, ...] | None:
    """Extend ``seq`` by ``count`` vertices from ``allowed`` keeping it a tight path."""
    if count == 0:
        return tuple(seq) if accept(tuple(seq)) else None
    budget.tick()
    cand = _tight_next(G, seq, forward) & allowed
    for v in _bits(cand):
        nxt = list(seq) + [v] if forward else [v] + list(seq)
        out = _grow(G, nxt, count - 1, forward, allowed & ~(1 << v), budget, accept)
        if out is not None:
            return out
    return None


def _extend_cherry(G, dec, cherry, params, free_b: int, budget) -> tuple[int, ...] | None:
    u1, u2, u3 = cherry
    t = params.t

    def rec(vs: list[int], allowed: int):
        if len(vs) == t - 2:
            seq = (u1, u2) + tuple(vs) + (u3,)
            return seq if verify_supports_extended_ell_path(G, seq, params) else None
        budget.tick()
        cand = G.neighbourhood_mask((u1, u2) + tuple(vs)) & G.neighbourhood_mask((u2, u3) + tuple(vs)) & allowed
        for v in _bits(cand):
            out = rec(vs + [v], allowed & ~(1 << v))
            if out is not None:
                return out
        return None

    return rec([], free_b)


def _s_a(G, dec, a, params, free_b: int, free_a: int, budget) -> tuple[int, ...] | None:
    """a1 v_1..v_{t-1} a u_1..u_{t-1} a2 supporting an extended ell-path."""
    t = params.t

    def finish(core: tuple[int, ...]):
        vs, us = core[: t - 1], core[t:]
        if not (dec.fb_supported(vs) and dec.fb_supported(us)):
            return False
        return True

    def after_u(right: tuple[int, ...]):
        # right = a u_1..u_{t-1}; now grow v_{t-1}..v_1 in front
        def accept(core):
            if not finish(core):
                return False
            vs, us = core[: t - 1], core[t:]
            for a1 in _bits(G.neighbourhood_mask(vs) & free_a & ~(1 << a)):
                for a2 in _bits(G.neighbourhood_mask(us) & free_a & ~(1 << a) & ~(1 << a1)):
                    seq = (a1,) + core + (a2,)
                    if verify_supports_extended_ell_path(G, seq, params):
                        found.append(seq)
                        return True
            return False

        return _grow(G, list(right), t - 1, False, free_b & ~mask_of(right), budget, accept)

    found: list[tuple[int, ...]] = []

    def accept_right(right):
        if not dec.fb_supported(right[1:]):
            return False
        return after_u(right) is not None

    _grow(G, [a], t - 1, True, free_b, budget, accept_right)
    return found[0] if found else None


def _exceptional(G, dec, length: int, params, free_b: int, free_a: int, budget) -> tuple[int, ...] | None:
    """a1 v_1..v_{length-2} a2 supporting an extended ell-path, ends from free_a."""
    k = G.k
    inner = length - 2
    for a1 in _bits(free_a):
        def accept(seq):
            vs = seq[1:]
            if not dec.fb_supported(vs[-min(inner, k - 1):]):
                return False
            for a2 in _bits(G.neighbourhood_mask(vs[-(k - 1):]) & free_a & ~(1 << a1)):
                cand = seq + (a2,)
                if verify_supports_extended_ell_path(G, cand, params):
                    found.append(cand)
                    return True
            return False

        found: list[tuple[int, ...]] = []
        _grow(G, [a1], inner, True, free_b, budget, accept)
        if found:
            return found[0]
    return None


def build_path_system(
    G: Hypergraph,
    dec: ExtremalDecomposition,
    params: CycleParams,
    tol: ToleranceConfig,
    strict_cherries: bool = False,
    node_budget: int = 200_000,
) -> PathSystem:
    n, t = G.n, params.t
    if t < 3:
        raise ParameterError("balancing needs t >= 3, so (k, ell) = (3, 1) is excluded")
    budget = _Budget(node_budget)
    A, A_prime, B_prime = set(dec.A), set(dec.A_prime), set(dec.B_prime)
    x = len(A_prime) - n // t
    diag: dict = {"x": x}
    seqs: list[tuple[int, ...]] = []
    bfree = mask_of(B_prime)
    if x > 0:
        shadow2 = Hypergraph(
            n, 2, frozenset(p for p in itertools.combinations(sorted(A_prime), 2) if G.is_supported(p))
        )
        local = sorted(A_prime)
        pos = {v: i for i, v in enumerate(local)}
        H = shadow2.relabel(pos, len(local))
        try:
            cherries = find_cherries(H, [pos[a] for a in sorted(A)], x + 1, strict=strict_cherries)
        except (ParameterError, SearchExhausted) as exc:
            raise StageFailure("path-system", f"cherries: {exc}", {"x": x}) from exc
        cherries = [tuple(local[i] for i in ch) for ch in cherries]
        for ch in cherries:
            ext = _extend_cherry(G, dec, ch, params, bfree, budget)
            if ext is None:
                raise StageFailure("path-system", f"no disjoint extension for cherry {ch}", {"x": x})
            seqs.append(ext)
            bfree &= ~mask_of(ext)
        diag["cherries"] = len(cherries)
    in_seqs = set(v for s in seqs for v in s)
    singles = [v for v in sorted(A_prime) if v not in in_seqs]
    diag["p_prime_balance"] = len(B_prime - in_seqs) - (t - 1) * (len(singles) + len(seqs))

    # S_a for singletons outside A
    A0 = [v for v in singles if v not in A]
    afree = mask_of(v for v in singles if v in A)
    for a in A0:
        try:
            S_a = _s_a(G, dec, a, params, bfree, afree, budget)
        except ResourceError as exc:
            raise StageFailure("path-system", f"extension of {a}: {exc}", {"A0": len(A0)}) from exc
        if S_a is None:
            raise StageFailure("path-system", f"no extension sequence through {a}", {"A0": len(A0)})
        seqs.append(S_a)
        bfree &= ~mask_of(S_a)
        afree &= ~mask_of(S_a)
    diag["A0"] = len(A0)
    used = set(v for s in seqs for v in s)
    singles = [v for v in singles if v not in used]
    count = len(seqs) + len(singles)
    r = len(B_prime - used) - (t - 1) * count
    diag["r"] = r
    if r < 0 or r % params.step:
        raise StageFailure("path-system", f"balance r={r} is negative or not divisible by k-ell", {"r": r})
    try:
        S = _exceptional(G, dec, r + t + 1, params, bfree, afree, budget)
    except ResourceError as exc:
        raise StageFailure("path-system", f"exceptional sequence: {exc}", {"r": r}) from exc
    if S is None:
        raise StageFailure("path-system", f"no exceptional sequence of length {r + t + 1}", {"r": r})
    seqs.append(S)
    used |= set(S)
    singles = [v for v in singles if v not in used]
    all_seqs = sorted(seqs + [(v,) for v in singles])
    ps = PathSystem(
        all_seqs,
        sum(1 for s in all_seqs for v in s if v in A_prime),
        sum(1 for s in all_seqs for v in s if v in B_prime),
        diag,
    )
    checks = verify_path_system(G, dec, ps, params, tol)
    ps.diagnostics.update(checks)
    hard = [name for name in ("P1", "P2", "P5", "P6", "disjoint", "supports") if not checks[name]]
    if hard:
        raise AssertionError(f"path system violates {hard}")
    return ps


def verify_path_system(G: Hypergraph, dec: ExtremalDecomposition, ps: PathSystem, params, tol) -> dict:
    n, t, mu = G.n, params.t, tol.mu
    A, A_prime, B_prime = set(dec.A), set(dec.A_prime), set(dec.B_prime)
    flat = [v for s in ps.sequences for v in s]
    covered = set(flat)
    out = {
        "disjoint": len(flat) == len(covered),
        "P1": all(s[0] in A and s[-1] in A for s in ps.sequences),
        "P2": A_prime <= covered,
        "P5": (t - 1) * len(ps.sequences) == len(B_prime - covered),
        "P6": all(len(s) == 1 or len(s) >= t + 1 for s in ps.sequences),
        "supports": all(len(s) == 1 or verify_supports_extended_ell_path(G, s, params) for s in ps.sequences),
    }
    out["P3_margin"] = len(ps.sequences) - (Fraction(n, t) - 4 * mu * n)
    out["P4_margin"] = (Fraction(n, t) + 4 * t * mu * n) - len(covered)
    return out


# -- auxiliary graph ------------------------------------------------------------------


class TransitionFamily:
    """Lazy subgraph of G+: edges f with ef (or fe) supporting an ell-path."""

    def __init__(self, aux: "AuxiliaryGraph", e: tuple[int, ...], forward: bool):
        self.aux = aux
        self.e = e
        self.forward = forward
        self.n = aux.graph.n

    def has_edge(self, f) -> bool:
        f = tuple(sorted(f))
        if f not in self.aux.graph.edges:
            return False
        return self.aux.links(self.e, f) if self.forward else self.aux.links(f, self.e)

    def is_supported(self, S) -> bool:
        raise NotImplementedError("transition families are only queried on full edges")


@dataclass
class AuxiliaryGraph:
    graph: Hypergraph  # t-partite t-graph on ids 0..t*m-1, part i = [i*m, (i+1)*m)
    parts: tuple[tuple[int, ...], ...]
    B_parts: tuple[tuple[int, ...], ...]
    paths: tuple[tuple[int, ...], ...]
    G: Hypergraph
    dec: ExtremalDecomposition
    params: CycleParams
    audit: dict = field(default_factory=dict)
    _link_cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return len(self.paths)

    def sequence(self, edge: Sequence[int]) -> tuple[int, ...]:
        m = self.m
        e = tuple(sorted(edge))
        bs = tuple(self.B_parts[i][e[i] - i * m] for i in range(len(e) - 1))
        return bs + self.paths[e[-1] - (len(e) - 1) * m]

    def evaluate(self, edge: Sequence[int]) -> bool:
        """Edge predicate of G+ evaluated from scratch."""
        seq = self.sequence(edge)
        bs = seq[: self.params.t - 1]
        return verify_supports_ell_path(self.G, seq, self.params) and self.dec.fb_supported(bs)

    def links(self, e, f) -> bool:
        key = (e, f)
        hit = self._link_cache.get(key)
        if hit is None:
            hit = verify_supports_ell_path(self.G, self.sequence(e) + self.sequence(f), self.params)
            self._link_cache[key] = hit
        return hit

    def plus_family(self, e) -> TransitionFamily:
        return TransitionFamily(self, tuple(sorted(e)), True)

    def minus_family(self, e) -> TransitionFamily:
        return TransitionFamily(self, tuple(sorted(e)), False)


def build_auxiliary(G: Hypergraph, dec: ExtremalDecomposition, ps: PathSystem, params: CycleParams, tol=None) -> AuxiliaryGraph:
    t = params.t
    m = len(ps.sequences)
    if m == 0:
        raise ParameterError("the path system is empty")
    covered = set(v for s in ps.sequences for v in s)
    rest = sorted(set(dec.B_prime) - covered)
    if len(rest) != (t - 1) * m:
        raise ParameterError(f"|B''|={len(rest)} differs from (t-1)|P| = {(t - 1) * m}")
    B_parts = tuple(tuple(rest[i * m:(i + 1) * m]) for i in range(t - 1))
    parts = tuple(tuple(range(i * m, (i + 1) * m)) for i in range(t))
    shell = AuxiliaryGraph(Hypergraph(t * m, t), parts, B_parts, tuple(ps.sequences), G, dec, params)
    edges = [e for e in itertools.product(*parts) if shell.evaluate(e)]
    aux = AuxiliaryGraph(Hypergraph(t * m, t, frozenset(edges)), parts, B_parts, tuple(ps.sequences), G, dec, params)
    H = aux.graph
    worst = None
    for size in range(1, t):
        for S in H.supported_sets(size):
            used = {v // m for v in S}
            nb = H.neighbourhood_mask(S)
            for i in range(t):
                if i in used:
                    continue
                d = popcount(nb & mask_of(parts[i]))
                if worst is None or d - m < worst:
                    worst = d - m
    aux.audit = {
        "edges": len(edges),
        "density": Fraction(len(edges), m**t),
        "codegree_deficit": worst,
        "isolated": len(H.isolated_vertices()),
    }
    if tol is not None:
        aux.audit["codegree_bound"] = -5 * t * tol.mu * G.n
    return aux


# -- full pipeline -------------------------------------------------------------------


@dataclass
class PipelineResult:
    cycle: tuple[int, ...] | None
    failure: StageFailure | None
    report: dict

    @property
    def ok(self) -> bool:
        return self.cycle is not None

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, dict):
                return {str(a): clean(b) for a, b in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        if self.cycle is not None:
            return {"status": "cycle", "cycle": list(self.cycle), "report": clean(self.report)}
        f = self.failure
        return {
            "status": "failure",
            "stage": f.stage,
            "reason": f.reason,
            "margins": clean(f.margins),
            "report": clean(self.report),
        }


def run_extremal_pipeline(
    G: Hypergraph,
    params: CycleParams,
    tol: ToleranceConfig = DESK_TOLERANCE,
    seed: int = 0,
    witness: Sequence[int] | None = None,
    enforce_codegree: bool = True,
    clean_mu=None,
    attempts: int = 5,
) -> PipelineResult:
    report: dict = {"seed": seed, "clean_mu": str(tol.mu / 2 if clean_mu is None else Fraction(clean_mu))}
    n = G.n
    if n % params.step:
        raise ParameterError(f"n={n} is not divisible by k-ell={params.step}")
    if G.k != params.k:
        raise ParameterError("uniformity mismatch")

    def fail(stage, reason, margins=None):
        return PipelineResult(None, StageFailure(stage, reason, margins), report)

    dstar = supported_codegree(G)
    need = required_codegree(n, params)
    report["codegree"] = {"value": dstar, "required": need}
    if enforce_codegree and (dstar is None or dstar < need):
        return fail("precondition", f"supported co-degree {dstar} < {need}", {"deficit": need - (dstar or 0)})
    try:
        dec = decompose_extremal(G, params, tol, witness, seed, clean_mu, enforce_codegree=False)
    except DomainError as exc:
        return fail("classification", str(exc))
    except StageFailure as exc:
        return PipelineResult(None, exc, report)
    report["decomposition"] = dict(dec.diagnostics)
    try:
        ps = build_path_system(G, dec, params, tol)
    except StageFailure as exc:
        return PipelineResult(None, exc, report)
    except ParameterError as exc:
        return fail("path-system", str(exc))
    report["path_system"] = dict(ps.diagnostics)
    try:
        aux = build_auxiliary(G, dec, ps, params, tol)
    except ParameterError as exc:
        return fail("auxiliary", str(exc))
    report["auxiliary"] = dict(aux.audit)
    H = aux.graph
    edges = H.edge_list
    families = [aux.plus_family(e) for e in edges] + [aux.minus_family(e) for e in edges]
    last_reason = ""
    for attempt in range(attempts):
        sub = int.from_bytes(derive_rng("pipeline-attempt", seed * 7919 + attempt).randbytes(4), "big")
        try:
            km = kpartite_matching(H, aux.parts, families, seed=sub, audit_levels=False)
        except (ParameterError, SearchExhausted) as exc:
            last_reason = f"matching: {exc}"
            continue
        M = [tuple(e) for e in km.edges]
        half = len(edges)
        report["matching"] = {
            "attempt": attempt,
            "min_plus": min(km.counts[:half], default=None),
            "min_minus": min(km.counts[half:], default=None),
            "target": Fraction(len(M), 2),
        }
        arcs = {(i, j) for i, e in enumerate(M) for j, f in enumerate(M) if i != j and aux.links(e, f)}
        D = Digraph(len(M), frozenset(arcs))
        report["transition"] = {"min_semidegree": D.min_semidegree(), "vertices": D.n}
        try:
            order = directed_hamilton(D, seed=sub) if len(M) > 1 else (0,)
        except ResourceError as exc:
            last_reason = f"transition digraph: {exc}"
            continue
        if order is None:
            last_reason = "transition digraph has no Hamilton cycle"
            continue
        segments = [aux.sequence(M[i]) for i in order]
        try:
            cycle = assemble_cycle_from_segments(G, segments, params)
        except ParameterError as exc:
            last_reason = f"assembly: {exc}"
            continue
        if not verify_ell_cycle(G, cycle, params, spanning=True):
            raise AssertionError("assembled sequence is not a spanning ell-cycle")
        report["attempts"] = attempt + 1
        return PipelineResult(cycle, None, report)
    report["attempts"] = attempts
    stage = "matching" if last_reason.startswith("matching") else "transition-digraph"
    if last_reason.startswith("assembly"):
        stage = "assembly"
    return fail(stage, last_reason, {"attempts": attempts})


# -- inheritance statistics -----------------------------------------------------------


def inheritance_check(
    G: Hypergraph,
    params: CycleParams,
    tol: ToleranceConfig,
    W: Sequence[int],
    s: int,
    samples: int = 50,
    seed: int = 0,
) -> dict:
    """Share of random s-subsets containing W whose induced graph is non-extremal.

    Informational only: the induced subgraph is relabelled to 0..s-1 and
    classified exactly; the target rate is 1 - 1/s^2.
    """
    W = tuple(sorted(set(W)))
    if len(W) > s or s > G.n:
        raise ParameterError("need |W| <= s <= n")
    rng = derive_rng("inheritance", seed)
    others = [v for v in range(G.n) if v not in set(W)]
    members = 0
    for _ in range(samples):
        U = sorted(W + tuple(rng.sample(others, s - len(W))))
        pos = {v: i for i, v in enumerate(U)}
        sub = G.induced(U).relabel(pos, s)
        if classify_non_extremal(sub, params, tol, "exact").status == "member":
            members += 1
    return {
        "samples": samples,
        "members": members,
        "rate": Fraction(members, samples),
        "target": 1 - Fraction(1, s * s),
    }


__all__ = [
    "AuxiliaryGraph",
    "DESK_TOLERANCE",
    "ExtremalDecomposition",
    "PathSystem",
    "PipelineResult",
    "build_auxiliary",
    "build_path_system",
    "decompose_extremal",
    "find_cherries",
    "find_extremal_witness",
    "inheritance_check",
    "required_codegree",
    "run_extremal_pipeline",
    "synthetic_near_extremal",
    "verify_path_system",
]
