"""Connecting tight walks, absorbers and the master walk.

Every constructor follows a fixed recipe: extend supported sets one vertex at a
time, picking from intersections of vertex neighbourhoods. Candidates are taken
smallest-first unless a ``random.Random`` is supplied. Results are re-checked
with the independent verifiers in :mod:`hyperham.walks` before being returned.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import BlowupSpec, CycleParams, Hypergraph, _bits, supported_codegree
from .errors import DomainError, ParameterError, ResourceError, SearchExhausted
from .walks import is_tight_path, verify_tight_walk

Seq = tuple[int, ...]


def _pick(mask: int, rng: random.Random | None) -> int:
    if not mask:
        raise SearchExhausted("no candidate vertex left")
    if rng is None:
        return (mask & -mask).bit_length() - 1
    return rng.choice(_bits(mask))


def _require_dense(G: Hypergraph, strict_size: bool = True) -> None:
    dstar = supported_codegree(G)
    if dstar is None or 2 * dstar <= G.n:
        raise ParameterError(f"supported co-degree {dstar} must exceed n/2 = {G.n / 2}")
    if G.isolated_vertices():
        raise ParameterError(f"vertex {G.isolated_vertices()[0]} is isolated")
    if strict_size and G.n < 4 * G.k:
        raise ParameterError(f"n={G.n} is below 4k={4 * G.k}")


def _ordered_supported(G: Hypergraph, S: Sequence[int], name: str) -> Seq:
    S = tuple(S)
    if not 1 <= len(S) <= G.k:
        raise ParameterError(f"{name} must have between 1 and k={G.k} vertices, got {len(S)}")
    if len(set(S)) != len(S) or not G.is_supported(S):
        raise ParameterError(f"{name}={S} is not an ordered supported set")
    return S


def _edges_containing(G: Hypergraph, S: Sequence[int]) -> list[tuple[int, ...]]:
    s = set(S)
    return [e for e in G.edge_list if s.issubset(e)]


def _half_join(G: Hypergraph, S: Seq, f: Seq, avoid: set[int], rng) -> Seq:
    """Tight walk starting with S and ending with the ordered edge f."""
    k = G.k
    cands = _edges_containing(G, S)
    if not cands:
        raise SearchExhausted(f"no edge contains {S}")
    disjoint = [e for e in cands if not (set(e) - set(S)) & (set(f) | avoid)]
    pool = disjoint or sorted(cands, key=lambda e: len((set(e) - set(S)) & (set(f) | avoid)))
    e = rng.choice(pool) if rng is not None and disjoint else pool[0]
    u = S + tuple(v for v in sorted(e) if v not in S)
    z: list[int] = []
    for i in range(1, k + 1):
        a = G.neighbourhood_mask(u[i:] + tuple(z))
        b = G.neighbourhood_mask(f[i:] + tuple(z))
        z.append(_pick(a & b, rng))
    walk = list(u) + z
    for i in range(k, 0, -1):  # W_k, ..., W_1
        walk.extend(z[: i - 1] + list(f[i - 1:]))
    return tuple(walk)


def _join(G: Hypergraph, S: Seq, T: Seq, rng=None) -> Seq:
    st = set(S) | set(T)
    f = None
    for e in G.edge_list:
        if not st & set(e):
            f = e
            break
    if f is None:
        # small graphs: take the edge with the least overlap; the result is verified below
        f = min(G.edge_list, key=lambda e: (len(st & set(e)), e))
    R = _half_join(G, S, f, set(T), rng)
    R2 = _half_join(G, tuple(reversed(T)), tuple(reversed(f)), set(S), rng)
    walk = R + tuple(reversed(R2))
    if not verify_tight_walk(G, walk) or walk[: len(S)] != S or walk[len(walk) - len(T):] != T:
        raise SearchExhausted(f"join of {S} and {T} failed verification")
    return walk


def join_tight_walk(G: Hypergraph, S: Sequence[int], T: Sequence[int], rng: random.Random | None = None) -> Seq:
    """Tight walk that starts with S, ends with T and has at least k vertices in between."""
    _require_dense(G)
    S = _ordered_supported(G, S, "S")
    T = _ordered_supported(G, T, "T")
    return _join(G, S, T, rng)


@dataclass(frozen=True)
class Absorber:
    segments: tuple[Seq, ...]
    target: Seq

    def plain(self) -> Seq:
        return tuple(v for seg in self.segments for v in seg)

    def absorbed(self) -> Seq:
        out: list[int] = list(self.segments[0])
        for v, seg in zip(self.target, self.segments[1:]):
            out.append(v)
            out.extend(seg)
        return tuple(out)

    def boundaries(self) -> tuple[int, ...]:
        """Offsets (in the plain walk) where each target vertex would be inserted."""
        acc, out = 0, []
        for seg in self.segments[:-1]:
            acc += len(seg)
            out.append(acc)
        return tuple(out)


def verify_absorber(G: Hypergraph, A: Absorber) -> bool:
    if len(A.segments) != len(A.target) + 1:
        return False
    if any(len(seg) < G.k - 1 for seg in A.segments):
        return False
    return verify_tight_walk(G, A.plain()) and verify_tight_walk(G, A.absorbed())


def _vertex_absorber(G: Hypergraph, v: int, rng=None) -> Absorber:
    k = G.k
    cands = _edges_containing(G, (v,))
    if not cands:
        raise DomainError(f"no edge contains vertex {v}")
    e = rng.choice(cands) if rng is not None else cands[0]
    u = tuple(x for x in e if x != v)
    w: list[int] = []
    for i in range(1, k):
        a = G.neighbourhood_mask(u[i:] + (v,) + tuple(w))
        b = G.neighbourhood_mask(u[i - 1:] + tuple(w))
        w.append(_pick(a & b, rng))
    return Absorber((u, tuple(w)), (v,))


def find_vertex_absorber(G: Hypergraph, v: int, rng: random.Random | None = None) -> Absorber:
    if G.k < 3:
        raise ParameterError("vertex absorbers need k >= 3")
    if not 0 <= v < G.n:
        raise ParameterError(f"vertex {v} outside 0..{G.n - 1}")
    if not G.is_supported((v,)):
        raise DomainError(f"no edge contains vertex {v}")
    _require_dense(G, strict_size=False)
    A = _vertex_absorber(G, v, rng)
    if not verify_absorber(G, A):
        raise SearchExhausted(f"absorber for {v} failed verification")
    return A


def _sequence_absorber(G: Hypergraph, U: Seq, q: int, step: int, rng=None) -> Absorber:
    k = G.k
    pieces = [_vertex_absorber(G, v, rng) for v in U]
    segs: list[Seq] = []
    for i, piece in enumerate(pieces):
        A_i, B_i = piece.segments
        if i + 1 < len(pieces):
            segs.append(_join(G, B_i, pieces[i + 1].segments[0], rng))
        else:
            segs.append(B_i)
    head = pieces[0].segments[0]
    length = len(head) + sum(len(s) for s in segs)
    p = (q - length) % step
    ys: list[int] = []
    for i in range(1, p + 1):
        ys.append(_pick(G.neighbourhood_mask(tuple(reversed(ys)) + head[: k - i]), rng))
    W0 = tuple(reversed(ys)) + head
    return Absorber((W0,) + tuple(segs), tuple(U))


def find_sequence_absorber(
    G: Hypergraph, U: Sequence[int], q: int, params: CycleParams, rng: random.Random | None = None
) -> Absorber:
    """Tight U-absorber whose plain walk has order congruent to q mod k-ell."""
    if not 0 <= q < params.step:
        raise ParameterError(f"q={q} must lie in [0, {params.step - 1}]")
    U = tuple(U)
    if not U:
        raise ParameterError("U must be non-empty")
    _require_dense(G)
    A = _sequence_absorber(G, U, q, params.step, rng)
    if not verify_absorber(G, A) or len(A.plain()) % params.step != q:
        raise SearchExhausted("sequence absorber failed verification")
    return A


def _join_congruent(G: Hypergraph, S: Seq, T: Seq, q: int, params: CycleParams, rng=None) -> Seq:
    k, step = G.k, params.step
    U = tuple((S * step)[:step])
    absorber = _sequence_absorber(G, U, k % step, step, rng)
    plain = absorber.plain()
    S2 = plain[: k - 1]
    T2 = plain[len(plain) - (k - 1):]
    RS = _join(G, S, S2, rng)
    RT = _join(G, T2, T, rng)
    base_len = len(RS) - (k - 1) + len(plain) + len(RT) - (k - 1)
    p = (q - base_len) % step
    mid: list[int] = list(absorber.segments[0])
    for i, seg in enumerate(absorber.segments[1:]):
        if i < p:
            mid.append(U[i])
        mid.extend(seg)
    walk = RS[: len(RS) - (k - 1)] + tuple(mid) + RT[k - 1:]
    if not verify_tight_walk(G, walk) or len(walk) % step != q or len(walk) < 2 * k:
        raise SearchExhausted("order-controlled join failed verification")
    if walk[: len(S)] != S or walk[len(walk) - len(T):] != T:
        raise SearchExhausted("order-controlled join has wrong ends")
    return walk


def join_with_congruence(
    G: Hypergraph, S: Sequence[int], T: Sequence[int], q: int, params: CycleParams, rng: random.Random | None = None
) -> Seq:
    """Tight walk joining S and T of order at least 2k and congruent to q mod k-ell."""
    if not 0 <= q < params.step:
        raise ParameterError(f"q={q} must lie in [0, {params.step - 1}]")
    _require_dense(G)
    S = _ordered_supported(G, S, "S")
    T = _ordered_supported(G, T, "T")
    return _join_congruent(G, S, T, q, params, rng)


# -- master walk -------------------------------------------------------------------


@dataclass
class MasterWalk:
    walk: Seq
    S: Seq
    T: Seq
    d: int
    edge_ranges: dict[Seq, tuple[int, int]] = field(default_factory=dict)
    # U -> list of (start, end, insertion offsets relative to start)
    absorber_ranges: dict[Seq, list[tuple[int, int, tuple[int, ...]]]] = field(default_factory=dict)


def ordered_edges(G: Hypergraph) -> list[Seq]:
    return [p for e in G.edge_list for p in itertools.permutations(e)]


def master_walk_lower_bound(n: int, k: int, step: int, d: int, num_ordered: int) -> int:
    """Crude lower bound on the master walk order: every piece plus a 2k connector."""
    pieces = num_ordered + d * n**step
    return num_ordered * k + d * n**step * (step + 1) * (k - 1) + (pieces + 1) * 2


def build_master_walk(
    G: Hypergraph,
    S: Sequence[int],
    T: Sequence[int],
    d: int,
    params: CycleParams,
    edges: Iterable[Sequence[int]] | None = None,
    budget: int = 2_000_000,
    rng: random.Random | None = None,
    strict_size: bool = True,
) -> MasterWalk:
    """Tight walk containing every ordered edge and d absorbers per (k-ell)-sequence.

    ``strict_size=False`` drops the n >= 4k requirement; the joins then reuse
    vertices where no disjoint edge exists, and every piece is still verified.
    """
    if d < 1:
        raise ParameterError("d must be positive")
    k, step = G.k, params.step
    _require_dense(G, strict_size)
    S = _ordered_supported(G, S, "S")
    T = _ordered_supported(G, T, "T")
    catalogue = [tuple(e) for e in edges] if edges is not None else ordered_edges(G)
    for e in catalogue:
        if len(e) != k or not G.has_edge(e):
            raise ParameterError(f"{e} is not an ordered edge of G")
    lower = master_walk_lower_bound(G.n, k, step, d, len(catalogue))
    if lower > budget:
        raise ResourceError(f"master walk needs at least {lower} vertices, budget is {budget}")

    pieces: list[tuple[str, Seq, Absorber | None]] = [("edge", e, None) for e in catalogue]
    for U in itertools.product(range(G.n), repeat=step):
        for _ in range(d):
            A = _sequence_absorber(G, U, k % step, step, rng)
            if not verify_absorber(G, A):
                raise SearchExhausted(f"absorber for {U} failed verification")
            pieces.append(("absorber", U, A))

    def body(piece) -> Seq:
        return piece[1] if piece[0] == "edge" else piece[2].plain()

    x = len(pieces)
    walk: list[int] = []
    mw = MasterWalk((), S, T, d)
    for i in range(x + 1):
        if i == 0:
            left, right, q = S, body(pieces[0])[: k - 1], (k - 1) % step
        elif i == x:
            left, right, q = body(pieces[-1])[-(k - 1):], T, (2 * k - 1) % step
        else:
            left, right, q = body(pieces[i - 1])[-(k - 1):], body(pieces[i])[: k - 1], (k - 2) % step
        Q = _join_congruent(G, left, right, q, params, rng)
        lo = 0 if i == 0 else k - 1
        hi = len(Q) if i == x else len(Q) - (k - 1)
        walk.extend(Q[lo:hi])
        if len(walk) > budget:
            raise ResourceError(f"master walk exceeded the budget of {budget} vertices")
        if i < x:
            kind, key, A = pieces[i]
            start = len(walk)
            walk.extend(body(pieces[i]))
            if kind == "edge":
                mw.edge_ranges[key] = (start, len(walk))
            else:
                mw.absorber_ranges.setdefault(key, []).append((start, len(walk), A.boundaries()))
    mw.walk = tuple(walk)
    return mw


def verify_master_walk(G: Hypergraph, mw: MasterWalk, params: CycleParams, catalogue=None) -> dict[str, bool]:
    """Check properties T1-T5 from scratch."""
    k, step, W = G.k, params.step, mw.walk
    res = {}
    res["T1"] = W[: len(mw.S)] == mw.S and W[len(W) - len(mw.T):] == mw.T
    res["T2"] = len(W) % step == k % step and verify_tight_walk(G, W)
    cat = [tuple(e) for e in catalogue] if catalogue is not None else ordered_edges(G)
    ok3 = True
    for e in cat:
        rng_ = mw.edge_ranges.get(e)
        if rng_ is None or W[rng_[0]:rng_[1]] != e or rng_[0] % step:
            ok3 = False
            break
    res["T3"] = ok3
    ok4 = True
    for U in itertools.product(range(G.n), repeat=step):
        spans = mw.absorber_ranges.get(U, [])
        if len(spans) < mw.d:
            ok4 = False
            break
        for start, end, cuts in spans:
            bounds = (0,) + cuts + (end - start,)
            segs = tuple(W[start + bounds[i]: start + bounds[i + 1]] for i in range(len(bounds) - 1))
            if start % step or not verify_absorber(G, Absorber(segs, U)):
                ok4 = False
                break
        if not ok4:
            break
    res["T4"] = ok4
    spans = [r for r in mw.edge_ranges.values()] + [(s, e) for v in mw.absorber_ranges.values() for s, e, _ in v]
    spans.sort()
    res["T5"] = all(spans[i][1] <= spans[i + 1][0] for i in range(len(spans) - 1))
    return res


@dataclass(frozen=True)
class BlownPath:
    path: Seq
    edge_ranges: dict[Seq, tuple[int, int]]
    absorber_ranges: dict[Seq, list[tuple[int, int, tuple[int, ...]]]]


def blow_up_walk_to_path(
    spec: BlowupSpec, W: MasterWalk | Sequence[int], forbidden: Iterable[int] = ()
) -> BlownPath:
    """Replace each occurrence of a base vertex by a fresh copy from its part."""
    seq = W.walk if isinstance(W, MasterWalk) else tuple(W)
    banned = set(forbidden)
    need: dict[int, int] = {}
    for v in seq:
        need[v] = need.get(v, 0) + 1
    pools = {}
    for v, count in need.items():
        if not 0 <= v < len(spec.parts):
            raise ParameterError(f"walk vertex {v} is not a base vertex")
        avail = [w for w in spec.parts[v] if w not in banned]
        if len(avail) < count:
            raise ResourceError(f"base vertex {v}: walk uses it {count} times but only {len(avail)} copies are free")
        pools[v] = iter(avail)
    path = tuple(next(pools[v]) for v in seq)
    if isinstance(W, MasterWalk):
        return BlownPath(path, dict(W.edge_ranges), {u: list(r) for u, r in W.absorber_ranges.items()})
    return BlownPath(path, {}, {})


def blown_path_is_tight(blowup: Hypergraph, bp: BlownPath) -> bool:
    return is_tight_path(blowup, bp.path)


__all__ = [
    "Absorber",
    "BlownPath",
    "MasterWalk",
    "blow_up_walk_to_path",
    "blown_path_is_tight",
    "build_master_walk",
    "find_sequence_absorber",
    "find_vertex_absorber",
    "join_tight_walk",
    "join_with_congruence",
    "master_walk_lower_bound",
    "ordered_edges",
    "verify_absorber",
    "verify_master_walk",
]

