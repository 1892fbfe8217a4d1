"""Verifiers for walks, paths and cycles, plus the calculus of sequences that
support an ell-path.

Positions are 0-based throughout: the s-th edge window of an ell-walk starts at
``s * (k - ell)``. Every ``verify_*`` function has a ``diagnose_*`` twin that
reports why and where a sequence was rejected.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Protocol, Sequence

from .core import CycleParams
from .errors import ParameterError


class GraphLike(Protocol):
    k: int
    n: int

    def has_edge(self, vertices) -> bool: ...

    def is_supported(self, vertices) -> bool: ...


class WalkKind(enum.Enum):
    TIGHT_WALK = "tight-walk"
    ELL_WALK = "ell-walk"
    ELL_PATH = "ell-path"
    ELL_CYCLE = "ell-cycle"
    SUPPORTS_ELL_PATH = "supports-ell-path"
    SUPPORTS_EXTENDED_ELL_PATH = "supports-extended-ell-path"


@dataclass(frozen=True)
class VertexSeq:
    vertices: tuple[int, ...]
    kind: WalkKind

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Diagnosis:
    ok: bool
    reason: str = ""
    index: int | None = None

    def __bool__(self) -> bool:
        return self.ok


_OK = Diagnosis(True)


def _repeat(W: Sequence[int]) -> int | None:
    seen = {}
    for i, v in enumerate(W):
        if v in seen:
            return i
        seen[v] = i
    return None


def diagnose_tight_walk(G: GraphLike, W: Sequence[int]) -> Diagnosis:
    k = G.k
    if len(W) < k:
        return Diagnosis(False, f"length {len(W)} is below k={k}", None)
    for i in range(len(W) - k + 1):
        if not G.has_edge(W[i:i + k]):
            return Diagnosis(False, f"window at {i} is not an edge", i)
    return _OK


def verify_tight_walk(G: GraphLike, W: Sequence[int]) -> bool:
    return diagnose_tight_walk(G, W).ok


def is_tight_path(G: GraphLike, W: Sequence[int]) -> bool:
    """Distinct vertices with every k consecutive ones an edge; short sequences need only be supported."""
    if _repeat(W) is not None:
        return False
    if len(W) <= G.k:
        return G.is_supported(W)
    return verify_tight_walk(G, W)


def diagnose_ell_walk(G: GraphLike, W: Sequence[int], params: CycleParams) -> Diagnosis:
    r, k, step = len(W), params.k, params.step
    if r < k or (r - k) % step:
        return Diagnosis(False, f"length {r} is not congruent to k={k} mod {step}", None)
    for s in range((r - k) // step + 1):
        i = s * step
        if not G.has_edge(W[i:i + k]):
            return Diagnosis(False, f"window at {i} is not an edge", i)
    return _OK


def verify_ell_walk(G: GraphLike, W: Sequence[int], params: CycleParams) -> bool:
    return diagnose_ell_walk(G, W, params).ok


def diagnose_ell_path(G: GraphLike, W: Sequence[int], params: CycleParams) -> Diagnosis:
    rep = _repeat(W)
    if rep is not None:
        return Diagnosis(False, f"vertex {W[rep]} repeats", rep)
    return diagnose_ell_walk(G, W, params)


def verify_ell_path(G: GraphLike, W: Sequence[int], params: CycleParams) -> bool:
    return diagnose_ell_path(G, W, params).ok


def diagnose_ell_cycle(
    G: GraphLike, W: Sequence[int], params: CycleParams, spanning: bool = False
) -> Diagnosis:
    r, k, step = len(W), params.k, params.step
    rep = _repeat(W)
    if rep is not None:
        return Diagnosis(False, f"vertex {W[rep]} repeats", rep)
    if r < k:
        return Diagnosis(False, f"length {r} is below k={k}", None)
    if r % step:
        return Diagnosis(False, f"length {r} is not divisible by {step}", None)
    if spanning and r != G.n:
        return Diagnosis(False, f"cycle covers {r} of {G.n} vertices", None)
    for s in range(r // step):
        i = s * step
        window = [W[(i + j) % r] for j in range(k)]
        if not G.has_edge(window):
            return Diagnosis(False, f"cyclic window at {i} is not an edge", i)
    return _OK


def verify_ell_cycle(G: GraphLike, W: Sequence[int], params: CycleParams, spanning: bool = False) -> bool:
    return diagnose_ell_cycle(G, W, params, spanning).ok


def tight_walk_to_ell_walk(W: Sequence[int], params: CycleParams, G: GraphLike | None = None) -> VertexSeq:
    """Read a tight walk as an ell-walk; only the windows at multiples of k-ell are kept."""
    r = len(W)
    if r < params.k or (r - params.k) % params.step:
        raise ParameterError(f"length {r} is not congruent to k={params.k} mod {params.step}")
    if G is not None and not verify_tight_walk(G, W):
        raise ParameterError("input is not a tight walk")
    return VertexSeq(tuple(W), WalkKind.ELL_WALK)


def diagnose_supports_ell_path(G: GraphLike, P: Sequence[int], params: CycleParams) -> Diagnosis:
    r, k, t, step = len(P), params.k, params.t, params.step
    rep = _repeat(P)
    if rep is not None:
        return Diagnosis(False, f"vertex {P[rep]} repeats", rep)
    if r < t:
        return Diagnosis(False, f"length {r} is below t={t}", None)
    if r % step:
        return Diagnosis(False, f"length {r} is not divisible by {step}", None)
    for s in range((r - t) // step):
        i = s * step
        if not G.has_edge(P[i:i + k]):
            return Diagnosis(False, f"window at {i} is not an edge", i)
    if not G.is_supported(P[r - t:]):
        return Diagnosis(False, "last t vertices are not supported", r - t)
    return _OK


def verify_supports_ell_path(G: GraphLike, P: Sequence[int], params: CycleParams) -> bool:
    return diagnose_supports_ell_path(G, P, params).ok


def diagnose_supports_extended_ell_path(G: GraphLike, P: Sequence[int], params: CycleParams) -> Diagnosis:
    r = len(P) - 1
    rep = _repeat(P)
    if rep is not None:
        return Diagnosis(False, f"vertex {P[rep]} repeats", rep)
    if r < params.t:
        return Diagnosis(False, f"length {len(P)} is below t+1", None)
    if r % params.step:
        return Diagnosis(False, f"length minus one ({r}) is not divisible by {params.step}", None)
    inner = diagnose_supports_ell_path(G, P[1:], params)
    if not inner:
        idx = None if inner.index is None else inner.index + 1
        return Diagnosis(False, f"tail: {inner.reason}", idx)
    if not G.is_supported(P[:params.t]):
        return Diagnosis(False, "first t vertices are not supported", 0)
    return _OK


def verify_supports_extended_ell_path(G: GraphLike, P: Sequence[int], params: CycleParams) -> bool:
    return diagnose_supports_extended_ell_path(G, P, params).ok


class ConcatError(ParameterError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def concat_supported_paths(G: GraphLike, P: Sequence[int], Q: Sequence[int], params: CycleParams) -> tuple[int, ...]:
    t = params.t
    if set(P) & set(Q):
        raise ConcatError("overlap", f"sequences share {sorted(set(P) & set(Q))[:5]}")
    for name, seq in (("first", P), ("second", Q)):
        d = diagnose_supports_ell_path(G, seq, params)
        if not d:
            raise ConcatError("not-supporting", f"{name} sequence: {d.reason}")
    joint = list(P[-t:]) + list(Q[:t - 1])
    if not is_tight_path(G, joint):
        raise ConcatError("not-tight", "tail of the first and head of the second do not form a tight path")
    out = tuple(P) + tuple(Q)
    assert verify_supports_ell_path(G, out, params)
    return out


class SegmentError(ParameterError):
    def __init__(self, pair: tuple[int, int] | None, index: int | None, message: str):
        super().__init__(message)
        self.pair = pair
        self.index = index


def assemble_cycle_from_segments(
    G: GraphLike, segments: Sequence[Sequence[int]], params: CycleParams
) -> tuple[int, ...]:
    if not segments:
        raise SegmentError(None, None, "no segments")
    seen: dict[int, int] = {}
    for i, seg in enumerate(segments):
        if len(seg) < params.t:
            raise SegmentError(None, i, f"segment {i} has {len(seg)} < t={params.t} vertices")
        d = diagnose_supports_ell_path(G, seg, params)
        if not d:
            raise SegmentError(None, i, f"segment {i}: {d.reason}")
        for v in seg:
            if v in seen:
                raise SegmentError((seen[v], i), None, f"segments {seen[v]} and {i} share vertex {v}")
            seen[v] = i
    m = len(segments)
    for i in range(m):
        j = (i + 1) % m
        if m == 1:
            break
        d = diagnose_supports_ell_path(G, list(segments[i]) + list(segments[j]), params)
        if not d:
            raise SegmentError((i, j), None, f"segments {i} and {j} do not chain: {d.reason}")
    cycle = tuple(v for seg in segments for v in seg)
    d = diagnose_ell_cycle(G, cycle, params)
    if not d:
        raise SegmentError(None, None, f"assembled sequence is not an ell-cycle: {d.reason}")
    return cycle
