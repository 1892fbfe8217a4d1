"""Weighted perfect fractional matchings with exact rational arithmetic.

Feasibility of ``A x = 1, x >= 0`` is decided by a phase-1 revised simplex
using Bland's rule. Column ``(e, i)`` puts weight ``w[0]`` on the i-th vertex of
edge ``e`` and ``w[1:]`` on the remaining vertices in ascending order. On
infeasibility the phase-1 duals give a Farkas certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .constructions import construct_kpartite_ell_cycle
from .core import BlowupSpec, CycleParams, Hypergraph, as_fraction
from .errors import ParameterError

OrderedEdge = tuple[int, ...]


def weight_vector(params: CycleParams) -> tuple[Fraction, ...]:
    """Canonical weights: k-1 on the distinguished vertex, t-1 on the others."""
    return (Fraction(params.k - 1),) + (Fraction(params.t - 1),) * (params.k - 1)


def canonical_order(edge: Sequence[int], i: int) -> OrderedEdge:
    """Edge reordered as (edge[i], remaining vertices ascending)."""
    srt = sorted(edge)
    head = srt[i]
    return (head,) + tuple(v for v in srt if v != head)


@dataclass(frozen=True)
class FractionalMatching:
    weights: Mapping[OrderedEdge, Fraction]
    w: tuple[Fraction, ...]

    def vertex_sums(self, n: int) -> list[Fraction]:
        sums = [Fraction(0)] * n
        for oe, q in self.weights.items():
            for pos, v in enumerate(oe):
                sums[v] += self.w[pos] * q
        return sums

    def support(self) -> list[OrderedEdge]:
        return sorted(e for e, q in self.weights.items() if q)


@dataclass(frozen=True)
class FarkasCertificate:
    y: tuple[Fraction, ...]
    w: tuple[Fraction, ...]


@dataclass
class SolveStats:
    pivots: int = 0
    columns: int = 0
    notes: list[str] = field(default_factory=list)


def _columns(H: Hypergraph, w: Sequence[Fraction]) -> list[tuple[OrderedEdge, list[tuple[int, Fraction]]]]:
    cols = []
    for e in H.edge_list:
        for i in range(H.k):
            oe = canonical_order(e, i)
            entries: dict[int, Fraction] = {}
            for pos, v in enumerate(oe):
                entries[v] = entries.get(v, Fraction(0)) + w[pos]
            cols.append((oe, sorted(entries.items())))
    return cols


def _check_weights(H: Hypergraph, w) -> tuple[Fraction, ...]:
    w = tuple(as_fraction(x) for x in w)
    if len(w) != H.k:
        raise ParameterError(f"weight vector has {len(w)} entries, expected k={H.k}")
    if any(x < 0 for x in w):
        raise ParameterError("weights must be non-negative")
    return w


def solve_weighted_pfm(
    H: Hypergraph, w, scale=1, stats: SolveStats | None = None
) -> FractionalMatching | FarkasCertificate:
    """Return a perfect w-weighted fractional matching of H or a Farkas certificate.

    ``scale`` multiplies the right-hand side; any positive value yields the same
    verdict, and a feasible solution is rescaled back before returning.
    """
    n = H.n
    if n == 0:
        raise ParameterError("the empty vertex set has no constraints to satisfy")
    w = _check_weights(H, w)
    scale = as_fraction(scale)
    if scale <= 0:
        raise ParameterError("scale must be positive")
    if not H.edges:
        return FarkasCertificate(tuple(Fraction(-1) for _ in range(n)), w)

    cols = _columns(H, w)
    ncols = len(cols)
    if stats is not None:
        stats.columns = ncols
    # artificial j = ncols + row
    basis = [ncols + r for r in range(n)]
    binv = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    xb = [scale] * n

    def column(j: int) -> list[tuple[int, Fraction]]:
        if j >= ncols:
            return [(j - ncols, Fraction(1))]
        return cols[j][1]

    pivots = 0
    while True:
        cb = [Fraction(1) if j >= ncols else Fraction(0) for j in basis]
        pi = [sum((cb[r] * binv[r][c] for r in range(n) if cb[r]), Fraction(0)) for c in range(n)]
        entering = None
        for j in range(ncols + n):
            cj = Fraction(1) if j >= ncols else Fraction(0)
            red = cj - sum((pi[row] * val for row, val in column(j)), Fraction(0))
            if red < 0:
                entering = j
                break
        if entering is None:
            break
        col = column(entering)
        u = [sum((binv[r][row] * val for row, val in col), Fraction(0)) for r in range(n)]
        leave = None
        best = None
        for r in range(n):
            if u[r] > 0:
                ratio = xb[r] / u[r]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:  # cannot happen: phase 1 is bounded below
            raise AssertionError("unbounded phase-1 direction")
        piv = u[leave]
        prow = [x / piv for x in binv[leave]]
        for r in range(n):
            if r == leave:
                continue
            f = u[r]
            if f:
                row = binv[r]
                for c in range(n):
                    if prow[c]:
                        row[c] -= f * prow[c]
                xb[r] -= f * best
        binv[leave] = prow
        xb[leave] = best
        basis[leave] = entering
        pivots += 1
    if stats is not None:
        stats.pivots = pivots

    infeasibility = sum((xb[r] for r in range(n) if basis[r] >= ncols), Fraction(0))
    if infeasibility > 0:
        return FarkasCertificate(tuple(-p for p in pi), w)
    weights: dict[OrderedEdge, Fraction] = {}
    for r, j in enumerate(basis):
        if j < ncols and xb[r]:
            oe = cols[j][0]
            weights[oe] = weights.get(oe, Fraction(0)) + xb[r] / scale
    return FractionalMatching(weights, w)


def verify_matching(H: Hypergraph, q: FractionalMatching, perfect: bool = True) -> bool:
    if len(q.w) != H.k:
        return False
    for oe, val in q.weights.items():
        if val < 0 or len(oe) != H.k or len(set(oe)) != H.k or not H.has_edge(oe):
            return False
    sums = q.vertex_sums(H.n)
    if perfect:
        return all(s == 1 for s in sums)
    return all(s <= 1 for s in sums)


def verify_certificate(H: Hypergraph, cert: FarkasCertificate) -> bool:
    if len(cert.y) != H.n or len(cert.w) != H.k:
        return False
    if sum(cert.y, Fraction(0)) >= 0:
        return False
    for e in H.edge_list:
        for i in range(H.k):
            oe = canonical_order(e, i)
            if sum((cert.w[p] * cert.y[v] for p, v in enumerate(oe)), Fraction(0)) < 0:
                return False
    return True


def lift_pfm_through_blowup(spec: BlowupSpec, q_star: FractionalMatching) -> FractionalMatching:
    """Average a matching on the t-blow-up back onto the base graph."""
    base = spec.base
    sizes = {len(p) for p in spec.parts}
    if len(sizes) != 1:
        raise ParameterError("lifting needs a blow-up with all parts of equal size")
    t = sizes.pop()
    proj = spec.projection
    out: dict[OrderedEdge, Fraction] = {}
    for oe, val in q_star.weights.items():
        try:
            img = tuple(proj[v] for v in oe)
        except KeyError as exc:
            raise ParameterError(f"ordered edge {oe} leaves the blow-up") from exc
        if len(set(img)) != base.k or not base.has_edge(img):
            raise ParameterError(f"ordered edge {oe} does not project onto an edge of the base")
        out[img] = out.get(img, Fraction(0)) + val / t
    return FractionalMatching(out, q_star.w)


@dataclass(frozen=True)
class EdgeBlowupPartition:
    blocks: dict[OrderedEdge, tuple[tuple[int, ...], ...]]  # ordered base edge -> parts of T_e
    leftovers: dict[int, tuple[int, ...]]
    cycles: dict[OrderedEdge, tuple[int, ...]]
    qhat_floor: dict[OrderedEdge, int]

    def covered(self) -> int:
        return sum(sum(len(p) for p in parts) for parts in self.blocks.values())


def partition_blowup_by_pfm(
    spec: BlowupSpec, q: FractionalMatching, params: CycleParams, on: str = "base", with_cycles: bool = True
) -> EdgeBlowupPartition:
    """Carve each part B_v into blocks B_v^e of size w_i * floor(qhat(e)) and leftovers.

    With ``on="base"`` the scaled weights are ``qhat = m * q``; with ``on="blowup"``
    ``q`` lives on the blow-up and is summed over preimages of each base edge.
    """
    w = weight_vector(params)
    if tuple(q.w) != w:
        raise ParameterError("partitioning needs the canonical weight vector")
    base = spec.base
    if base.k != params.k:
        raise ParameterError("uniformity mismatch between base graph and parameters")
    if on == "base":
        qhat = {oe: val * spec.m for oe, val in q.weights.items()}
    elif on == "blowup":
        proj = spec.projection
        qhat: dict[OrderedEdge, Fraction] = {}
        for oe, val in q.weights.items():
            img = tuple(proj[v] for v in oe)
            qhat[img] = qhat.get(img, Fraction(0)) + val
    else:
        raise ParameterError(f"unknown matching location {on!r}")
    floors = {oe: int(val) for oe, val in sorted(qhat.items()) if val >= 1}
    demand = [0] * base.n
    for oe, f in floors.items():
        for pos, v in enumerate(oe):
            demand[v] += int(w[pos]) * f
    for v in range(base.n):
        if demand[v] > len(spec.parts[v]):
            raise ParameterError(f"base vertex {v}: blocks need {demand[v]} > |B_v| = {len(spec.parts[v])}")
    cursor = [0] * base.n
    blocks: dict[OrderedEdge, tuple[tuple[int, ...], ...]] = {}
    for oe, f in floors.items():
        parts = []
        for pos, v in enumerate(oe):
            size = int(w[pos]) * f
            parts.append(spec.parts[v][cursor[v]:cursor[v] + size])
            cursor[v] += size
        blocks[oe] = tuple(parts)
    leftovers = {v: spec.parts[v][cursor[v]:] for v in range(base.n)}
    cycles: dict[OrderedEdge, tuple[int, ...]] = {}
    if with_cycles:
        for oe, parts in blocks.items():
            size = sum(len(p) for p in parts)
            template = construct_kpartite_ell_cycle(params, size, materialize=False)
            relabel = {}
            # template part order is B_1..B_{k-1}, A; T_e puts A on the distinguished vertex
            for src, dst in zip(template.B_parts + (template.A,), parts[1:] + parts[:1]):
                relabel.update(zip(src, dst))
            cycles[oe] = tuple(relabel[v] for v in template.sequence)
    return EdgeBlowupPartition(blocks, leftovers, cycles, floors)
