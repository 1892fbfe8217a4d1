"""Extract a subgraph with high supported co-degree from an almost complete hypergraph.

``clean_dense`` runs one top-down pass over the levels F_k = F, F_{k-1}, ..., F_1.
Level i keeps the i-sets that are supported in level i+1 and extend to at least
``(1 - mu) * n`` vertices there. The output keeps the edges of F whose subsets
survive at every level.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Hypergraph, as_fraction, supported_codegree
from .errors import ParameterError


@dataclass(frozen=True)
class CleaningReport:
    output: Hypergraph
    kept_vertices: tuple[int, ...]
    removed_vertices: tuple[int, ...]
    level_counts: dict[int, int]  # i -> e(F_i); level 1 counts vertices
    threshold: Fraction
    margin: int | None = None

    def level_bounds(self, eps, mu) -> dict[int, tuple[int, Fraction, bool]]:
        """Compare e(F_i) with (1 - mu_i) C(n, i) where mu_i = 2^(k-i) eps / mu^(k-i)."""
        eps, mu = as_fraction(eps), as_fraction(mu)
        n, k = self.output.n, self.output.k
        out = {}
        for i, count in self.level_counts.items():
            mu_i = Fraction(2 ** (k - i)) * eps / mu ** (k - i)
            bound = (1 - mu_i) * math.comb(n, i)
            out[i] = (count, bound, count >= bound)
        return out


def _levels(F: Hypergraph, mu: Fraction) -> tuple[list[set], Fraction]:
    n, k = F.n, F.k
    threshold = (1 - mu) * n
    levels: list[set] = [set() for _ in range(k + 1)]
    levels[k] = set(F.edges)
    for i in range(k - 1, 0, -1):
        counts: dict[tuple[int, ...], int] = {}
        for T in levels[i + 1]:
            for S in itertools.combinations(T, i):
                counts[S] = counts.get(S, 0) + 1
        levels[i] = {S for S, c in counts.items() if c >= threshold}
    return levels, threshold


def clean_dense(F: Hypergraph, mu) -> CleaningReport:
    mu = as_fraction(mu)
    if not 0 < mu < 1:
        raise ParameterError(f"mu must lie strictly between 0 and 1, got {mu}")
    k = F.k
    levels, threshold = _levels(F, mu)
    good = set(levels[1])
    for i in range(2, k + 1):
        good = {S for S in levels[i] if all(sub in good for sub in itertools.combinations(S, i - 1))}
    out = Hypergraph(F.n, k, frozenset(good))
    kept = tuple(v for v in range(F.n) if (out.covered_mask >> v) & 1)
    removed = tuple(v for v in range(F.n) if not (out.covered_mask >> v) & 1)
    counts = {i: len(levels[i]) for i in range(1, k + 1)}
    return CleaningReport(out, kept, removed, counts, threshold)


def _check_sub(F: Hypergraph, Fp: Hypergraph) -> None:
    if (F.n, F.k) != (Fp.n, Fp.k):
        raise ParameterError("subgraph must share vertex count and uniformity with its host")
    if not Fp.edges <= F.edges:
        extra = sorted(Fp.edges - F.edges)[0]
        raise ParameterError(f"edge {extra} of the subgraph is missing from the host")


def clean_relative_deg(F: Hypergraph, Fp: Hypergraph, mu) -> CleaningReport:
    """Clean the union of F's complement with Fp, then keep only edges of Fp."""
    _check_sub(F, Fp)
    comp = F.complement()
    rep = clean_dense(Hypergraph(F.n, F.k, comp.edges | Fp.edges), mu)
    out = Hypergraph(F.n, F.k, rep.output.edges & Fp.edges)
    kept = tuple(v for v in range(F.n) if (out.covered_mask >> v) & 1)
    removed = tuple(v for v in range(F.n) if not (out.covered_mask >> v) & 1)
    return CleaningReport(out, kept, removed, rep.level_counts, rep.threshold)


def codegree_margin(F: Hypergraph, Fpp: Hypergraph) -> int:
    """max over sets S (|S| <= k-1) supported in Fpp of d¹_F(S) - d¹_Fpp(S)."""
    margin = 0
    for size in range(1, F.k):
        for S in Fpp.supported_sets(size):
            margin = max(margin, F.vertex_codegree(S) - Fpp.vertex_codegree(S))
    return margin


def clean_relative_codeg(F: Hypergraph, Fp: Hypergraph, mu, alpha) -> CleaningReport:
    alpha = as_fraction(alpha)
    _check_sub(F, Fp)
    dstar = supported_codegree(F)
    if dstar is None or dstar < alpha * F.n:
        raise ParameterError(f"host supported co-degree {dstar} is below alpha*n = {alpha * F.n}")
    rep = clean_relative_deg(F, Fp, mu)
    margin = codegree_margin(F, rep.output)
    return CleaningReport(rep.output, rep.kept_vertices, rep.removed_vertices, rep.level_counts, rep.threshold, margin)
