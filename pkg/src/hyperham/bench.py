"""Batch experiments behind ``hyperham bench`` and the acceptance tests.

Each ``check_*`` function runs one batch and returns a CheckResult whose
``detail`` is plain JSON (rationals as strings).
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .cleaning import clean_dense
from .constructions import (
    construct_kpartite_ell_cycle,
    gen_loose_3uniform,
    gen_strong_lower_bound,
    gen_weak_lower_bound,
)
from .core import CycleParams, Hypergraph, compute_t, supported_codegree
from .fractional import FractionalMatching, solve_weighted_pfm, verify_certificate, verify_matching, weight_vector
from .matchings import (
    BipartiteGraph,
    derive_rng,
    directed_hamilton,
    is_perfect_matching,
    random_dense_digraph,
    random_matching_with_families,
    verify_directed_cycle,
)
from .oracle import NONE, OracleBudget, hamilton_ell_cycle
from .pipeline import DESK_TOLERANCE, run_extremal_pipeline, synthetic_near_extremal
from .walks import verify_ell_cycle


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": jsonable(self.detail)}


def jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def _timed(name, fn, *args, **kwargs) -> CheckResult:
    t0 = time.monotonic()
    passed, detail = fn(*args, **kwargs)
    return CheckResult(name, passed, detail, time.monotonic() - t0)


# -- constructions -----------------------------------------------------------------

EXTREMAL_CASES = (
    ("weak", 3, 2, 9),
    ("weak", 3, 2, 12),
    ("weak", 3, 1, 6),
    ("weak", 3, 1, 8),
    ("strong", 5, 2, 9),
    ("loose", 3, 1, 6),
    ("loose", 3, 1, 10),
)


def derived_codegree(kind: str, k: int, ell: int, n: int) -> int:
    """Supported co-degree of each generator obtained by counting."""
    t = compute_t(k, ell).t
    if kind == "weak":
        return n - (n // t + 1) - (k - 2)
    if kind == "strong":
        return n - (n // t + 1) - (k - 3)
    if kind == "loose":
        return n // 2 - 1
    raise ValueError(kind)


def generate(kind: str, k: int, ell: int, n: int):
    if kind == "weak":
        return gen_weak_lower_bound(k, ell, n)
    if kind == "strong":
        return gen_strong_lower_bound(k, n)
    if kind == "loose":
        return gen_loose_3uniform(n)
    raise ValueError(kind)


def _extremal(cases=EXTREMAL_CASES, node_limit=None):
    rows = []
    for kind, k, ell, n in cases:
        w = generate(kind, k, ell, n)
        dstar = supported_codegree(w.graph)
        verdict = hamilton_ell_cycle(w.graph, w.params, OracleBudget(node_limit=node_limit))
        rows.append(
            {
                "case": f"{kind}({k},{ell},{n})",
                "delta_star": dstar,
                "derived": derived_codegree(kind, k, ell, n),
                "oracle": verdict.status,
                "ok": dstar == derived_codegree(kind, k, ell, n) and verdict.status == NONE,
            }
        )
    return all(r["ok"] for r in rows), {"cases": rows}


def check_extremal_constructions(**kw) -> CheckResult:
    return _timed("extremal constructions", _extremal, **kw)


def _kpartite(ks=range(3, 7), ms=(1, 2, 3)):
    rows = []
    for k in ks:
        for ell in range(1, k):
            params = compute_t(k, ell)
            for m in ms:
                r = params.t * (k - 1) * m
                c = construct_kpartite_ell_cycle(params, r)
                ok = (
                    len(c.sequence) == r
                    and len(set(c.sequence)) == r
                    and verify_ell_cycle(c.graph, c.sequence, params, spanning=True)
                    and tuple(c.sequence[:k]) == tuple(c.marked_edge)
                    and c.graph.has_edge(tuple(sorted(c.marked_edge)))
                )
                rows.append({"k": k, "ell": ell, "r": r, "ok": ok})
    return all(r["ok"] for r in rows), {"instances": len(rows), "failures": [r for r in rows if not r["ok"]]}


def check_kpartite_cycles(**kw) -> CheckResult:
    return _timed("k-partite ell-cycle constructor", _kpartite, **kw)


# -- LP dichotomy --------------------------------------------------------------------


def lp_verdict(H: Hypergraph, params: CycleParams) -> str:
    """'matching' or 'certificate', after re-verifying the returned object."""
    out = solve_weighted_pfm(H, weight_vector(params))
    if isinstance(out, FractionalMatching):
        if not verify_matching(H, out):
            raise AssertionError("returned matching fails verification")
        return "matching"
    if not verify_certificate(H, out):
        raise AssertionError("returned certificate fails verification")
    return "certificate"


def small_three_graphs(sample: int = 2000, seed: int = 0):
    """Every 3-graph on at most 5 vertices plus a seeded sample on 6 vertices."""
    for n in range(3, 6):
        triples = list(itertools.combinations(range(n), 3))
        for bits in range(1 << len(triples)):
            yield Hypergraph(n, 3, frozenset(t for i, t in enumerate(triples) if bits >> i & 1))
    rng = derive_rng("lp-sample", seed)
    triples = list(itertools.combinations(range(6), 3))
    for _ in range(sample):
        yield Hypergraph(6, 3, frozenset(t for t in triples if rng.random() < 0.5))


def _lp(sample=2000, seed=0):
    tallies = {}
    bad = []
    for ell in (1, 2):
        params = compute_t(3, ell)
        tally = {"matching": 0, "certificate": 0}
        for H in small_three_graphs(sample, seed):
            try:
                tally[lp_verdict(H, params)] += 1
            except AssertionError as exc:
                bad.append({"edges": sorted(H.edges), "ell": ell, "error": str(exc)})
        tallies[f"ell={ell}"] = tally
    named = {
        "weak(3,2,12)": (gen_weak_lower_bound(3, 2, 12).graph, compute_t(3, 2), "certificate"),
        "strong(5,9)": (gen_strong_lower_bound(5, 9).graph, compute_t(5, 2), None),
        "loose(6)": (gen_loose_3uniform(6).graph, compute_t(3, 1), None),
        "K6": (Hypergraph(6, 3, frozenset(itertools.combinations(range(6), 3))), compute_t(3, 2), "matching"),
    }
    fixed = {}
    for name, (H, params, want) in named.items():
        got = lp_verdict(H, params)
        fixed[name] = got
        if want is not None and got != want:
            bad.append({"case": name, "expected": want, "got": got})
    return not bad, {"tallies": tallies, "named": fixed, "problems": bad}


def check_lp_dichotomy(**kw) -> CheckResult:
    return _timed("LP dichotomy", _lp, **kw)


# -- cleaning ------------------------------------------------------------------------


def near_complete(n: int, fraction: Fraction, seed: int) -> tuple[Hypergraph, Fraction]:
    """K_n^(3) minus round(fraction * C(n,3)) random edges; returns the graph and its edge deficit."""
    triples = list(itertools.combinations(range(n), 3))
    drop = round(fraction * len(triples))
    rng = derive_rng("near-complete", seed * 1_000 + n)
    gone = set(rng.sample(triples, drop))
    return Hypergraph(n, 3, frozenset(t for t in triples if t not in gone)), Fraction(drop, len(triples))


def cleaning_case(n: int, seed: int, mu=Fraction(1, 10), fraction=Fraction(1, 200)) -> dict:
    F, eps = near_complete(n, fraction, seed)
    rep = clean_dense(F, mu)
    out = rep.output
    dstar = supported_codegree(out)
    bound = (1 - 2**3 * mu) * n
    levels = rep.level_bounds(eps, mu)
    return {
        "n": n,
        "seed": seed,
        "isolated": len(out.isolated_vertices()),
        "delta_star": dstar,
        "bound": bound,
        "levels_ok": all(ok for _, _, ok in levels.values()),
        "ok": not out.isolated_vertices() and dstar is not None and dstar >= bound
        and all(ok for _, _, ok in levels.values()),
    }


def _cleaning(sizes=(20, 40), seeds=range(10), seed: int = 0):
    rows = [cleaning_case(n, seed * 100 + s) for n in sizes for s in seeds]
    per_size = {n: sum(r["ok"] for r in rows if r["n"] == n) for n in sizes}
    return all(r["ok"] for r in rows), {"passes_per_size": per_size, "failures": [r for r in rows if not r["ok"]]}


def check_cleaning(**kw) -> CheckResult:
    return _timed("cleaning", _cleaning, **kw)


# -- matchings -----------------------------------------------------------------------


def matching_scenario(n: int, seed: int, families: int = 10, drop=Fraction(1, 100), family_drop=Fraction(1, 100)):
    rng = derive_rng("matching-scenario", seed)
    allpairs = [(x, y) for x in range(n) for y in range(n)]
    gone = set(rng.sample(allpairs, round(drop * len(allpairs))))
    H = BipartiteGraph(n, n, frozenset(p for p in allpairs if p not in gone))
    hedges = sorted(H.edges)
    fams = []
    for _ in range(families):
        cut = set(rng.sample(hedges, round(family_drop * len(hedges))))
        fams.append(frozenset(p for p in hedges if p not in cut))
    return H, fams


def _matchings(n=200, runs=100, need_runs=99, beta=Fraction(1, 10), seed: int = 0):
    ok_runs = 0
    perfect = 0
    worst = None
    for run in range(runs):
        H, fams = matching_scenario(n, seed * 1_000 + run)
        res = random_matching_with_families(H, fams, beta=beta, seed=seed * 1_000 + run)
        perfect += is_perfect_matching(H, res.matching)
        low = min(res.counts)
        worst = low if worst is None else min(worst, low)
        ok_runs += low >= Fraction(9, 10) * n
    return perfect == runs and ok_runs >= need_runs, {
        "runs": runs,
        "perfect": perfect,
        "runs_meeting_0.9n": ok_runs,
        "smallest_count": worst,
    }


def check_random_matchings(**kw) -> CheckResult:
    return _timed("random matchings", _matchings, **kw)


def _digraphs(count=500, n=12, min_semi=6, seed=0):
    rng = derive_rng("digraph-batch", seed)
    found = 0
    for i in range(count):
        D = random_dense_digraph(n, min_semi, rng, p=rng.uniform(0.3, 0.7))
        cyc = directed_hamilton(D, seed=i)
        found += cyc is not None and verify_directed_cycle(D, cyc)
    return found == count, {"instances": count, "cycles": found}


def check_dense_digraphs(**kw) -> CheckResult:
    return _timed("dense digraphs", _digraphs, **kw)


# -- pipeline ------------------------------------------------------------------------


def _pipeline(sizes=(24, 36), seeds=range(10), seed: int = 0, k=3, ell=2):
    params = compute_t(k, ell)
    rates = {}
    unsound = []
    for n in sizes:
        wins = 0
        for s in seeds:
            G, _ = synthetic_near_extremal(k, ell, n, seed * 1_000 + s)
            res = run_extremal_pipeline(G, params, DESK_TOLERANCE, seed=seed * 1_000 + s)
            if res.ok:
                if not verify_ell_cycle(G, res.cycle, params, spanning=True):
                    unsound.append({"n": n, "seed": s})
                else:
                    wins += 1
        rates[n] = Fraction(wins, len(seeds))
    false_pos = []
    oracle = {}
    for n in (12, 24):
        W = gen_weak_lower_bound(k, ell, n).graph
        for enforce in (True, False):
            res = run_extremal_pipeline(W, params, DESK_TOLERANCE, seed=seed, enforce_codegree=enforce)
            if res.ok:
                false_pos.append({"n": n, "enforce": enforce})
        if n == 12:
            oracle[n] = hamilton_ell_cycle(W, params).status
    sound = not unsound and not false_pos and all(v == NONE for v in oracle.values())
    target = all(r >= Fraction(8, 10) for r in rates.values())
    return sound and target, {
        "success_rate": rates,
        "unsound": unsound,
        "false_positives": false_pos,
        "oracle_on_extremal": oracle,
        "target_met": target,
    }


def check_pipeline(**kw) -> CheckResult:
    return _timed("extremal pipeline", _pipeline, **kw)


SEEDED = {check_lp_dichotomy, check_cleaning, check_random_matchings, check_dense_digraphs, check_pipeline}

SUITES = {
    "constructions": (check_extremal_constructions, check_kpartite_cycles),
    "lp": (check_lp_dichotomy,),
    "cleaning": (check_cleaning,),
    "matchings": (check_random_matchings, check_dense_digraphs),
    "pipeline": (check_pipeline,),
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(name)
    return [fn(seed=seed) if fn in SEEDED else fn() for fn in SUITES[name]]
