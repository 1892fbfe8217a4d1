"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
3 resource or budget exhaustion, 4 staged pipeline failure.
"""
from __future__ import annotations

import argparse
import contextlib
import dataclasses
import hashlib
import io
import itertools
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bench
from .absorption import (
    build_master_walk,
    find_sequence_absorber,
    find_vertex_absorber,
    join_tight_walk,
    join_with_congruence,
    verify_master_walk,
)
from .cleaning import clean_dense, clean_relative_deg
from .constructions import construct_kpartite_ell_cycle
from .core import (
    Hypergraph,
    compute_t,
    hypergraph_to_json,
    read_hypergraph,
    supported_codegree,
    write_hypergraph,
)
from .errors import (
    DomainError,
    FormatError,
    HyperhamError,
    ParameterError,
    ResourceError,
    SearchExhausted,
    StageFailure,
)
from .fractional import (
    FarkasCertificate,
    canonical_order,
    FractionalMatching,
    solve_weighted_pfm,
    verify_certificate,
    verify_matching,
    weight_vector,
)
from .matchings import (
    Digraph,
    derive_rng,
    directed_hamilton,
    is_perfect_matching,
    random_dense_digraph,
    random_matching_with_families,
)
from .oracle import BUDGET, FOUND, OracleBudget, hamilton_ell_cycle, hamilton_ell_path_between
from .pipeline import DESK_TOLERANCE, run_extremal_pipeline, synthetic_near_extremal
from .walks import (
    diagnose_ell_cycle,
    diagnose_ell_path,
    diagnose_ell_walk,
    diagnose_supports_ell_path,
    diagnose_supports_extended_ell_path,
    diagnose_tight_walk,
)

OK, NEGATIVE, USAGE, RESOURCE, STAGED = 0, 1, 2, 3, 4


@dataclass
class Outcome:
    code: int
    payload: dict
    written: list[str] = field(default_factory=list)


@dataclass
class RunManifest:
    command: str
    arguments: list[str]
    seed: int
    inputs: dict[str, str]
    outputs: dict[str, str]
    wall_time: float
    exit_code: int

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "arguments": self.arguments,
            "seed": self.seed,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "wall_time": round(self.wall_time, 6),
            "exit_code": self.exit_code,
        }


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def vertex_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated vertex ids, got {text!r}") from exc


def jsonable(value):
    return bench.jsonable(value)


def digest_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True) + "\n", encoding="utf-8")


def load_sequence(path) -> tuple[int, ...]:
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("sequence", obj.get("cycle"))
    if not isinstance(obj, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
        raise FormatError(f"{path}: expected a list of vertex ids or an object with 'sequence'")
    return tuple(obj)


def load_digraph(path) -> Digraph:
    obj = _load_json(path)
    try:
        return Digraph(int(obj["n"]), frozenset((int(u), int(v)) for u, v in obj["arcs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: expected {{'n': int, 'arcs': [[u, v], ...]}}") from exc


def matching_to_json(result, k: int, ell: int) -> dict:
    """{"feasible": true, "q": [[edge, position, "p/q"], ...]} or {"feasible": false, "certificate": [...]}."""
    base = {"k": k, "ell": ell, "w": [str(x) for x in result.w]}
    if isinstance(result, FractionalMatching):
        rows = []
        for oe in sorted(result.weights):
            edge = sorted(oe)
            rows.append([edge, edge.index(oe[0]), str(result.weights[oe])])
        return {"feasible": True, "q": rows, **base}
    return {"feasible": False, "certificate": [str(x) for x in result.y], **base}


def matching_from_json(obj):
    try:
        w = tuple(Fraction(x) for x in obj["w"])
        if obj["feasible"]:
            weights = {}
            for edge, pos, value in obj["q"]:
                oe = canonical_order(edge, pos)
                weights[oe] = weights.get(oe, Fraction(0)) + Fraction(value)
            return FractionalMatching(weights, w)
        return FarkasCertificate(tuple(Fraction(x) for x in obj["certificate"]), w)
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed matching file: {exc!r}") from exc


# -- subcommands ---------------------------------------------------------------------


def _sidecar(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + ".meta" + (p.suffix or ".json")))


def cmd_gen(args, seed: int) -> Outcome:
    kind = args.kind
    meta: dict
    if kind in ("weak", "strong", "loose"):
        ell = args.ell if args.ell is not None else args.k - 1
        w = bench.generate(kind, args.k, ell, args.n)
        G, meta = w.graph, w.metadata()
    elif kind == "kpartite":
        params = compute_t(args.k, args.ell)
        c = construct_kpartite_ell_cycle(params, args.n, materialize=True)
        G = c.graph
        meta = {"kind": kind, "k": args.k, "ell": args.ell, "n": args.n, "sequence": list(c.sequence),
                "marked_edge": list(c.marked_edge), "A": list(c.A)}
    elif kind == "synthetic":
        G, A = synthetic_near_extremal(args.k, args.ell, args.n, seed)
        meta = {"kind": kind, "k": args.k, "ell": args.ell, "n": args.n, "A": list(A), "seed": seed}
    elif kind == "complete":
        G = Hypergraph(args.n, args.k, frozenset(itertools.combinations(range(args.n), args.k)))
        meta = {"kind": kind, "k": args.k, "n": args.n}
    else:
        rng = derive_rng("gen-random", seed)
        G = Hypergraph(
            args.n, args.k, frozenset(e for e in itertools.combinations(range(args.n), args.k) if rng.random() < args.p)
        )
        meta = {"kind": kind, "k": args.k, "n": args.n, "p": str(args.p), "seed": seed}
    meta.setdefault("delta_star", supported_codegree(G))
    meta["edges"] = G.num_edges
    if args.out is None:
        return Outcome(OK, hypergraph_to_json(G))
    write_hypergraph(G, args.out)
    side = _sidecar(args.out)
    _write_json(side, jsonable(meta))
    return Outcome(OK, {"graph": args.out, "metadata": side, **jsonable(meta)}, [args.out, side])


def _params_for(G: Hypergraph, ell: int | None):
    if ell is None:
        raise ParameterError("--ell is required here")
    if not 1 <= ell < G.k:
        raise ParameterError(f"ell={ell} must lie in [1, {G.k - 1}]")
    return compute_t(G.k, ell)


def cmd_verify(args, seed: int) -> Outcome:
    G = read_hypergraph(args.graph)
    seq = load_sequence(args.seq)
    if args.kind == "tight-walk":
        d = diagnose_tight_walk(G, seq)
    else:
        params = _params_for(G, args.ell)
        d = {
            "cycle": lambda: diagnose_ell_cycle(G, seq, params, spanning=args.spanning),
            "path": lambda: diagnose_ell_path(G, seq, params),
            "walk": lambda: diagnose_ell_walk(G, seq, params),
            "supports": lambda: diagnose_supports_ell_path(G, seq, params),
            "extended": lambda: diagnose_supports_extended_ell_path(G, seq, params),
        }[args.kind]()
    payload = {"kind": args.kind, "valid": d.ok}
    if not d.ok:
        payload["reason"] = d.reason
        if d.index is not None:
            payload["index"] = d.index
    return Outcome(OK if d.ok else NEGATIVE, payload)


def cmd_oracle(args, seed: int) -> Outcome:
    G = read_hypergraph(args.graph)
    params = _params_for(G, args.ell)
    budget = OracleBudget(args.node_limit, args.time_limit, not args.no_symmetry)
    if args.ends:
        v = hamilton_ell_path_between(G, args.ends[0], args.ends[1], params, budget)
    else:
        v = hamilton_ell_cycle(G, params, budget, mis_prune=not args.no_prune)
    code = OK if v.status == FOUND else RESOURCE if v.status == BUDGET else NEGATIVE
    return Outcome(code, v.to_json())


def cmd_pfm(args, seed: int) -> Outcome:
    G = read_hypergraph(args.graph)
    if args.verify:
        raw = _load_json(args.verify)
        ell = args.ell if args.ell is not None else raw.get("ell") if isinstance(raw, dict) else None
        params = _params_for(G, ell)
        obj = matching_from_json(raw)
        if tuple(obj.w) != weight_vector(params):
            return Outcome(NEGATIVE, {"valid": False, "reason": "weight vector does not match (k, ell)"})
        ok = verify_matching(G, obj) if isinstance(obj, FractionalMatching) else verify_certificate(G, obj)
        kind = "matching" if isinstance(obj, FractionalMatching) else "certificate"
        return Outcome(OK if ok else NEGATIVE, {"valid": ok, "kind": kind})
    params = _params_for(G, args.ell)
    res = solve_weighted_pfm(G, weight_vector(params))
    payload = matching_to_json(res, G.k, args.ell)
    written = []
    if args.out:
        _write_json(args.out, payload)
        written.append(args.out)
    return Outcome(OK if isinstance(res, FractionalMatching) else NEGATIVE, payload, written)


def cmd_clean(args, seed: int) -> Outcome:
    G = read_hypergraph(args.graph)
    if args.relative:
        rep = clean_relative_deg(read_hypergraph(args.relative), G, args.mu)
    else:
        rep = clean_dense(G, args.mu)
    payload = {
        "kept": list(rep.kept_vertices),
        "removed": list(rep.removed_vertices),
        "edges": rep.output.num_edges,
        "delta_star": supported_codegree(rep.output),
        "threshold": rep.threshold,
        "level_counts": rep.level_counts,
    }
    written = []
    if args.out:
        write_hypergraph(rep.output, args.out)
        side = _sidecar(args.out)
        _write_json(side, jsonable(payload))
        written += [args.out, side]
    return Outcome(OK, jsonable(payload), written)


def _absorber_json(A) -> dict:
    return {
        "segments": [list(seg) for seg in A.segments],
        "target": list(A.target),
        "plain": list(A.plain()),
        "absorbed": list(A.absorbed()),
    }


def cmd_walk(args, seed: int) -> Outcome:
    G = read_hypergraph(args.graph)
    rng = derive_rng("walk", seed)
    if args.action == "absorber":
        if args.target_seq is None:
            if args.vertex is None:
                raise ParameterError("give --vertex V or --absorb U")
            return Outcome(OK, _absorber_json(find_vertex_absorber(G, args.vertex, rng)))
        params = _params_for(G, args.ell)
        A = find_sequence_absorber(G, args.target_seq, args.q or 0, params, rng)
        return Outcome(OK, _absorber_json(A))
    if args.source is None or args.target is None:
        raise ParameterError("give --from and --to")
    if args.action == "master":
        params = _params_for(G, args.ell)
        mw = build_master_walk(G, args.source, args.target, args.d, params, rng=rng, strict_size=False)
        checks = verify_master_walk(G, mw, params)
        payload = {
            "order": len(mw.walk),
            "checks": checks,
            "edge_ranges": [[list(e), a, b] for e, (a, b) in sorted(mw.edge_ranges.items())],
            "absorber_ranges": [
                [list(U), [[a, b, list(c)] for a, b, c in rs]] for U, rs in sorted(mw.absorber_ranges.items())
            ],
            "walk": list(mw.walk),
        }
        return Outcome(OK if all(checks.values()) else NEGATIVE, payload)
    if args.q is None:
        W = join_tight_walk(G, args.source, args.target, rng)
        return Outcome(OK, {"walk": list(W), "order": len(W)})
    params = _params_for(G, args.ell)
    W = join_with_congruence(G, args.source, args.target, args.q, params, rng)
    return Outcome(OK, {"walk": list(W), "order": len(W), "residue": len(W) % params.step})


def cmd_match(args, seed: int) -> Outcome:
    H, fams = bench.matching_scenario(args.n, seed, args.families, args.drop, args.family_drop)
    res = random_matching_with_families(H, fams, beta=args.beta, seed=seed)
    perfect = is_perfect_matching(H, res.matching)
    payload = {
        "perfect": perfect,
        "counts": list(res.counts),
        "smallest_count": min(res.counts, default=None),
        "greedy_steps": res.greedy_steps,
        "hall_bound_met": res.hall_bound_met,
        "matching": [[x, res.matching[x]] for x in sorted(res.matching)],
    }
    return Outcome(OK if perfect else NEGATIVE, payload)


def cmd_dham(args, seed: int) -> Outcome:
    if args.digraph:
        D = load_digraph(args.digraph)
    elif args.random is not None:
        D = random_dense_digraph(args.random, args.min_semi, derive_rng("dham-random", seed))
    else:
        raise ParameterError("give --digraph FILE or --random N")
    cyc = directed_hamilton(D, cap=args.cap, seed=seed, node_limit=args.node_limit)
    payload = {"n": D.n, "min_semidegree": D.min_semidegree(), "status": "found" if cyc else "none"}
    if cyc:
        payload["cycle"] = list(cyc)
    return Outcome(OK if cyc else NEGATIVE, payload)


def cmd_pipeline(args, seed: int) -> Outcome:
    if args.synthetic:
        G, _ = synthetic_near_extremal(args.k, args.ell, args.n, seed)
    elif args.graph:
        G = read_hypergraph(args.graph)
    else:
        raise ParameterError("give --graph FILE or --synthetic with --k --ell --n")
    params = _params_for(G, args.ell)
    tol = DESK_TOLERANCE
    if args.mu is not None or args.eps is not None:
        tol = dataclasses.replace(
            tol,
            mu=tol.mu if args.mu is None else args.mu,
            eps=tol.eps if args.eps is None else args.eps,
        )
    res = run_extremal_pipeline(
        G,
        params,
        tol,
        seed=seed,
        witness=args.witness,
        enforce_codegree=not args.no_codegree,
        attempts=args.attempts,
    )
    return Outcome(OK if res.ok else STAGED, res.to_json())


def cmd_bench(args, seed: int) -> Outcome:
    results = bench.run_suite(args.suite, seed)
    payload = {"suite": args.suite, "seed": seed, "results": [r.to_json() for r in results]}
    return Outcome(OK if all(r.passed for r in results) else NEGATIVE, payload)


def cmd_replay(args, seed: int) -> Outcome:
    same = replay_manifest(args.path)
    return Outcome(OK if same else NEGATIVE, {"manifest": args.path, "reproduced": same})


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="root seed; a fresh one is drawn and recorded if absent")
    common.add_argument("--manifest", default=None, help="write a run manifest to this path")

    p = argparse.ArgumentParser(prog="hyperham", description="Hamilton ell-cycles in uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a hypergraph")
    g.add_argument("--kind", required=True, choices=["weak", "strong", "loose", "kpartite", "synthetic", "complete", "random"])
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--ell", type=int, default=None)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=rational, default=Fraction(1, 2), help="edge probability for --kind random")
    g.add_argument("--out", default=None)
    g.set_defaults(run=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="check a vertex sequence")
    v.add_argument("--graph", required=True)
    v.add_argument("--seq", required=True)
    v.add_argument("--ell", type=int, default=None)
    v.add_argument("--kind", default="cycle", choices=["cycle", "path", "walk", "tight-walk", "supports", "extended"])
    v.add_argument("--spanning", action="store_true")
    v.set_defaults(run=cmd_verify)

    o = sub.add_parser("oracle", parents=[common], help="exhaustive Hamilton ell-cycle or ell-path search")
    o.add_argument("--graph", required=True)
    o.add_argument("--ell", type=int, required=True)
    o.add_argument("--node-limit", "--budget-nodes", dest="node_limit", type=int, default=None)
    o.add_argument("--time-limit", "--budget-secs", dest="time_limit", type=float, default=None)
    o.add_argument("--no-prune", action="store_true")
    o.add_argument("--no-symmetry", action="store_true")
    o.add_argument("--ends", type=vertex_list, nargs=2, default=None, metavar="EDGE")
    o.set_defaults(run=cmd_oracle)

    f = sub.add_parser("pfm", parents=[common], help="weighted perfect fractional matching or certificate")
    f.add_argument("--graph", required=True)
    f.add_argument("--ell", type=int, default=None, help="required unless verifying a file that records it")
    f.add_argument("--out", default=None)
    f.add_argument("--verify", default=None, help="check a stored matching or certificate instead of solving")
    f.set_defaults(run=cmd_pfm)

    c = sub.add_parser("clean", parents=[common], help="clean an almost complete hypergraph")
    c.add_argument("--graph", required=True)
    c.add_argument("--mu", type=rational, default=Fraction(1, 10))
    c.add_argument("--relative", default=None, help="host graph; the input is then cleaned relative to it")
    c.add_argument("--out", default=None)
    c.set_defaults(run=cmd_clean)

    w = sub.add_parser("walk", parents=[common], help="connecting walks, absorbers and master walks")
    w.add_argument("action", nargs="?", default="join", choices=["join", "absorber", "master"])
    w.add_argument("--graph", required=True)
    w.add_argument("--from", dest="source", type=vertex_list, default=None)
    w.add_argument("--to", dest="target", type=vertex_list, default=None)
    w.add_argument("--q", type=int, default=None, help="required order modulo k-ell")
    w.add_argument("--ell", type=int, default=None)
    w.add_argument("--vertex", type=int, default=None, help="vertex to absorb")
    w.add_argument("--absorb", dest="target_seq", type=vertex_list, default=None, help="sequence to absorb")
    w.add_argument("--d", type=int, default=1, help="absorbers per sequence in a master walk")
    w.set_defaults(run=cmd_walk)

    m = sub.add_parser("match", parents=[common], help="random perfect matching with family counts")
    m.add_argument("--n", type=int, default=200)
    m.add_argument("--families", type=int, default=10)
    m.add_argument("--drop", type=rational, default=Fraction(1, 100))
    m.add_argument("--family-drop", type=rational, default=Fraction(1, 100))
    m.add_argument("--beta", type=rational, default=Fraction(1, 10))
    m.set_defaults(run=cmd_match)

    d = sub.add_parser("dham", parents=[common], help="directed Hamilton cycle")
    d.add_argument("--digraph", default=None)
    d.add_argument("--random", type=int, default=None, metavar="N")
    d.add_argument("--min-semi", type=int, default=0)
    d.add_argument("--cap", type=int, default=16)
    d.add_argument("--node-limit", type=int, default=None)
    d.set_defaults(run=cmd_dham)

    pl = sub.add_parser("pipeline", parents=[common], help="extremal-case construction")
    pl.add_argument("mode", nargs="?", default="extremal", choices=["extremal"])
    pl.add_argument("--graph", "--input", dest="graph", default=None)
    pl.add_argument("--mu", type=rational, default=None)
    pl.add_argument("--eps", type=rational, default=None)
    pl.add_argument("--synthetic", action="store_true")
    pl.add_argument("--k", type=int, default=3)
    pl.add_argument("--ell", type=int, required=True)
    pl.add_argument("--n", type=int, default=24)
    pl.add_argument("--witness", type=vertex_list, default=None)
    pl.add_argument("--no-codegree", action="store_true")
    pl.add_argument("--attempts", type=int, default=5)
    pl.set_defaults(run=cmd_pipeline)

    b = sub.add_parser("bench", parents=[common], help="run an acceptance batch")
    b.add_argument("suite", choices=sorted(bench.SUITES))
    b.set_defaults(run=cmd_bench)

    r = sub.add_parser("replay", parents=[common], help="re-run a manifest and compare output digests")
    r.add_argument("path")
    r.set_defaults(run=cmd_replay)
    return p


_INPUT_ATTRS = ("graph", "seq", "verify", "digraph", "relative")


def _strip_manifest(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--manifest":
            skip = True
            continue
        if a.startswith("--manifest="):
            continue
        out.append(a)
    return out


def dispatch(argv: list[str] | None = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    seed = args.seed if args.seed is not None else int.from_bytes(os.urandom(4), "big")
    t0 = time.monotonic()
    try:
        outcome = args.run(args, seed)
    except (ParameterError, FormatError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ResourceError as exc:
        outcome = Outcome(RESOURCE, {"status": "resource", "reason": str(exc)})
    except SearchExhausted as exc:
        outcome = Outcome(NEGATIVE, {"status": "search-exhausted", "reason": str(exc)})
    except StageFailure as exc:
        outcome = Outcome(STAGED, {"status": "failure", "stage": exc.stage, "reason": exc.reason})
    except HyperhamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    text = json.dumps(outcome.payload, sort_keys=True)
    print(text, file=stdout)
    if args.manifest:
        replay_args = _strip_manifest(argv)
        if args.seed is None:
            replay_args += ["--seed", str(seed)]
        inputs = {getattr(args, a): digest_file(getattr(args, a)) for a in _INPUT_ATTRS if getattr(args, a, None)}
        outputs = {"stdout": digest_text(text + "\n")}
        outputs.update({p: digest_file(p) for p in outcome.written})
        man = RunManifest(args.command, replay_args, seed, inputs, outputs, time.monotonic() - t0, outcome.code)
        _write_json(args.manifest, man.to_json())
    return outcome.code


def replay_manifest(path) -> bool:
    """Re-run a manifest and compare every recorded output digest."""
    man = _load_json(path)
    buf = io.StringIO()
    with contextlib.redirect_stderr(io.StringIO()):
        code = dispatch(list(man["arguments"]), stdout=buf)
    if code != man["exit_code"]:
        return False
    for name, digest in man["outputs"].items():
        got = digest_text(buf.getvalue()) if name == "stdout" else digest_file(name)
        if got != digest:
            return False
    return True


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
