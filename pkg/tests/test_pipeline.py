import itertools
import random
from fractions import Fraction

import pytest

from hyperham.constructions import gen_weak_lower_bound
from hyperham.core import Hypergraph, ToleranceConfig, compute_t, supported_codegree
from hyperham.errors import DomainError, ParameterError, StageFailure
from hyperham.matchings import kpartite_matching
from hyperham.oracle import NONE, hamilton_ell_cycle
from hyperham.pipeline import (
    DESK_TOLERANCE,
    ExtremalDecomposition,
    PathSystem,
    build_auxiliary,
    build_path_system,
    decompose_extremal,
    find_cherries,
    inheritance_check,
    required_codegree,
    run_extremal_pipeline,
    synthetic_near_extremal,
    verify_path_system,
)
from hyperham.walks import concat_supported_paths, verify_ell_cycle

from conftest import complete

P32 = compute_t(3, 2)


@pytest.fixture(scope="module")
def staged():
    G, A = synthetic_near_extremal(3, 2, 24, seed=1)
    dec = decompose_extremal(G, P32, DESK_TOLERANCE, seed=1)
    ps = build_path_system(G, dec, P32, DESK_TOLERANCE)
    aux = build_auxiliary(G, dec, ps, P32, DESK_TOLERANCE)
    return G, A, dec, ps, aux


class TestSynthetic:
    @pytest.mark.parametrize("n", [24, 36])
    def test_exact_codegree(self, n):
        G, A = synthetic_near_extremal(3, 2, n, seed=n)
        assert supported_codegree(G) == required_codegree(n, P32) == n - n // 3
        assert len(A) == n // 3 + 1

    def test_single_block_overshoots(self):
        # |A| = 5 forms one block of five, so the bound is met with room to spare
        G, _ = synthetic_near_extremal(3, 2, 12, seed=0)
        assert supported_codegree(G) > required_codegree(12, P32)

    def test_reproducible(self):
        assert synthetic_near_extremal(3, 2, 24, 5) == synthetic_near_extremal(3, 2, 24, 5)
        assert synthetic_near_extremal(3, 2, 24, 5)[0] != synthetic_near_extremal(3, 2, 24, 6)[0]


class TestDecompose:
    def test_partition_and_margins(self, staged):
        G, A, dec, _, _ = staged
        assert set(dec.A) <= set(dec.A_prime)
        assert sorted(dec.A_prime + dec.B_prime) == list(range(G.n))
        assert not set(dec.A_prime) & set(dec.B_prime)
        for key in ("ii_sizes_ok", "iii_margin", "iv_codegree_margin", "iv_rich_margin", "iv_no_isolated"):
            assert key in dec.diagnostics
        assert dec.diagnostics["iv_no_isolated"]
        assert dec.x == len(dec.A_prime) - G.n // 3

    def test_fb_plus_edges_are_rich(self, staged):
        G, _, dec, _, _ = staged
        amask = sum(1 << a for a in dec.A)
        eps_km1 = DESK_TOLERANCE.eps_km1
        for S in dec.F_B_plus.edges:
            vs = tuple(dec.b_index[i] for i in S)
            assert bin(G.neighbourhood_mask(vs) & amask).count("1") > len(dec.A) - eps_km1 * G.n

    def test_weak_bound_inputs(self):
        for n in (12, 24):
            w = gen_weak_lower_bound(3, 2, n)
            with pytest.raises(ParameterError):
                decompose_extremal(w.graph, P32, DESK_TOLERANCE)
            try:
                dec = decompose_extremal(w.graph, P32, DESK_TOLERANCE, enforce_codegree=False)
            except StageFailure as exc:
                assert exc.stage == "decomposition"
            else:
                assert set(dec.A) <= set(dec.A_prime)

    def test_complete_is_not_extremal(self):
        with pytest.raises(DomainError):
            decompose_extremal(complete(12, 3), P32, DESK_TOLERANCE)

    def test_witness_size(self):
        G, A = synthetic_near_extremal(3, 2, 24, seed=0)
        with pytest.raises(ParameterError):
            decompose_extremal(G, P32, DESK_TOLERANCE, witness=A[:3])

    def test_missing_tolerances(self):
        G, _ = synthetic_near_extremal(3, 2, 24, seed=0)
        with pytest.raises(ParameterError):
            decompose_extremal(G, P32, ToleranceConfig(eps=Fraction(1, 50), mu=Fraction(1, 4)))


def check_cherries(H, A, cherries, need):
    used = [v for c in cherries for v in c]
    assert len(cherries) == need and len(set(used)) == len(used)
    for a, c, b in cherries:
        assert a in A and b in A
        assert H.has_edge((a, c)) and H.has_edge((c, b))


class TestCherries:
    def test_complete_example_violates_size_bound(self):
        # |A| = 16 is not above 20/2 + 9 = 19, so the strict precondition refuses
        H = complete(20, 2)
        A = list(range(16))
        with pytest.raises(ParameterError):
            find_cherries(H, A, 2)
        check_cherries(H, set(A), find_cherries(H, A, 2, strict=False), 1)

    def test_complete_large_a(self):
        H = complete(40, 2)
        A = list(range(35))
        check_cherries(H, set(A), find_cherries(H, A, 2), 1)

    def test_star(self):
        H = Hypergraph(20, 2, frozenset((0, v) for v in range(1, 20)))
        assert find_cherries(H, list(range(1, 20)), 1) == []

    def test_low_degree(self):
        H = Hypergraph(30, 2, frozenset((v, v + 1) for v in range(29)))
        with pytest.raises(ParameterError):
            find_cherries(H, list(range(30)), 3)

    def test_random(self):
        rng = random.Random(3)
        done = 0
        for trial in range(200):
            n = rng.randint(20, 40)
            x = rng.randint(1, 3)
            H = Hypergraph(n, 2, frozenset(p for p in itertools.combinations(range(n), 2) if rng.random() < 0.5))
            A = sorted(rng.sample(range(n), min(n, n // 2 + 5 * x + rng.randint(0, 3))))
            degs = [bin(H.adjacency[v]).count("1") for v in range(n)]
            if min(degs) < x or len(A) <= n / 2 + 9 * x / 2:
                continue
            check_cherries(H, set(A), find_cherries(H, A, x), x - 1)
            done += 1
        assert done >= 100


class TestPathSystem:
    def test_hard_properties(self, staged):
        G, _, dec, ps, _ = staged
        checks = verify_path_system(G, dec, ps, P32, DESK_TOLERANCE)
        assert all(checks[k] for k in ("P1", "P2", "P5", "P6", "disjoint", "supports"))
        assert "P3_margin" in checks and "P4_margin" in checks
        assert ps.covered_A + ps.covered_B == sum(len(s) for s in ps.sequences)

    def test_loose_tight_excluded(self, staged):
        G, _, dec, _, _ = staged
        with pytest.raises(ParameterError):
            build_path_system(G, dec, compute_t(3, 1), DESK_TOLERANCE)


class TestAuxiliary:
    def test_sampled_predicate(self, staged):
        _, _, _, _, aux = staged
        rng = random.Random(0)
        for _ in range(100):
            e = tuple(rng.choice(p) for p in aux.parts)
            assert aux.graph.has_edge(e) == aux.evaluate(e)

    def test_audit(self, staged):
        _, _, _, _, aux = staged
        assert set(aux.audit) >= {"edges", "density", "codegree_deficit", "isolated", "codegree_bound"}
        assert aux.audit["edges"] == aux.graph.num_edges

    def test_transition_arcs_reverify(self, staged):
        G, _, _, _, aux = staged
        H = aux.graph
        km = kpartite_matching(H, aux.parts, seed=3, audit_levels=False)
        M = [tuple(e) for e in km.edges]
        for e, f in itertools.permutations(M, 2):
            if aux.links(e, f):
                joined = concat_supported_paths(G, aux.sequence(e), aux.sequence(f), P32)
                assert joined == aux.sequence(e) + aux.sequence(f)

    def test_complete_singletons(self):
        G = complete(12, 3)
        A = (8, 9, 10, 11)
        B = tuple(range(8))
        F = complete(8, 2)
        dec = ExtremalDecomposition(A, A, B, F, B, A, (), {"x": 0})
        ps = PathSystem([(a,) for a in A], 4, 0)
        aux = build_auxiliary(G, dec, ps, P32)
        assert aux.graph.num_edges == 4**3

    def test_empty_system(self):
        G = complete(12, 3)
        dec = ExtremalDecomposition((), (), tuple(range(12)), complete(12, 2), tuple(range(12)), (), (), {"x": 0})
        with pytest.raises(ParameterError):
            build_auxiliary(G, dec, PathSystem([], 0, 0), P32)


class TestRun:
    @pytest.mark.parametrize("seed", range(3))
    def test_synthetic_sound(self, seed):
        G, _ = synthetic_near_extremal(3, 2, 24, seed)
        res = run_extremal_pipeline(G, P32, seed=seed)
        if res.ok:
            assert verify_ell_cycle(G, res.cycle, P32, spanning=True)
            assert res.to_json()["status"] == "cycle"
        else:
            assert res.failure.stage

    def test_weak_bound_never_cycles(self):
        w = gen_weak_lower_bound(3, 2, 12)
        assert hamilton_ell_cycle(w.graph, P32).status == NONE
        for enforce in (True, False):
            res = run_extremal_pipeline(w.graph, P32, enforce_codegree=enforce)
            assert not res.ok
            out = res.to_json()
            assert out["status"] == "failure" and out["stage"]

    def test_indivisible(self):
        with pytest.raises(ParameterError):
            run_extremal_pipeline(complete(7, 3), compute_t(3, 1))

    def test_report_json_is_plain(self):
        import json

        G, _ = synthetic_near_extremal(3, 2, 24, 0)
        json.dumps(run_extremal_pipeline(G, P32).to_json())


class TestInheritance:
    def test_complete(self):
        tol = ToleranceConfig(eps=Fraction(1, 200), mu=Fraction(1, 100))
        rep = inheritance_check(complete(12, 3), P32, tol, W=(0, 1), s=9, samples=5)
        assert rep["members"] == 5 and rep["target"] == 1 - Fraction(1, 81)

    def test_bad_size(self):
        with pytest.raises(ParameterError):
            inheritance_check(complete(12, 3), P32, DESK_TOLERANCE, W=(0, 1, 2), s=2)
