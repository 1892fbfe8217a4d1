from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hyperham.constructions import gen_loose_3uniform, gen_strong_lower_bound, gen_weak_lower_bound
from hyperham.core import Hypergraph, build_blowup, compute_t
from hyperham.errors import ParameterError
from hyperham.fractional import (
    FarkasCertificate,
    FractionalMatching,
    canonical_order,
    lift_pfm_through_blowup,
    partition_blowup_by_pfm,
    solve_weighted_pfm,
    verify_certificate,
    verify_matching,
    weight_vector,
)
from hyperham.walks import verify_ell_cycle

from conftest import complete, random_graph

W32 = weight_vector(compute_t(3, 2))
W31 = weight_vector(compute_t(3, 1))


def scipy_feasible(H, w):
    """Independent floating-point verdict from scipy's HiGHS solver."""
    linprog = pytest.importorskip("scipy.optimize").linprog
    np = pytest.importorskip("numpy")
    cols = []
    for e in H.edge_list:
        for i in range(H.k):
            col = np.zeros(H.n)
            for pos, v in enumerate(canonical_order(e, i)):
                col[v] += float(w[pos])
            cols.append(col)
    if not cols:
        return False
    A = np.array(cols).T
    res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=np.ones(H.n), bounds=(0, None), method="highs")
    return res.status == 0


def check_dichotomy(H, w):
    res = solve_weighted_pfm(H, w)
    if isinstance(res, FractionalMatching):
        assert verify_matching(H, res)
        return True
    assert isinstance(res, FarkasCertificate)
    assert verify_certificate(H, res)
    return False


class TestSolve:
    def test_weights(self):
        assert W32 == (2, 2, 2) and W31 == (2, 1, 1)

    def test_k6_feasible(self):
        res = solve_weighted_pfm(complete(6, 3), W32)
        assert isinstance(res, FractionalMatching) and verify_matching(complete(6, 3), res)

    def test_k6_hand_solution(self):
        q = FractionalMatching({(0, 1, 2): Fraction(1, 2), (3, 4, 5): Fraction(1, 2)}, W32)
        assert verify_matching(complete(6, 3), q)

    def test_isolated_vertex(self):
        H = complete(6, 3).induced(range(5))
        res = solve_weighted_pfm(H, W32)
        assert isinstance(res, FarkasCertificate) and verify_certificate(H, res)

    def test_weak_bound_infeasible(self):
        H = gen_weak_lower_bound(3, 2, 12).graph
        res = solve_weighted_pfm(H, W32)
        assert isinstance(res, FarkasCertificate) and verify_certificate(H, res)

    def test_edgeless(self):
        res = solve_weighted_pfm(Hypergraph(4, 3), W32)
        assert res.y == (-1,) * 4 and verify_certificate(Hypergraph(4, 3), res)

    def test_empty_vertex_set(self):
        with pytest.raises(ParameterError):
            solve_weighted_pfm(Hypergraph(0, 3), W32)

    @pytest.mark.parametrize("k,n", [(3, 6), (3, 9), (3, 12), (4, 8), (4, 12), (5, 10)])
    def test_complete_feasible(self, k, n):
        for ell in range(1, k):
            params = compute_t(k, ell)
            if n % params.t == 0:
                assert check_dichotomy(complete(n, k), weight_vector(params))

    @pytest.mark.parametrize(
        "wit,ell",
        [
            (gen_weak_lower_bound(3, 2, 9), 2),
            (gen_weak_lower_bound(3, 1, 8), 1),
            (gen_strong_lower_bound(3, 6), 1),
            (gen_loose_3uniform(6), 1),
            (gen_loose_3uniform(10), 1),
        ],
    )
    def test_generators_verdict_agrees_with_scipy(self, wit, ell):
        w = weight_vector(compute_t(3, ell))
        assert check_dichotomy(wit.graph, w) == scipy_feasible(wit.graph, w)

    @given(st.integers(0, 10_000), st.integers(4, 9), st.sampled_from([0.15, 0.4, 0.8]), st.sampled_from([1, 2]))
    def test_dichotomy_against_scipy(self, seed, n, p, ell):
        H = random_graph(n, 3, p, seed)
        w = weight_vector(compute_t(3, ell))
        assert check_dichotomy(H, w) == scipy_feasible(H, w)

    @given(st.integers(0, 10_000), st.sampled_from([Fraction(1, 3), Fraction(7, 2), Fraction(5)]))
    def test_scaling_invariance(self, seed, scale):
        H = random_graph(7, 3, 0.4, seed)
        a = isinstance(solve_weighted_pfm(H, W32), FractionalMatching)
        b = solve_weighted_pfm(H, W32, scale=scale)
        assert a == isinstance(b, FractionalMatching)
        if a:
            assert verify_matching(H, b)


class TestVerify:
    def test_bump_breaks(self):
        H = complete(6, 3)
        q = solve_weighted_pfm(H, W32)
        oe = next(iter(q.weights))
        bumped = dict(q.weights)
        bumped[oe] += Fraction(1, 10**6)
        assert not verify_matching(H, FractionalMatching(bumped, W32))

    def test_zero(self):
        H = complete(6, 3)
        zero = FractionalMatching({}, W32)
        assert verify_matching(H, zero, perfect=False)
        assert not verify_matching(H, zero, perfect=True)

    def test_tampered_certificate(self):
        H = gen_weak_lower_bound(3, 2, 12).graph
        cert = solve_weighted_pfm(H, W32)
        assert not verify_certificate(H, FarkasCertificate(tuple(-y for y in cert.y), cert.w))


class TestLift:
    def test_single_edge(self):
        F = Hypergraph(3, 3, frozenset([(0, 1, 2)]))
        G, spec = build_blowup(F, [3, 3, 3])
        q_star = solve_weighted_pfm(G, W32)
        assert isinstance(q_star, FractionalMatching)
        assert verify_matching(F, lift_pfm_through_blowup(spec, q_star))

    def test_single_edge_loose_uniform_weights(self):
        F = Hypergraph(3, 3, frozenset([(0, 1, 2)]))
        G, spec = build_blowup(F, [2, 2, 2])
        # each vertex lies in 4 blown edges and collects 2+1+1 per edge from the three orderings
        q = {canonical_order(e, i): Fraction(1, 16) for e in G.edge_list for i in range(3)}
        q_star = FractionalMatching(q, W31)
        assert verify_matching(G, q_star)
        assert verify_matching(F, lift_pfm_through_blowup(spec, q_star))

    def test_zero_is_not_perfect(self):
        F = complete(4, 3)
        _, spec = build_blowup(F, [3] * 4)
        lifted = lift_pfm_through_blowup(spec, FractionalMatching({}, W32))
        assert not verify_matching(F, lifted)

    def test_k4(self):
        F = complete(4, 3)
        G, spec = build_blowup(F, [3] * 4)
        q_star = solve_weighted_pfm(G, W32)
        assert verify_matching(F, lift_pfm_through_blowup(spec, q_star))

    def test_shape_mismatch(self):
        _, spec = build_blowup(complete(4, 3), [3, 3, 3, 2])
        with pytest.raises(ParameterError):
            lift_pfm_through_blowup(spec, FractionalMatching({}, W32))


class TestPartition:
    def test_single_edge(self):
        params = compute_t(3, 2)
        F = Hypergraph(3, 3, frozenset([(0, 1, 2)]))
        _, spec = build_blowup(F, [4, 4, 4], m=4)
        q = FractionalMatching({(0, 1, 2): Fraction(1, 2)}, W32)
        part = partition_blowup_by_pfm(spec, q, params)
        assert part.qhat_floor == {(0, 1, 2): 2}
        assert [len(p) for p in part.blocks[(0, 1, 2)]] == [4, 4, 4]
        assert part.covered() == 12

    def test_starved(self):
        params = compute_t(3, 2)
        F = Hypergraph(3, 3, frozenset([(0, 1, 2)]))
        _, spec = build_blowup(F, [1, 1, 1], m=1)
        q = FractionalMatching({(0, 1, 2): Fraction(1, 2)}, W32)
        part = partition_blowup_by_pfm(spec, q, params)
        assert part.blocks == {} and sum(len(v) for v in part.leftovers.values()) == 3

    def test_capacity(self):
        params = compute_t(3, 2)
        F = Hypergraph(3, 3, frozenset([(0, 1, 2)]))
        _, spec = build_blowup(F, [4, 4, 2], m=4)
        q = FractionalMatching({(0, 1, 2): Fraction(1, 2)}, W32)
        with pytest.raises(ParameterError, match="base vertex 2"):
            partition_blowup_by_pfm(spec, q, params)

    @pytest.mark.parametrize("ell", [1, 2])
    def test_k4_m20(self, ell):
        params = compute_t(3, ell)
        F = complete(4, 3)
        G, spec = build_blowup(F, [20] * 4, m=20)
        q = solve_weighted_pfm(F, weight_vector(params))
        part = partition_blowup_by_pfm(spec, q, params)
        k, s = 3, F.n
        assert part.covered() >= G.n - k * k * s ** (k - 1)
        covered = sorted(x for parts in part.blocks.values() for p in parts for x in p)
        left = sorted(x for v in part.leftovers.values() for x in v)
        assert sorted(covered + left) == list(range(G.n))
        for oe, parts in part.blocks.items():
            size = sum(len(p) for p in parts)
            assert size == part.qhat_floor[oe] * params.t * (k - 1)
            assert len(parts[0]) * params.t == size
            assert all(len(p) * params.t * (k - 1) == size * (params.t - 1) for p in parts[1:])
            assert verify_ell_cycle(G, part.cycles[oe], params)
            assert sorted(part.cycles[oe]) == sorted(x for p in parts for x in p)
        for v, rest in part.leftovers.items():
            assert len(rest) <= k * k * s ** (k - 1)
