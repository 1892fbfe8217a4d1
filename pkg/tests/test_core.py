import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hyperham.constructions import gen_strong_lower_bound, gen_weak_lower_bound
from hyperham.core import (
    Hypergraph,
    ToleranceConfig,
    build_blowup,
    check_special_vertex_property,
    classify_non_extremal,
    codeg_to_deg_bound_check,
    compute_t,
    loads_hypergraph,
    dumps_hypergraph,
    max_strong_independent_set,
    is_strong_independent,
    shadow,
    shadow_to_dot,
    supported_codegree,
    vertex_neighbourhood,
)
from hyperham.errors import DomainError, FormatError, ParameterError, ResourceError

from conftest import complete, random_graph


def brute_codegree(G):
    vals = []
    for S in itertools.combinations(range(G.n), G.k - 1):
        d = sum(1 for v in range(G.n) if v not in S and G.has_edge(S + (v,)))
        if d:
            vals.append(d)
    return min(vals) if vals else None


class TestComputeT:
    @pytest.mark.parametrize("k,ell,t", [(3, 2, 3), (3, 1, 2), (5, 2, 3), (4, 2, 4), (6, 3, 6)])
    def test_values(self, k, ell, t):
        assert compute_t(k, ell).t == t

    @pytest.mark.parametrize("k,ell", [(2, 1), (3, 0), (3, 3), (4, -1)])
    def test_out_of_range(self, k, ell):
        with pytest.raises(ParameterError):
            compute_t(k, ell)

    def test_sweep_bounds(self):
        for k in range(3, 13):
            for ell in range(1, k):
                t = compute_t(k, ell).t
                assert ell + 1 <= t <= k
                assert 2 * t >= k + 1
                assert t >= 3 or (k, ell) == (3, 1)


class TestHypergraph:
    def test_canonical_edges(self):
        G = Hypergraph(4, 3, frozenset([(2, 1, 0), (0, 1, 2), (3, 2, 1)]))
        assert G.edges == {(0, 1, 2), (1, 2, 3)}

    @pytest.mark.parametrize("edge", [(0, 1), (0, 0, 1), (0, 1, 5)])
    def test_bad_edges(self, edge):
        with pytest.raises(ParameterError):
            Hypergraph(5, 3, frozenset([edge]))

    def test_json_round_trip(self):
        G = random_graph(7, 3, 0.4, 1)
        assert loads_hypergraph(dumps_hypergraph(G)) == G

    @pytest.mark.parametrize(
        "text,where",
        [
            ('{"k": 3, "n": 4, "edges": [[0, 1]]}', "edges[0]"),
            ('{"k": 3, "n": 4, "edges": [[0, 2, 1]]}', "edges[0][2]"),
            ('{"k": 3, "n": 4, "edges": [[0, 1, 9]]}', "edges[0][2]"),
            ('{"k": 3, "n": 4, "edges": [[0, 1, 2], [0, 1, 2]]}', "edges[1]"),
            ('{"k": 3, "edges": []}', "missing"),
            ("{not json", "line 1"),
        ],
    )
    def test_reader_rejects_with_position(self, text, where):
        with pytest.raises(FormatError, match=where.replace("[", r"\[").replace("]", r"\]")):
            loads_hypergraph(text)

    def test_dot_export(self):
        dot = shadow_to_dot(complete(4, 3))
        assert dot.count("--") == 6


class TestShadow:
    def test_complete(self):
        assert shadow(complete(5, 3), 2) == complete(5, 2)

    def test_empty(self):
        assert shadow(Hypergraph(5, 3), 2).num_edges == 0

    def test_weak_bound_pairs(self):
        w = gen_weak_lower_bound(3, 2, 12)
        S = shadow(w.graph, 2)
        A = set(w.A)
        assert len(A) == 5
        for pair in itertools.combinations(range(12), 2):
            assert S.has_edge(pair) == (len(A & set(pair)) <= 1)

    def test_level_out_of_range(self):
        with pytest.raises(ParameterError):
            shadow(complete(5, 3), 3)

    @given(st.integers(0, 10_000), st.integers(1, 2))
    def test_consistency(self, seed, i):
        G = random_graph(7, 3, 0.3, seed)
        S = shadow(G, i)
        for s in S.edges:
            assert any(set(s) <= set(e) for e in G.edges)
        if not G.isolated_vertices():
            assert not shadow(G, G.k - 1).isolated_vertices()


class TestCodegree:
    def test_complete_k6(self):
        assert supported_codegree(complete(6, 3)) == 4

    def test_strong_bound(self):
        assert supported_codegree(gen_strong_lower_bound(5, 9).graph) == 3

    def test_edgeless(self):
        assert supported_codegree(Hypergraph(5, 3)) is None

    def test_complete_sweep(self):
        for k in range(3, 6):
            for n in range(k + 1, 11):
                assert supported_codegree(complete(n, k)) == n - k + 1

    @given(st.integers(0, 10_000), st.sampled_from([0.2, 0.5, 0.8]))
    def test_matches_brute_force(self, seed, p):
        G = random_graph(7, 3, p, seed)
        assert supported_codegree(G) == brute_codegree(G)


class TestNeighbourhood:
    def test_complete(self):
        assert vertex_neighbourhood(complete(5, 3), (0, 1)) == {2, 3, 4}

    def test_weak_bound_mixed_pair(self):
        w = gen_weak_lower_bound(3, 2, 12)
        a, b = w.A[0], w.B[0]
        nb = vertex_neighbourhood(w.graph, (a, b))
        assert nb == set(w.B) - {b}
        assert len(nb) == 6

    def test_unsupported(self):
        w = gen_weak_lower_bound(3, 2, 12)
        with pytest.raises(DomainError):
            vertex_neighbourhood(w.graph, w.A[:2])

    def test_too_large(self):
        with pytest.raises(ParameterError):
            vertex_neighbourhood(complete(5, 3), (0, 1, 2))


def brute_mis(G):
    for size in range(G.n, 0, -1):
        for S in itertools.combinations(range(G.n), size):
            if is_strong_independent(G, S):
                return size
    return 0


class TestStrongIndependentSet:
    def test_tight_cycle(self):
        n = 12
        G = Hypergraph(n, 3, frozenset(tuple((i + j) % n for j in range(3)) for i in range(n)))
        size, wit, exact = max_strong_independent_set(G)
        assert (size, exact) == (4, True)
        assert is_strong_independent(G, wit)
        assert is_strong_independent(G, range(0, 12, 3))

    def test_complete(self):
        assert max_strong_independent_set(complete(6, 3))[0] == 1

    def test_edgeless(self):
        assert max_strong_independent_set(Hypergraph(7, 3))[0] == 7

    def test_greedy_flagged(self):
        size, wit, exact = max_strong_independent_set(random_graph(10, 3, 0.2, 3), exact_limit=5)
        assert not exact
        assert len(wit) == size

    @given(st.integers(0, 10_000), st.sampled_from([0.05, 0.15, 0.4]))
    def test_matches_brute_force(self, seed, p):
        G = random_graph(8, 3, p, seed)
        size, wit, exact = max_strong_independent_set(G)
        assert exact and len(wit) == size
        assert is_strong_independent(G, wit)
        assert size == brute_mis(G)


class TestSpecialVertices:
    @pytest.mark.parametrize("r", [3, 6, 9, 12])
    def test_tight(self, r):
        assert check_special_vertex_property(list(range(r)), compute_t(3, 2))

    def test_loose_six(self):
        assert check_special_vertex_property(list(range(6)), compute_t(3, 1))

    def test_indivisible(self):
        with pytest.raises(ParameterError):
            check_special_vertex_property(list(range(5)), compute_t(3, 1))

    def test_window_count_detects_failure(self):
        # k=4, ell=2 gives t=4; a cycle of length 6 has a window without a multiple of 4
        assert not check_special_vertex_property(list(range(6)), compute_t(4, 2))


TOL = ToleranceConfig(eps=Fraction(1, 200), mu=Fraction(1, 100), mu_prime=Fraction(1, 1000))


class TestClassify:
    def test_complete_member(self):
        assert classify_non_extremal(complete(12, 3), compute_t(3, 2), TOL).status == "member"

    def test_weak_bound_non_member(self):
        w = gen_weak_lower_bound(3, 2, 12)
        assert classify_non_extremal(w.graph, compute_t(3, 2), TOL).status == "non-member"

    def test_weak_bound_sparse_subset(self):
        # A spans no supported pairs, so an n/t-subset of it has zero pairs
        w = gen_weak_lower_bound(3, 2, 12)
        tol = ToleranceConfig(eps=Fraction(1, 2), mu=Fraction(3, 5))
        v = classify_non_extremal(w.graph, compute_t(3, 2), tol)
        assert "supported pairs" in v.reason

    def test_sufficient_complete(self):
        v = classify_non_extremal(complete(12, 3), compute_t(3, 2), TOL, mode="sufficient")
        assert v.status == "member"

    def test_sufficient_needs_mu_prime(self):
        tol = ToleranceConfig(eps=Fraction(1, 200), mu=Fraction(1, 100))
        with pytest.raises(ParameterError):
            classify_non_extremal(complete(12, 3), compute_t(3, 2), tol, mode="sufficient")

    def test_cap(self):
        with pytest.raises(ResourceError):
            classify_non_extremal(complete(12, 3), compute_t(3, 2), TOL, cap=10)

    def test_isolated(self):
        G = complete(6, 3).induced(range(5))
        assert classify_non_extremal(G, compute_t(3, 2), TOL).status == "non-member"

    def test_tolerance_validation(self):
        with pytest.raises(ParameterError):
            ToleranceConfig(eps=Fraction(1, 2), mu=Fraction(1, 4))
        with pytest.raises(ParameterError):
            ToleranceConfig(eps=0.1, mu=Fraction(1, 2))


class TestCodegToDeg:
    def test_complete(self):
        assert codeg_to_deg_bound_check(complete(6, 3))

    def test_single_edge(self):
        assert codeg_to_deg_bound_check(Hypergraph(5, 3, frozenset([(0, 1, 2)])))

    def test_strong_bound(self):
        assert codeg_to_deg_bound_check(gen_strong_lower_bound(5, 9).graph)

    def test_edgeless(self):
        with pytest.raises(DomainError):
            codeg_to_deg_bound_check(Hypergraph(4, 3))

    @given(st.integers(0, 10_000), st.sampled_from([(6, 3), (7, 3), (7, 4)]), st.sampled_from([0.1, 0.5, 0.9]))
    def test_always_true(self, seed, nk, p):
        G = random_graph(*nk, p, seed)
        if G.edges:
            assert codeg_to_deg_bound_check(G)


class TestBlowup:
    def test_single_edge(self):
        G, spec = build_blowup(Hypergraph(3, 3, frozenset([(0, 1, 2)])), [2, 2, 2])
        assert G.num_edges == 8 and G.n == 6
        assert spec.projection[5] == 2

    def test_identity(self):
        F = random_graph(6, 3, 0.5, 2)
        G, _ = build_blowup(F, [1] * 6)
        assert G == F

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_k4_count(self, m):
        G, _ = build_blowup(complete(4, 3), [m] * 4)
        assert G.num_edges == 4 * m**3

    def test_bad_size(self):
        with pytest.raises(ParameterError):
            build_blowup(complete(4, 3), [1, 0, 1, 1])

    def test_nearly_regular(self):
        _, spec = build_blowup(complete(4, 3), [4, 4, 4, 1], m=4, gamma=Fraction(1, 4))
        assert not spec.is_regular()
        assert spec.is_nearly_regular()

    @given(st.integers(0, 10_000), st.integers(2, 4))
    def test_regular_and_codegree(self, seed, m):
        import random

        rng = random.Random(seed)
        F = random_graph(5, 3, 0.6, seed)
        if not F.edges or F.isolated_vertices():
            return
        gamma = Fraction(1, 2)
        lo, hi = math.ceil((1 - gamma) * m), math.floor((1 + gamma) * m)
        sizes = [rng.randint(lo, hi) for _ in range(F.n)]
        G, spec = build_blowup(F, sizes, m=m, gamma=gamma)
        assert spec.is_regular()
        parts = [set(p) for p in spec.parts]
        assert sum(map(len, parts)) == G.n == len(set().union(*parts))
        assert supported_codegree(G) >= (1 - gamma) * m * supported_codegree(F)
