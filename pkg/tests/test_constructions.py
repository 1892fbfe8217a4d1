import pytest

from hyperham.constructions import (
    WitnessKind,
    construct_kpartite_ell_cycle,
    gen_loose_3uniform,
    gen_strong_lower_bound,
    gen_weak_lower_bound,
)
from hyperham.core import ImplicitKPartite, compute_t, is_strong_independent, supported_codegree
from hyperham.errors import ParameterError
from hyperham.oracle import NONE, hamilton_ell_cycle
from hyperham.walks import verify_ell_cycle


class TestWeak:
    def test_tight_twelve(self):
        w = gen_weak_lower_bound(3, 2, 12)
        assert (w.graph.n, len(w.A), w.delta_star) == (12, 5, 6)
        assert hamilton_ell_cycle(w.graph, w.params).status == NONE
        assert hamilton_ell_cycle(w.graph, w.params, mis_prune=False).status == NONE

    def test_loose_eight(self):
        w = gen_weak_lower_bound(3, 1, 8)
        assert w.params.t == 2 and len(w.A) == 5
        assert is_strong_independent(w.graph, w.A)

    def test_four_uniform(self):
        w = gen_weak_lower_bound(4, 2, 12)
        assert w.params.t == 4 and len(w.A) == 4

    def test_divisibility(self):
        with pytest.raises(ParameterError):
            gen_weak_lower_bound(3, 1, 7)

    def test_vertex_convention(self):
        w = gen_weak_lower_bound(3, 2, 9)
        assert w.A == tuple(range(5, 9)) and w.B == tuple(range(5))
        assert w.kind is WitnessKind.WEAK_BOUND

    @pytest.mark.parametrize("k,ell,n", [(3, 2, n) for n in range(6, 15)] + [(3, 1, n) for n in range(6, 15, 2)]
                             + [(4, 2, 8), (4, 2, 12), (4, 3, 10), (4, 1, 12)])
    def test_codegree_matches_count(self, k, ell, n):
        w = gen_weak_lower_bound(k, ell, n)
        assert supported_codegree(w.graph) == w.delta_star == len(w.B) - (k - 2)

    @pytest.mark.parametrize("k,ell,n", [(3, 2, 9), (3, 2, 12), (3, 1, 6), (3, 1, 8)])
    def test_no_hamilton_cycle(self, k, ell, n):
        w = gen_weak_lower_bound(k, ell, n)
        assert hamilton_ell_cycle(w.graph, w.params, mis_prune=False).status == NONE


class TestStrong:
    def test_five_nine(self):
        w = gen_strong_lower_bound(5, 9)
        assert (w.params.ell, w.params.t, len(w.A), len(w.B), w.delta_star) == (2, 3, 4, 5, 3)
        assert hamilton_ell_cycle(w.graph, w.params).status == NONE

    def test_three_six(self):
        w = gen_strong_lower_bound(3, 6)
        assert (w.params.ell, w.params.t, len(w.A), w.delta_star) == (1, 2, 4, 2)

    def test_parity(self):
        with pytest.raises(ParameterError):
            gen_strong_lower_bound(5, 12)

    def test_even_k(self):
        with pytest.raises(ParameterError):
            gen_strong_lower_bound(4, 12)

    def test_pairs_recorded(self):
        w = gen_strong_lower_bound(3, 10)
        assert len(w.extra["pairs"]) == len(w.A) // 2
        assert w.metadata()["pairs"][0] == list(w.extra["pairs"][0])

    @pytest.mark.parametrize("k,n", [(3, 6), (3, 10), (3, 14), (5, 9)])
    def test_codegree(self, k, n):
        w = gen_strong_lower_bound(k, n)
        assert supported_codegree(w.graph) == len(w.B) - (k - 3)


class TestLoose:
    @pytest.mark.parametrize("n,d", [(6, 2), (10, 4), (14, 6)])
    def test_codegree(self, n, d):
        w = gen_loose_3uniform(n)
        assert w.delta_star == supported_codegree(w.graph) == d

    def test_six_no_cycle(self):
        w = gen_loose_3uniform(6)
        assert hamilton_ell_cycle(w.graph, w.params, mis_prune=False).status == NONE

    def test_bad_n(self):
        with pytest.raises(ParameterError):
            gen_loose_3uniform(8)

    def test_metadata_flat_tuples(self):
        meta = gen_loose_3uniform(6).metadata()
        assert meta["H1"] == [0, 1, 4, 5]


class TestKPartite:
    def test_loose_four(self):
        c = construct_kpartite_ell_cycle(compute_t(3, 1), 4)
        assert len(c.A) == 2 and [len(b) for b in c.B_parts] == [1, 1]
        b1, b2 = c.B_parts
        assert c.sequence == (b1[0], c.A[0], b2[0], c.A[1])

    def test_tight_six(self):
        c = construct_kpartite_ell_cycle(compute_t(3, 2), 6)
        part = {v: i for i, p in enumerate(c.B_parts + (c.A,)) for v in p}
        assert [part[v] for v in c.sequence] == [0, 1, 2, 0, 1, 2]

    def test_four_uniform(self):
        c = construct_kpartite_ell_cycle(compute_t(4, 2), 12)
        assert len(c.A) == 3 and all(len(b) == 3 for b in c.B_parts)

    def test_divisibility(self):
        with pytest.raises(ParameterError):
            construct_kpartite_ell_cycle(compute_t(3, 2), 5)

    def test_implicit_graph(self):
        c = construct_kpartite_ell_cycle(compute_t(6, 5), 6 * 5 * 3, materialize=False)
        assert isinstance(c.graph, ImplicitKPartite)

    @pytest.mark.parametrize("k", [3, 4, 5, 6])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_sweep(self, k, m):
        for ell in range(1, k):
            params = compute_t(k, ell)
            r = params.t * (k - 1) * m
            c = construct_kpartite_ell_cycle(params, r)
            assert verify_ell_cycle(c.graph, c.sequence, params)
            assert sorted(c.sequence) == list(range(r))
            assert c.graph.has_edge(c.sequence[:k]) and c.marked_edge == c.sequence[:k]
