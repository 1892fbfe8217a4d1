import itertools

import pytest
from hypothesis import given, strategies as st

from hyperham.constructions import construct_kpartite_ell_cycle, gen_loose_3uniform, gen_weak_lower_bound
from hyperham.core import Hypergraph, compute_t, max_strong_independent_set
from hyperham.errors import ParameterError
from hyperham.oracle import BUDGET, FOUND, NONE, OracleBudget, hamilton_ell_cycle, hamilton_ell_path_between
from hyperham.walks import verify_ell_cycle, verify_ell_path

from conftest import complete, random_graph


def naive_has_cycle(G, k, ell):
    """Try every permutation and test every cyclic window at multiples of k-ell."""
    n, step = G.n, k - ell
    if n % step or n < k:
        return False
    for perm in itertools.permutations(range(n)):
        if all(tuple(sorted(perm[(s + j) % n] for j in range(k))) in G.edges for s in range(0, n, step)):
            return True
    return False


def cycle_edges(W, params):
    n = len(W)
    return frozenset(tuple(sorted(W[(s + j) % n] for j in range(params.k))) for s in range(0, n, params.step))


class TestCycle:
    def test_k5_tight(self):
        v = hamilton_ell_cycle(complete(5, 3), compute_t(3, 2))
        assert v.status == FOUND and verify_ell_cycle(complete(5, 3), v.witness, compute_t(3, 2), spanning=True)

    def test_loose_six_none(self):
        assert hamilton_ell_cycle(gen_loose_3uniform(6).graph, compute_t(3, 1)).status == NONE

    def test_weak_twelve_none(self):
        G = gen_weak_lower_bound(3, 2, 12).graph
        assert hamilton_ell_cycle(G, compute_t(3, 2), mis_prune=False).status == NONE
        v = hamilton_ell_cycle(G, compute_t(3, 2))
        assert v.status == NONE and "independent" in v.reason

    def test_divisibility(self):
        with pytest.raises(ParameterError):
            hamilton_ell_cycle(complete(5, 3), compute_t(3, 1))

    def test_budget(self):
        v = hamilton_ell_cycle(complete(8, 3), compute_t(3, 1), OracleBudget(node_limit=1))
        assert v.status == BUDGET and v.witness is None

    def test_budget_validation(self):
        with pytest.raises(ParameterError):
            OracleBudget(node_limit=0)

    def test_symmetry_breaking_agrees(self):
        for seed in range(10):
            G = random_graph(6, 3, 0.5, seed)
            for ell in (1, 2):
                p = compute_t(3, ell)
                a = hamilton_ell_cycle(G, p).status
                b = hamilton_ell_cycle(G, p, OracleBudget(symmetry_breaking=False), mis_prune=False).status
                assert a == b

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("ell", [1, 2])
    def test_exhaustive_small(self, n, ell):
        params = compute_t(3, ell)
        if n % params.step:
            return
        triples = list(itertools.combinations(range(n), 3))
        for mask in range(1 << len(triples)):
            G = Hypergraph(n, 3, frozenset(t for i, t in enumerate(triples) if mask >> i & 1))
            got = hamilton_ell_cycle(G, params).status == FOUND
            assert got == naive_has_cycle(G, 3, ell)

    @given(st.integers(0, 10_000), st.sampled_from([6, 7]), st.sampled_from([0.2, 0.4, 0.7]))
    def test_random_against_naive(self, seed, n, p):
        G = random_graph(n, 3, p, seed)
        for ell in (1, 2):
            params = compute_t(3, ell)
            if n % params.step:
                continue
            v = hamilton_ell_cycle(G, params)
            assert (v.status == FOUND) == naive_has_cycle(G, 3, ell)

    @given(st.integers(0, 10_000), st.sampled_from([(3, 1, 8), (3, 2, 9), (4, 2, 8), (4, 3, 8), (4, 1, 9)]))
    def test_found_cycles_have_small_independent_sets(self, seed, knl):
        k, ell, n = knl
        params = compute_t(k, ell)
        G = random_graph(n, k, 0.6, seed)
        v = hamilton_ell_cycle(G, params, OracleBudget(node_limit=200_000))
        if v.status == FOUND:
            C = Hypergraph(n, k, cycle_edges(v.witness, params))
            size, _, exact = max_strong_independent_set(C)
            assert exact and size <= n // params.t


class TestPath:
    def test_kpartite(self):
        params = compute_t(3, 2)
        c = construct_kpartite_ell_cycle(params, 12)
        G = c.graph
        e1 = c.sequence[:3]
        e2 = c.sequence[6:9]
        v = hamilton_ell_path_between(G, e1, e2, params)
        assert v.status == FOUND and verify_ell_path(G, v.witness, params)
        assert v.witness[:3] == e1 and v.witness[-3:] == e2

    def test_overlap(self):
        with pytest.raises(ParameterError):
            hamilton_ell_path_between(complete(8, 3), (0, 1, 2), (2, 3, 4), compute_t(3, 1))

    def test_budget(self):
        v = hamilton_ell_path_between(complete(9, 3), (0, 1, 2), (3, 4, 5), compute_t(3, 1), OracleBudget(node_limit=1))
        assert v.status == BUDGET

    def test_none(self):
        G = complete(7, 3).with_edges([e for e in complete(7, 3).edges if 6 not in e] + [(0, 1, 2)])
        v = hamilton_ell_path_between(G, (0, 1, 2), (3, 4, 5), compute_t(3, 1))
        assert v.status == NONE
