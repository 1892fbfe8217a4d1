"""Build a vertex absorber and a congruence-adjusted join in a dense random 3-graph.

    python demos/absorbers.py
"""
import itertools
import random

from hyperham import Hypergraph, compute_t, find_vertex_absorber, join_with_congruence, supported_codegree

rng = random.Random(3)
G = Hypergraph(16, 3, frozenset(e for e in itertools.combinations(range(16), 3) if rng.random() < 0.9))
print(f"n={G.n} edges={G.num_edges} delta*={supported_codegree(G)}")

A = find_vertex_absorber(G, 5, rng)
print("absorber segments:", A.segments)
print("without 5:", A.plain())
print("with 5:   ", A.absorbed())

params = compute_t(3, 1)
for q in range(params.step):
    W = join_with_congruence(G, (0, 1), (2, 3, 4), q, params, rng)
    print(f"join with length = {q} mod {params.step}: {len(W)} vertices, starts {W[:2]}, ends {W[-3:]}")
