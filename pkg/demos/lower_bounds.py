"""Print the extremal constructions next to the co-degree each one needs for a cycle.

    python demos/lower_bounds.py
"""
from hyperham import (
    compute_t,
    gen_loose_3uniform,
    gen_strong_lower_bound,
    gen_weak_lower_bound,
    hamilton_ell_cycle,
    solve_weighted_pfm,
    weight_vector,
)
from hyperham.fractional import FractionalMatching


def show(label, witness):
    G, params = witness.graph, witness.params
    verdict = hamilton_ell_cycle(G, params).status
    res = solve_weighted_pfm(G, weight_vector(params))
    lp = "matching" if isinstance(res, FractionalMatching) else "certificate"
    print(f"{label:<22} n={G.n:<3} |A|={len(witness.A):<2} delta*={witness.delta_star:<3} cycle={verdict:<5} lp={lp}")


for k, ell, n in ((3, 2, 9), (3, 2, 12), (3, 1, 6), (3, 1, 8)):
    show(f"weak k={k} ell={ell}", gen_weak_lower_bound(k, ell, n))
show("strong k=5", gen_strong_lower_bound(5, 9))
for n in (6, 10):
    show("loose parity", gen_loose_3uniform(n))

params = compute_t(3, 2)
print(f"t for (k, ell) = (3, 2): {params.t}")
