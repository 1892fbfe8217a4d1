"""Run the extremal-case pipeline on a synthetic near-extremal 3-graph and print the stages.

    python demos/pipeline_run.py [n] [seed]
"""
import json
import sys

from hyperham import compute_t, run_extremal_pipeline, synthetic_near_extremal, verify_ell_cycle

n = int(sys.argv[1]) if len(sys.argv) > 1 else 24
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
params = compute_t(3, 2)
G, A = synthetic_near_extremal(3, 2, n, seed)
print(f"graph: n={G.n}, edges={G.num_edges}, planted A={list(A)}")

res = run_extremal_pipeline(G, params, seed=seed)
out = res.to_json()
for stage in ("codegree", "decomposition", "path_system", "matching", "transition"):
    if stage in out["report"]:
        print(f"{stage}: {json.dumps(out['report'][stage])}")
if res.ok:
    print("cycle:", " ".join(map(str, res.cycle)))
    print("verified:", verify_ell_cycle(G, res.cycle, params, spanning=True))
else:
    print(f"stopped at {out['stage']}: {out['reason']}")
