"""Compare ring, tree and star networks as the per-link traversal cap grows."""
# %%
import sys

from realitypaths import TopologySpec, run_experiment, write_report

kinds = ("ring", "tree", "star")
rows = []
for kind in kinds:
    rows += run_experiment(TopologySpec(kind, 6, 1, 4, seed=0), [1, 2, 3], trials=3, time_limit=60.0)

# %%
print(f"{'topology':<6} cap  paths  variants  ratio")
for r in rows:
    print(f"{r.topology:<6} {r.link_cap:>3} {r.avg_reality_paths:>6.0f} {r.avg_variants:>9.0f}  {r.variant_ratio:.3f}")

# %% optional csv
if len(sys.argv) > 1:
    write_report(rows, sys.argv[1])
