"""Cross-check the traversal engine against the brute-force enumerator."""
# %%
import random

from realitypaths import TopologySpec, TraversalConfig, diff_results, enumerate_paths_bruteforce, generate_topology, traverse

rng = random.Random(0)
checked = 0
for _ in range(20):
    kind = rng.choice(["ring", "star", "tree", "bus"])
    spec = TopologySpec(kind, rng.randint(3, 5), 1, rng.randint(1, 4), guard_fraction=0.3, seed=rng.randrange(1000))
    net = generate_topology(spec)
    for cap in (1, 2):
        cfg = TraversalConfig(cap)
        diff = diff_results(traverse(net, cfg), enumerate_paths_bruteforce(net, cfg))
        if not diff.equivalent:
            print(spec, cap, diff)
        checked += 1

# %%
print(f"{checked} runs compared")
