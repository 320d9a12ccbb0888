"""Walk the six-container example network and print every route to the egress."""
# %%
from realitypaths import TraversalConfig, build_figure_example, traverse

net = build_figure_example()
print("containers:", [c.id for c in net.containers])
print("links:", [(l.a, l.b) for l in net.links])

# %% one use per link
result = traverse(net, TraversalConfig(link_cap=1), keep_paths=True)
for path in result.attack_paths:
    route = " -> ".join(path.containers())
    print(f"{route:<20} rules={[r for _, r in path.steps() if r]} flipped={sorted(path.changed_facts())}")

# %% bookkeeping
print("paths generated:", result.total_paths_generated)
print("variants created:", result.total_variants_created)
print("termination:", result.termination.value)
