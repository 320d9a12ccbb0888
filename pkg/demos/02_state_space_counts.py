"""How fast the number of possible paths grows with containers and facts."""
# %%
from realitypaths import approx_path_count, exact_path_count, format_count, possible_states
from realitypaths.statespace import paths_with_k_intermediates

m, n = 3, 9
print("states:", format_count(possible_states(m, n)))
for k in range(4):
    print(f"paths with {k} intermediates:", format_count(paths_with_k_intermediates(m, n, k)))

# %% closed form against the exact sum
print("approximate total:", format_count(approx_path_count(m, n)))
print("exact total (log10):", round(exact_path_count(m, n).log10, 3))

# %% small grid
for m in (2, 3, 4):
    row = [format_count(exact_path_count(m, n), max_digits=12) for n in (0, 1, 2, 3)]
    print(m, row)
