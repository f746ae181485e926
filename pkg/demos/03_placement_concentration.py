"""How evenly does uniform random vertex placement spread the work?

For each trial we draw a placement and report the fullest machine and the
busiest inter-machine link against the n/k and m/k^2 + Delta/k yardsticks
(with standard logarithmic slack).
"""

import math

from kmachine import check_mapping_bounds, generate, random_vertex_partition

n, p = 2048, 0.1
g = generate("gnp", n, seed=1, p=p)
delta = g.max_degree()
print(f"graph n={n} m={g.m} max degree {delta}\n")

for k in (4, 8, 16):
    worst_v = worst_e = 0
    for seed in range(20):
        part = random_vertex_partition(g, k, seed)
        mv, me = check_mapping_bounds(g, part)
        worst_v = max(worst_v, mv)
        worst_e = max(worst_e, me)
    v_budget = 4 * n / k
    e_budget = 8 * math.log2(n) * (g.m / k**2 + delta / k)
    print(
        f"k={k:2d}: fullest machine {worst_v:5d} (cap {v_budget:7.0f}), "
        f"busiest link {worst_e:6d} edges (cap {e_budget:9.0f})"
    )
