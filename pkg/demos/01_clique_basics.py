"""A first look at the round-synchronous engine.

Runs layered search from vertex 0 on a cycle.  Every vertex announces its
(id, distance, parent) exactly once; the trace records who said what and
how many bits it cost.
"""

from kmachine import AlgoConfig, bfs_program, generate, run_clique

g = generate("cycle", 12, seed=0)
outputs, trace, metrics = run_clique(g, bfs_program(AlgoConfig(source=0)), seed=0)

print(f"cycle n={g.n}: per-vertex (distance, parent)")
for v, (dist, parent) in enumerate(outputs):
    print(f"  vertex {v:2d}: distance {dist}, parent {parent}")

print(f"\nrounds T_C = {metrics.rounds}")
print(f"broadcast emissions B = {metrics.broadcasts}")
print(f"point-to-point message count M = {metrics.messages}")
print(f"communication degree D' = {metrics.comm_degree}")

print("\nfirst trace records (round src dst_count bits bcast):")
for line in trace.export_lines()[:6]:
    print(" ", line)
