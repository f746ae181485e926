"""Pricing one recorded execution on machine networks of different sizes.

The fragment-merging tree builder broadcasts everything, so the trace can
be priced with per-machine deduplication: each broadcasting vertex pays one
copy per link of its home machine.  The same trace is priced at several
machine counts and bandwidths without re-running anything.
"""

from kmachine import (
    broadcast_bound,
    convert_broadcast,
    generate,
    label_bits,
    mst_program,
    random_vertex_partition,
    run_clique,
)

g = generate("gnp", 1024, seed=3, p=0.05)
outputs, trace, metrics = run_clique(g, mst_program(), seed=3)
print(f"graph n={g.n} m={g.m}; trace: T_C={metrics.rounds}, B={metrics.broadcasts}")

W = label_bits(g.n)
print(f"\nbandwidth W = {W} bits per link per direction per round")
print(f"{'k':>4} {'rounds':>8} {'max link bits':>14} {'bound':>12}")
for k in (2, 4, 8, 16, 32):
    part = random_vertex_partition(g, k, seed=3)
    rep = convert_broadcast(trace, part, W)
    bound = broadcast_bound(g.n, k, W, metrics)
    print(f"{k:>4} {rep.km_rounds:>8} {rep.max_link_bits:>14} {bound:>12.0f}")

print("\nsame trace, k=8, growing bandwidth:")
part = random_vertex_partition(g, 8, seed=3)
for W in (1, 4, 10, 20, 40):
    print(f"  W={W:>3}: {convert_broadcast(trace, part, W).km_rounds} rounds")
