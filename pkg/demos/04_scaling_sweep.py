"""Measured speedup of the tree builder as machines are added.

One clique execution per seed is priced at every machine count, medians are
fitted on log-log axes, and the slope comes out near -1: double the
machines, halve the rounds.
"""

from kmachine.harness import ExperimentConfig, fit_scaling, run_experiment

cfg = ExperimentConfig(
    algorithm="mst",
    graph={"model": "gnp", "n": 1024, "p": 0.05},
    k=[2, 4, 8, 16, 32],
    seeds=[1, 2, 3],
)
rows = run_experiment(cfg)
fit = fit_scaling(rows, "k")

print(f"{'k':>4} {'median rounds':>14}")
for k, med in fit.points:
    print(f"{k:>4} {med:>14.0f}")
print(f"\nlog-log slope {fit.slope:.3f}   R^2 {fit.r2:.3f}")
print("(a slope of -1 is a clean 1/k speedup)")
