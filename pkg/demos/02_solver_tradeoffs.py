#!/usr/bin/env python3
# Compare the edit-distance solvers on random graph pairs: exact
# enumeration, the bipartite assignment bound, projected gradient
# refinement (IPFP), and its multistart variant.

import time

import numpy as np

from gmedian import GedSolverConfig, build_graph, make_cost_model, solve_ged

rng = np.random.default_rng(7)
model = make_cost_model()


def random_graph(order):
    labels = [int(rng.integers(1, 4)) for _ in range(order)]
    edges = [
        (i, j, int(rng.integers(1, 3)))
        for i in range(order)
        for j in range(i + 1, order)
        if rng.random() < 0.5
    ]
    return build_graph(order, labels, edges, edge_labels=True)


pairs = [(random_graph(int(rng.integers(3, 7))), random_graph(int(rng.integers(3, 7)))) for _ in range(20)]

methods = ["exact", "bipartite", "ipfp", "mipfp"]
totals = {m: 0.0 for m in methods}
times = {m: 0.0 for m in methods}

for g, h in pairs:
    for m in methods:
        config = GedSolverConfig(method=m, multistart_count=20, rng_seed=0)
        t0 = time.perf_counter()
        totals[m] += solve_ged(model, g, h, config).cost
        times[m] += time.perf_counter() - t0

# exact <= mipfp <= ipfp <= bipartite holds pair by pair; the sums make the
# gap visible at a glance
print(f"{'method':<12}{'total cost':>12}{'seconds':>10}")
for m in methods:
    print(f"{m:<12}{totals[m]:>12.1f}{times[m]:>10.3f}")

gap = 100.0 * (totals["mipfp"] - totals["exact"]) / totals["exact"]
print(f"\nmultistart refinement lands within {gap:.1f}% of exact on these pairs")
