#!/usr/bin/env python3
# Graphs whose vertices carry 2-d points instead of symbolic labels.
# Substitution then costs squared euclidean distance, and the median update
# for a vertex is simply the mean of the points it gets matched to.

import warnings

import numpy as np

from gmedian import DescentConfig, GedSolverConfig, build_graph, compute_median, make_cost_model

rng = np.random.default_rng(11)

# Three anchor points; members jitter them and connect the same triangle.
anchors = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 3.0]])

members = []
for k in range(10):
    pts = anchors + rng.normal(scale=0.3, size=anchors.shape)
    members.append(build_graph(3, pts.tolist(), [(0, 1), (1, 2), (0, 2)], graph_id=f"m{k}"))

# Squared euclidean substitution is not a metric (it breaks the triangle
# inequality), which the model construction points out once.
with warnings.catch_warnings():
    warnings.simplefilter("ignore", RuntimeWarning)
    model = make_cost_model(vertex_mode="vector", edge_mode="none", c_vr=2.0, c_vi=2.0)

config = DescentConfig(
    ged_phase1=GedSolverConfig(method="exact"),
    ged_phase2=GedSolverConfig(method="exact"),
)
result = compute_median(model, members, config)

print(f"SOD {result.sod:.4f} after {result.iterations} iterations")
print("median points vs anchor means:")
mean_pts = np.mean([m.vertex_attrs for m in members], axis=0)
for i in range(3):
    got = result.median.vertex_attrs[i]
    want = mean_pts[i]
    print(f"  vertex {i}: ({got[0]:7.4f}, {got[1]:7.4f})   mean ({want[0]:7.4f}, {want[1]:7.4f})")

# With every member keeping the triangle, the median keeps it too.
print("median edges:", [(i, j) for i in range(3) for j in range(i + 1, 3) if result.median.adjacency[i, j]])
