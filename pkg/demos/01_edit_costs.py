"""
Editing one attributed graph into another
=========================================

Walks through a single vertex map between two small labeled graphs: which
edit operations it implies, what they cost, and how far that is from the
cheapest map overall.
"""

from gmedian import (
    build_graph,
    classify_edges,
    edge_cost,
    ged_exact,
    make_cost_model,
    transformation_cost,
    transformation_from_forward,
    vertex_cost,
)

# A 4-vertex graph and a 3-vertex graph, integer labels on both vertices
# and edges.
g = build_graph(4, [1, 2, 2, 3], [(1, 2, 1), (0, 3, 3), (1, 3, 2), (2, 3, 3)])
h = build_graph(3, [1, 2, 2], [(1, 2, 1), (0, 2, 4)])

# Substituting a vertex with an equal label is free, relabeling costs 1,
# and removing or inserting a vertex or an edge costs 3.
model = make_cost_model()

# A vertex map is an array with one entry per vertex of g. Vertex 0 goes to
# vertex 0 of h, vertex 1 to vertex 2, vertex 2 to vertex 1; the sentinel
# value 3 == h.order marks vertex 3 for removal.
t = transformation_from_forward([0, 2, 1, 3], 4, 3)
print("forward map:", t.forward)
print("reverse map:", t.reverse)

# Every edge of g is either carried over (both endpoints substituted onto
# adjacent vertices of h) or removed; edges of h that nothing maps onto
# must be inserted.
substituted, removed, inserted = classify_edges(t, g, h)
print("substituted edges:", substituted)
print("removed edges:    ", removed)
print("inserted edges:   ", inserted)

# The edge total counts each undirected edge once in each direction, and
# the overall cost charges half of it.
vc = vertex_cost(model, t, g.vertex_attrs, h.vertex_attrs)
ec = edge_cost(model, t, g, h)
print(f"vertex operations: {vc}")
print(f"edge operations (ordered pairs): {ec}")
print(f"total: {vc} + 0.5 * {ec} = {transformation_cost(model, t, g, h)}")

# That map is not optimal. Enumerating every vertex map gives the edit
# distance itself.
best = ged_exact(model, g, h)
print(f"exact edit distance: {best.cost} via {best.transformation.forward}")
