"""Simple undirected attributed graphs and vertex transformations.

A graph of order ``n`` is stored as a triplet: per-vertex attributes, an
``n x n`` symmetric binary adjacency matrix with zero diagonal, and an
``n x n`` matrix of edge attributes. Vertex attributes are either integer
labels (array of shape ``(n,)``) or real vectors (shape ``(n, m)``); edge
attributes are integer labels, or absent for unattributed edges. Entries of
the edge-attribute matrix at non-adjacent positions are never read.

A :class:`Transformation` maps the vertices of a source graph onto a target
graph: every source vertex is either substituted to a distinct target vertex
or removed, and every target vertex not hit by a substitution is inserted.
``forward[i] == target_order`` marks removal of source vertex ``i``;
``reverse[k] == source_order`` marks insertion of target vertex ``k``. Edge
operations are induced by the vertex map, see :func:`classify_edges`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "LABEL",
    "VECTOR",
    "NO_EDGE_ATTRS",
    "GraphError",
    "AttributedGraph",
    "Transformation",
    "build_graph",
    "transformation_from_forward",
    "identity_transformation",
    "classify_edges",
    "graphs_equal",
]

LABEL = "label"
VECTOR = "vector"
NO_EDGE_ATTRS = "none"


class GraphError(ValueError):
    """Malformed graph or transformation."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(eq=False)
class AttributedGraph:
    """Immutable simple undirected graph with vertex and edge attributes."""

    vertex_attrs: np.ndarray
    adjacency: np.ndarray
    edge_attrs: np.ndarray | None = None
    graph_id: str = ""

    def __post_init__(self) -> None:
        adj = np.asarray(self.adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphError("adjacency must be a square matrix")
        n = adj.shape[0]
        if not np.array_equal(adj, adj.T):
            raise GraphError("adjacency must be symmetric")
        if n and np.any(np.diag(adj) != 0):
            raise GraphError("self-loops are not allowed")
        if not np.isin(adj, (0, 1)).all():
            raise GraphError("adjacency entries must be 0 or 1")
        va = np.asarray(self.vertex_attrs)
        if va.dtype == object:
            raise GraphError("vertex attributes mix labels and vectors")
        if va.ndim == 1:
            if not np.issubdtype(va.dtype, np.integer):
                raise GraphError("vertex labels must be integers")
            va = va.astype(np.int64)
        elif va.ndim == 2:
            va = va.astype(np.float64)
        else:
            raise GraphError("vertex attributes must have shape (n,) or (n, m)")
        if va.shape[0] != n:
            raise GraphError(f"expected {n} vertex attributes, got {va.shape[0]}")
        self.vertex_attrs = _frozen(va)
        self.adjacency = _frozen(adj.astype(np.int8))
        if self.edge_attrs is not None:
            ea = np.asarray(self.edge_attrs)
            if ea.shape != (n, n):
                raise GraphError("edge attributes must be an n x n matrix")
            ea = ea.astype(np.int64)
            mask = self.adjacency == 1
            if not np.array_equal(ea[mask], ea.T[mask]):
                raise GraphError("edge attributes must be symmetric on edges")
            self.edge_attrs = _frozen(ea)

    @property
    def order(self) -> int:
        return self.adjacency.shape[0]

    @property
    def vertex_mode(self) -> str:
        return LABEL if self.vertex_attrs.ndim == 1 else VECTOR

    @property
    def vector_dim(self) -> int:
        return 0 if self.vertex_attrs.ndim == 1 else self.vertex_attrs.shape[1]

    @property
    def edge_mode(self) -> str:
        return NO_EDGE_ATTRS if self.edge_attrs is None else LABEL

    @cached_property
    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as (i, j) pairs with i < j, in row-major order."""
        iu = np.argwhere(np.triu(self.adjacency, 1))
        return [(int(i), int(j)) for i, j in iu]

    @property
    def n_edges(self) -> int:
        return len(self.edge_list)

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1, dtype=np.int64)

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"AttributedGraph(order={self.order}, edges={self.n_edges}, "
            f"vertex_mode={self.vertex_mode!r}, edge_mode={self.edge_mode!r}, "
            f"graph_id={self.graph_id!r})"
        )


def build_graph(
    order: int,
    vertex_attrs: Sequence,
    edges: Iterable[tuple] = (),
    *,
    edge_labels: bool | None = None,
    graph_id: str = "",
) -> AttributedGraph:
    """Construct a graph from an attribute sequence and an edge list.

    ``vertex_attrs`` is a sequence of ``order`` integer labels or of
    equal-length real vectors. Each edge is ``(i, j)`` or ``(i, j, label)``
    with distinct endpoints in ``range(order)``; at most one edge per vertex
    pair in either orientation. ``edge_labels`` forces the edge-attribute
    mode; by default it is inferred from the first edge tuple (an empty edge
    list yields unattributed edges unless ``edge_labels=True``).
    """
    attrs = list(vertex_attrs)
    if len(attrs) != order:
        raise GraphError(f"expected {order} vertex attributes, got {len(attrs)}")
    scalar = [np.isscalar(a) or (isinstance(a, np.ndarray) and a.ndim == 0) for a in attrs]
    if attrs and any(scalar) and not all(scalar):
        raise GraphError("vertex attributes mix labels and vectors")
    if attrs and not all(scalar) and len({len(a) for a in attrs}) > 1:
        raise GraphError("vector attributes must share one dimension")
    if attrs and all(scalar):
        va = np.asarray(attrs)
    elif attrs:
        va = np.asarray(attrs, dtype=np.float64)
    else:
        va = np.zeros(0, dtype=np.int64)

    edge_items = [tuple(e) for e in edges]
    widths = {len(e) for e in edge_items}
    if widths - {2, 3}:
        raise GraphError("edges must be (i, j) or (i, j, label) tuples")
    if len(widths) > 1:
        raise GraphError("edges mix labelled and unlabelled tuples")
    has_attr = widths == {3}
    if edge_labels is None:
        edge_labels = has_attr
    elif edge_items and has_attr != edge_labels:
        raise GraphError("edge tuples disagree with edge_labels")

    adjacency = np.zeros((order, order), dtype=np.int8)
    edge_attrs = np.zeros((order, order), dtype=np.int64) if edge_labels else None
    for item in edge_items:
        i, j = int(item[0]), int(item[1])
        if not (0 <= i < order and 0 <= j < order):
            raise GraphError(f"edge ({i}, {j}) out of range for order {order}")
        if i == j:
            raise GraphError(f"self-loop at vertex {i}")
        if adjacency[i, j]:
            raise GraphError(f"duplicate edge ({i}, {j})")
        adjacency[i, j] = adjacency[j, i] = 1
        if edge_labels:
            lab = int(item[2])
            edge_attrs[i, j] = edge_attrs[j, i] = lab
    return AttributedGraph(va, adjacency, edge_attrs, graph_id)


def _derive_reverse(forward: np.ndarray, source_order: int, target_order: int) -> np.ndarray:
    if forward.shape != (source_order,):
        raise GraphError(f"forward map must have length {source_order}")
    if forward.size and (forward.min() < 0 or forward.max() > target_order):
        raise GraphError("forward entries must lie in [0, target_order]")
    sub = forward[forward < target_order]
    if len(np.unique(sub)) != len(sub):
        raise GraphError("forward map substitutes one target vertex twice")
    reverse = np.full(target_order, source_order, dtype=np.int64)
    reverse[sub] = np.nonzero(forward < target_order)[0]
    return reverse


@dataclass(eq=False)
class Transformation:
    """Vertex map between two graphs; reverse is derived from forward."""

    forward: np.ndarray
    reverse: np.ndarray
    source_order: int
    target_order: int

    def __post_init__(self) -> None:
        f = np.asarray(self.forward, dtype=np.int64)
        expected = _derive_reverse(f, self.source_order, self.target_order)
        r = np.asarray(self.reverse, dtype=np.int64)
        if not np.array_equal(r, expected):
            raise GraphError("reverse map inconsistent with forward map")
        self.forward = _frozen(f)
        self.reverse = _frozen(r)

    @property
    def substituted(self) -> np.ndarray:
        """Boolean mask over source vertices that are substituted."""
        return self.forward < self.target_order

    @property
    def n_substituted(self) -> int:
        return int(self.substituted.sum())

    @property
    def n_removed(self) -> int:
        return self.source_order - self.n_substituted

    @property
    def n_inserted(self) -> int:
        return self.target_order - self.n_substituted

    def inverse(self) -> "Transformation":
        return Transformation(self.reverse, self.forward, self.target_order, self.source_order)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Transformation({self.forward.tolist()}, {self.source_order}->{self.target_order})"


def transformation_from_forward(
    forward: Sequence[int] | np.ndarray, source_order: int, target_order: int
) -> Transformation:
    """Build a transformation from its forward map alone."""
    f = np.asarray(forward, dtype=np.int64)
    return Transformation(f, _derive_reverse(f, source_order, target_order), source_order, target_order)


def identity_transformation(order: int) -> Transformation:
    return transformation_from_forward(np.arange(order), order, order)


def classify_edges(
    t: Transformation, g: AttributedGraph, g2: AttributedGraph
) -> tuple[list[tuple[int, int]], list[tuple[int, int]], list[tuple[int, int]]]:
    """Split edges into (substituted, removed, inserted) under ``t``.

    Substituted and removed pairs index edges of ``g``; inserted pairs index
    edges of ``g2``. Each undirected edge appears once, as (i, j) with i < j.
    An edge of ``g`` is substituted when both endpoints are substituted and
    their images are adjacent in ``g2``, removed otherwise; an edge of ``g2``
    is inserted unless it is the image of a substituted edge.
    """
    if t.source_order != g.order or t.target_order != g2.order:
        raise GraphError("transformation orders do not match the graphs")
    f, r = t.forward, t.reverse
    n, n2 = g.order, g2.order
    a, a2 = g.adjacency, g2.adjacency
    substituted: list[tuple[int, int]] = []
    removed: list[tuple[int, int]] = []
    inserted: list[tuple[int, int]] = []
    for i, j in g.edge_list:
        fi, fj = f[i], f[j]
        if fi < n2 and fj < n2 and a2[fi, fj]:
            substituted.append((i, j))
        else:
            removed.append((i, j))
    for k, l in g2.edge_list:
        rk, rl = r[k], r[l]
        if not (rk < n and rl < n and a[rk, rl]):
            inserted.append((k, l))
    return substituted, removed, inserted


def graphs_equal(a: AttributedGraph, b: AttributedGraph, vec_tol: float = 0.0) -> bool:
    """Structural equality: attributes, adjacency and edge labels on edges.

    Vector attributes compare within ``vec_tol`` per coordinate (exact when
    zero); graph ids are ignored, as are edge-attribute entries at
    non-adjacent positions.
    """
    if a.order != b.order or a.vertex_mode != b.vertex_mode or a.edge_mode != b.edge_mode:
        return False
    if a.vertex_mode == LABEL:
        if not np.array_equal(a.vertex_attrs, b.vertex_attrs):
            return False
    else:
        # dimension is unobservable on zero vertices
        if a.order and a.vector_dim != b.vector_dim:
            return False
        if a.order and np.max(np.abs(a.vertex_attrs - b.vertex_attrs), initial=0.0) > vec_tol:
            return False
    if not np.array_equal(a.adjacency, b.adjacency):
        return False
    if a.edge_attrs is not None:
        mask = a.adjacency == 1
        if not np.array_equal(a.edge_attrs[mask], b.edge_attrs[mask]):
            return False
    return True
