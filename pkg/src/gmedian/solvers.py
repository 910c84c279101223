"""Edit-distance solvers between two attributed graphs.

Four routes compute (or bound) the minimal transformation cost:

* :func:`ged_exact` enumerates every transformation, exact but exponential;
* :func:`ged_bipartite` solves one linear assignment over vertices enriched
  with local edge structure, a fast upper bound;
* :func:`ged_ipfp` refines an initial transformation by iterated linear
  approximation of the quadratic edit cost over the augmented assignment
  polytope;
* :func:`ged_multistart` restarts a base method from random initial maps
  plus the bipartite solution and keeps the best.

Every result carries a concrete transformation whose true cost is the
reported value, so heuristic outputs are always valid upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import lsap
from .costs import (
    CostModel,
    LabelDelta,
    check_model_compatible,
    transformation_cost,
    vertex_subst_cost,
)
from .graphs import AttributedGraph, Transformation, transformation_from_forward

__all__ = [
    "SolverError",
    "GedSolverConfig",
    "GedResult",
    "METHODS",
    "ged_exact",
    "ged_bipartite",
    "ged_ipfp",
    "ged_multistart",
    "solve_ged",
]

METHODS = ("exact", "bipartite", "ipfp", "mbipartite", "mipfp")


class SolverError(ValueError):
    """Unusable solver configuration or input."""


@dataclass(frozen=True)
class GedSolverConfig:
    """Method selection and tuning knobs shared by all solver entry points."""

    method: str = "mipfp"
    multistart_count: int = 40
    ipfp_max_iters: int = 50
    ipfp_tol: float = 1e-6
    rng_seed: int = 0
    exact_order_cap: int = 8

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise SolverError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if self.multistart_count < 1:
            raise SolverError("multistart_count must be at least 1")
        if self.ipfp_max_iters < 1:
            raise SolverError("ipfp_max_iters must be at least 1")


@dataclass
class GedResult:
    """A transformation, its cost, and whether the cost is provably minimal."""

    transformation: Transformation
    cost: float
    is_exact: bool


def _result(model: CostModel, g: AttributedGraph, g2: AttributedGraph, forward, exact: bool) -> GedResult:
    t = transformation_from_forward(np.asarray(forward, dtype=np.int64), g.order, g2.order)
    return GedResult(t, transformation_cost(model, t, g, g2), exact)


def ged_exact(
    model: CostModel, g: AttributedGraph, g2: AttributedGraph, order_cap: int = 8
) -> GedResult:
    """Exact edit distance by full enumeration of transformations.

    Enumeration is exponential; graphs larger than ``order_cap`` are
    rejected. Among cost ties the lexicographically smallest forward map
    wins (maps are visited in lexicographic order).
    """
    if max(g.order, g2.order) > order_cap:
        raise SolverError(
            f"orders ({g.order}, {g2.order}) exceed the exact enumeration cap {order_cap}"
        )
    check_model_compatible(model, g)
    check_model_compatible(model, g2)
    n, n2 = g.order, g2.order
    label_vertices = isinstance(model.vertex_subst, LabelDelta)
    label_edges = isinstance(model.edge_subst, LabelDelta)
    cvs = model.vertex_subst.cost if label_vertices else 0.0
    ces = model.edge_subst.cost if label_edges else 0.0
    cvr, cvi, cer, cei = model.c_vr, model.c_vi, model.c_er, model.c_ei
    if label_vertices:
        phi = g.vertex_attrs.tolist()
        phi2 = g2.vertex_attrs.tolist()
    else:
        phi = [row for row in g.vertex_attrs]
        phi2 = [row for row in g2.vertex_attrs]
    a = g.adjacency.tolist()
    a2 = g2.adjacency.tolist()
    ea = g.edge_attrs.tolist() if g.edge_attrs is not None else None
    ea2 = g2.edge_attrs.tolist() if g2.edge_attrs is not None else None
    edges1 = g.edge_list
    edges2 = g2.edge_list

    forward = [n2] * n
    inv = [-1] * n2
    best_cost = np.inf
    best_forward: tuple[int, ...] | None = None

    def leaf_cost() -> float:
        cv = 0.0
        n_sub = 0
        for i in range(n):
            v = forward[i]
            if v < n2:
                n_sub += 1
                if label_vertices:
                    if phi[i] != phi2[v]:
                        cv += cvs
                else:
                    d = phi[i] - phi2[v]
                    cv += float(d @ d)
            else:
                cv += cvr
        cv += cvi * (n2 - n_sub)
        ce = 0.0
        for i, j in edges1:
            fi, fj = forward[i], forward[j]
            if fi < n2 and fj < n2 and a2[fi][fj]:
                if label_edges and ea[i][j] != ea2[fi][fj]:
                    ce += ces
            else:
                ce += cer
        for k, l in edges2:
            rk, rl = inv[k], inv[l]
            if not (rk >= 0 and rl >= 0 and a[rk][rl]):
                ce += cei
        return cv + ce

    def scan(i: int) -> None:
        nonlocal best_cost, best_forward
        if i == n:
            c = leaf_cost()
            if c < best_cost:
                best_cost = c
                best_forward = tuple(forward)
            return
        for v in range(n2 + 1):
            if v < n2:
                if inv[v] >= 0:
                    continue
                forward[i] = v
                inv[v] = i
                scan(i + 1)
                inv[v] = -1
            else:
                forward[i] = v
                scan(i + 1)

    scan(0)
    assert best_forward is not None
    return _result(model, g, g2, best_forward, True)


def _incident_edge_term(model: CostModel, labels1: list[int], labels2: list[int]) -> float:
    """Optimal assignment cost between two incident-edge label multisets."""
    d1, d2 = len(labels1), len(labels2)
    if not isinstance(model.edge_subst, LabelDelta):
        return model.c_er * max(0, d1 - d2) + model.c_ei * max(0, d2 - d1)
    if d1 == 0 and d2 == 0:
        return 0.0
    ces = model.edge_subst.cost
    l1 = np.asarray(labels1, dtype=np.int64).reshape(-1, 1)
    l2 = np.asarray(labels2, dtype=np.int64).reshape(1, -1)
    subst = ces * (l1 != l2)
    problem = lsap.build_assignment_problem(
        subst, np.full(d1, model.c_er), np.full(d2, model.c_ei)
    )
    _, objective = lsap.solve_lsap(problem)
    return objective


def ged_bipartite(model: CostModel, g: AttributedGraph, g2: AttributedGraph) -> GedResult:
    """Assignment-based upper bound on the edit distance.

    Each substitution cell combines the vertex substitution cost with half
    the optimal matching cost between the incident-edge label sets of the
    two vertices; removal and insertion cells charge the vertex constant
    plus half of the incident edge removals or insertions. One linear
    assignment over this matrix yields a vertex map, and the reported cost
    is the true cost of the induced transformation (not the assignment
    objective).
    """
    check_model_compatible(model, g)
    check_model_compatible(model, g2)
    n, n2 = g.order, g2.order
    if n == 0 and n2 == 0:
        return _result(model, g, g2, np.zeros(0, dtype=np.int64), True)
    labelled = isinstance(model.edge_subst, LabelDelta)
    if labelled:
        inc1 = [[int(g.edge_attrs[i, j]) for j in range(n) if g.adjacency[i, j]] for i in range(n)]
        inc2 = [[int(g2.edge_attrs[k, l]) for l in range(n2) if g2.adjacency[k, l]] for k in range(n2)]
    else:
        inc1 = [[0] * int(d) for d in g.degrees]
        inc2 = [[0] * int(d) for d in g2.degrees]
    subst = np.zeros((n, n2))
    for i in range(n):
        for k in range(n2):
            subst[i, k] = vertex_subst_cost(
                model, g.vertex_attrs[i], g2.vertex_attrs[k]
            ) + 0.5 * _incident_edge_term(model, inc1[i], inc2[k])
    removal = model.c_vr + 0.5 * model.c_er * g.degrees
    insertion = model.c_vi + 0.5 * model.c_ei * g2.degrees
    problem = lsap.build_assignment_problem(subst, removal, insertion)
    assignment, _ = lsap.solve_lsap(problem)
    forward = np.minimum(assignment[:n], n2)
    return _result(model, g, g2, forward, False)


class _QapForm:
    """Quadratic form of the edit cost over the augmented assignment layout.

    For an (n + n2) x (n2 + n) permutation matrix X encoding a
    transformation, ``linear . X + 0.5 x' Q x`` (x = vec(X)) equals the true
    transformation cost. Q is symmetric, dense, O(N^4) memory with
    N = n + n2; intended for the small graphs this package targets.
    """

    def __init__(self, model: CostModel, g: AttributedGraph, g2: AttributedGraph):
        self.model = model
        self.g = g
        self.g2 = g2
        n, n2 = g.order, g2.order
        self.n, self.n2 = n, n2
        N = n + n2
        self.N = N

        c = np.zeros((N, N))
        if n and n2:
            if isinstance(model.vertex_subst, LabelDelta):
                c[:n, :n2] = model.vertex_subst.cost * (
                    g.vertex_attrs[:, None] != g2.vertex_attrs[None, :]
                )
            else:
                diff = g.vertex_attrs[:, None, :] - g2.vertex_attrs[None, :, :]
                c[:n, :n2] = (diff * diff).sum(axis=2)
        c[:n, n2:] = lsap.SENTINEL
        c[np.arange(n), n2 + np.arange(n)] = model.c_vr
        c[n:, :n2] = lsap.SENTINEL
        c[n + np.arange(n2), np.arange(n2)] = model.c_vi
        self.linear = c

        a = g.adjacency.astype(np.float64)
        a2 = g2.adjacency.astype(np.float64)
        cer, cei = model.c_er, model.c_ei
        q = np.zeros((N, N, N, N))
        if n and n2:
            if isinstance(model.edge_subst, LabelDelta):
                # es[i, k, j, l] = substitution cost between edge (i, j) and (k, l)
                es = model.edge_subst.cost * (
                    g.edge_attrs[:, None, :, None] != g2.edge_attrs[None, :, None, :]
                ).astype(np.float64)
            else:
                es = 0.0
            a_ = a[:, None, :, None]
            a2_ = a2[None, :, None, :]
            q[:n, :n2, :n, :n2] = a_ * (a2_ * es + cer * (1.0 - a2_)) + cei * (1.0 - a_) * a2_
        if n:
            q[:n, n2:, :n, :] = cer * a[:, None, :, None]
            q[:n, :n2, :n, n2:] = cer * a[:, None, :, None]
        if n2:
            ins = cei * a2[None, :, None, :]
            q[n:, :n2, :, :n2] = ins
            q[:n, :n2, n:, :n2] = ins
        rr = np.arange(N)
        q[rr, :, rr, :] = 0.0
        self.quad = q.reshape(N * N, N * N)

    def start_matrix(self, t: Transformation) -> np.ndarray:
        n, n2, N = self.n, self.n2, self.N
        x = np.zeros((N, N))
        for i in range(n):
            v = t.forward[i]
            x[i, v if v < n2 else n2 + i] = 1.0
        slack_rows = [n + k for k in range(n2) if t.reverse[k] < n]
        slack_cols = [n2 + i for i in range(n) if t.forward[i] < n2]
        for k in range(n2):
            if t.reverse[k] >= n:
                x[n + k, k] = 1.0
        for r_, c_ in zip(slack_rows, slack_cols):
            x[r_, c_] = 1.0
        return x

    def forward_of(self, assignment: np.ndarray) -> np.ndarray:
        return np.minimum(assignment[: self.n], self.n2)

    def discrete_cost(self, forward: np.ndarray) -> float:
        t = transformation_from_forward(forward, self.n, self.n2)
        return transformation_cost(self.model, t, self.g, self.g2)


def _ipfp_refine(
    form: _QapForm, init_forward: np.ndarray, max_iters: int, tol: float
) -> tuple[float, tuple[int, ...]]:
    """Run the refinement from one initial map; returns the best discrete point."""
    best_forward = tuple(int(v) for v in init_forward)
    best_cost = form.discrete_cost(np.asarray(init_forward, dtype=np.int64))
    t0 = transformation_from_forward(np.asarray(init_forward, dtype=np.int64), form.n, form.n2)
    x = form.start_matrix(t0)
    for _ in range(max_iters):
        grad = form.linear + (form.quad @ x.ravel()).reshape(form.N, form.N)
        assignment, _ = lsap.solve_lsap(grad)
        b = np.zeros_like(x)
        b[np.arange(form.N), assignment] = 1.0
        fwd = form.forward_of(assignment)
        c = form.discrete_cost(fwd)
        cand = tuple(int(v) for v in fwd)
        if c < best_cost or (c == best_cost and cand < best_forward):
            best_cost, best_forward = c, cand
        d = b - x
        gap = float((grad * d).sum())
        if gap >= -tol:
            break
        dv = d.ravel()
        curvature = float(dv @ (form.quad @ dv))
        alpha = 1.0 if curvature <= 0 else min(1.0, -gap / curvature)
        x = x + alpha * d
    assignment, _ = lsap.solve_lsap(-x)
    fwd = form.forward_of(assignment)
    c = form.discrete_cost(fwd)
    cand = tuple(int(v) for v in fwd)
    if c < best_cost or (c == best_cost and cand < best_forward):
        best_cost, best_forward = c, cand
    return best_cost, best_forward


def ged_ipfp(
    model: CostModel,
    g: AttributedGraph,
    g2: AttributedGraph,
    init: Transformation,
    config: GedSolverConfig = GedSolverConfig(),
) -> GedResult:
    """Refine ``init`` by iterated linearization of the quadratic edit cost.

    Each step solves a linear assignment on the gradient at the current
    relaxed point, takes the best step towards it (exact line search on the
    quadratic), and remembers the best discrete map seen, the initial one
    included; termination projects the relaxed point back to a
    transformation with one more assignment solve. The returned cost is
    therefore never worse than the cost of ``init``.
    """
    check_model_compatible(model, g)
    check_model_compatible(model, g2)
    if init.source_order != g.order or init.target_order != g2.order:
        raise SolverError("initial transformation does not match the graph orders")
    form = _QapForm(model, g, g2)
    cost, forward = _ipfp_refine(form, init.forward, config.ipfp_max_iters, config.ipfp_tol)
    t = transformation_from_forward(np.asarray(forward, dtype=np.int64), g.order, g2.order)
    return GedResult(t, cost, False)


def _random_maximal_forward(rng: np.random.Generator, n: int, n2: int) -> np.ndarray:
    k = min(n, n2)
    forward = np.full(n, n2, dtype=np.int64)
    if k:
        forward[rng.permutation(n)[:k]] = rng.permutation(n2)[:k]
    return forward


def ged_multistart(
    model: CostModel, g: AttributedGraph, g2: AttributedGraph, config: GedSolverConfig
) -> GedResult:
    """Best result over random restarts plus the bipartite solution.

    ``multistart_count`` random maximal injective maps are drawn from the
    seeded generator and the bipartite map joins the candidate pool. With an
    ipfp-family method every candidate is refined; with a bipartite-family
    method candidates are kept as they are. Candidates are ranked by true
    cost, ties by lexicographic forward map, so the outcome is deterministic
    for a given seed and independent of evaluation order.
    """
    check_model_compatible(model, g)
    check_model_compatible(model, g2)
    refine = config.method in ("ipfp", "mipfp")
    rng = np.random.default_rng(config.rng_seed)
    starts = [ged_bipartite(model, g, g2).transformation.forward]
    starts += [_random_maximal_forward(rng, g.order, g2.order) for _ in range(config.multistart_count)]
    if refine:
        form = _QapForm(model, g, g2)
        scored = [_ipfp_refine(form, f, config.ipfp_max_iters, config.ipfp_tol) for f in starts]
    else:
        scored = []
        for f in starts:
            t = transformation_from_forward(f, g.order, g2.order)
            scored.append((transformation_cost(model, t, g, g2), tuple(int(v) for v in f)))
    cost, forward = min(scored, key=lambda cf: (cf[0], cf[1]))
    t = transformation_from_forward(np.asarray(forward, dtype=np.int64), g.order, g2.order)
    return GedResult(t, cost, False)


def solve_ged(
    model: CostModel, g: AttributedGraph, g2: AttributedGraph, config: GedSolverConfig
) -> GedResult:
    """Dispatch on ``config.method``.

    ``ipfp`` initializes from the bipartite solution; the multistart methods
    add ``multistart_count`` random starts on top of it.
    """
    if config.method == "exact":
        return ged_exact(model, g, g2, config.exact_order_cap)
    if config.method == "bipartite":
        return ged_bipartite(model, g, g2)
    if config.method == "ipfp":
        init = ged_bipartite(model, g, g2).transformation
        return ged_ipfp(model, g, g2, init, config)
    if config.method in ("mbipartite", "mipfp"):
        return ged_multistart(model, g, g2, config)
    raise SolverError(f"unknown method {config.method!r}")
