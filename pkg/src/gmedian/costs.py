"""Edit-cost model and cost evaluation of vertex transformations.

The cost of a transformation is the vertex term plus half the edge term.
The edge term counts every undirected edge operation twice (once per
ordered pair), so :func:`transformation_cost` is
``vertex_cost + edge_cost / 2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .graphs import LABEL, NO_EDGE_ATTRS, VECTOR, AttributedGraph, Transformation

__all__ = [
    "CostModelError",
    "LabelDelta",
    "SquaredEuclidean",
    "ZeroCost",
    "CostModel",
    "make_cost_model",
    "check_model_compatible",
    "vertex_subst_cost",
    "vertex_cost",
    "edge_cost",
    "transformation_cost",
]


class CostModelError(ValueError):
    """Invalid cost model or attribute-variant mismatch."""


@dataclass(frozen=True)
class LabelDelta:
    """Constant cost charged when two labels differ, zero otherwise."""

    cost: float


@dataclass(frozen=True)
class SquaredEuclidean:
    """Squared Euclidean distance between vector attributes."""


@dataclass(frozen=True)
class ZeroCost:
    """Free substitution, for edges that carry no attributes."""


@dataclass(frozen=True)
class CostModel:
    """Removal/insertion constants plus substitution cost functions.

    Constants must be non-negative. A label substitution cost exceeding the
    matching removal + insertion total is rejected: such a model never
    prefers substitution and breaks the minimal-transformation reading of
    the distance. Squared-distance vertex substitution cannot be bounded
    statically and only triggers a RuntimeWarning.
    """

    c_vr: float
    c_vi: float
    c_er: float
    c_ei: float
    vertex_subst: LabelDelta | SquaredEuclidean
    edge_subst: LabelDelta | ZeroCost

    def __post_init__(self) -> None:
        for name in ("c_vr", "c_vi", "c_er", "c_ei"):
            if getattr(self, name) < 0:
                raise CostModelError(f"{name} must be non-negative")
        if isinstance(self.vertex_subst, LabelDelta):
            if self.vertex_subst.cost < 0:
                raise CostModelError("vertex substitution cost must be non-negative")
            if self.vertex_subst.cost > self.c_vr + self.c_vi:
                raise CostModelError(
                    "vertex substitution cost exceeds removal + insertion"
                )
        elif isinstance(self.vertex_subst, SquaredEuclidean):
            warnings.warn(
                "squared-distance vertex substitution is unbounded and may exceed "
                "removal + insertion for distant attributes",
                RuntimeWarning,
                stacklevel=2,
            )
        else:
            raise CostModelError("unsupported vertex substitution function")
        if isinstance(self.edge_subst, LabelDelta):
            if self.edge_subst.cost < 0:
                raise CostModelError("edge substitution cost must be non-negative")
            if self.edge_subst.cost > self.c_er + self.c_ei:
                raise CostModelError("edge substitution cost exceeds removal + insertion")
        elif not isinstance(self.edge_subst, ZeroCost):
            raise CostModelError("unsupported edge substitution function")

    @property
    def vertex_mode(self) -> str:
        return LABEL if isinstance(self.vertex_subst, LabelDelta) else VECTOR

    @property
    def edge_mode(self) -> str:
        return LABEL if isinstance(self.edge_subst, LabelDelta) else NO_EDGE_ATTRS


def make_cost_model(
    vertex_mode: str = LABEL,
    edge_mode: str = LABEL,
    *,
    c_vs: float = 1.0,
    c_es: float = 1.0,
    c_vr: float = 3.0,
    c_vi: float = 3.0,
    c_er: float = 3.0,
    c_ei: float = 3.0,
) -> CostModel:
    """Cost model for the given attribute modes with the usual defaults."""
    if vertex_mode == LABEL:
        vs: LabelDelta | SquaredEuclidean = LabelDelta(c_vs)
    elif vertex_mode == VECTOR:
        vs = SquaredEuclidean()
    else:
        raise CostModelError(f"unknown vertex mode {vertex_mode!r}")
    if edge_mode == LABEL:
        es: LabelDelta | ZeroCost = LabelDelta(c_es)
    elif edge_mode == NO_EDGE_ATTRS:
        es = ZeroCost()
    else:
        raise CostModelError(f"unknown edge mode {edge_mode!r}")
    return CostModel(c_vr, c_vi, c_er, c_ei, vs, es)


def check_model_compatible(model: CostModel, g: AttributedGraph) -> None:
    if model.vertex_mode != g.vertex_mode:
        raise CostModelError(
            f"cost model expects {model.vertex_mode} vertex attributes, "
            f"graph {g.graph_id!r} has {g.vertex_mode}"
        )
    if model.edge_mode != g.edge_mode:
        raise CostModelError(
            f"cost model expects {model.edge_mode} edge attributes, "
            f"graph {g.graph_id!r} has {g.edge_mode}"
        )


def vertex_subst_cost(model: CostModel, a, b) -> float:
    """Substitution cost between two vertex attributes."""
    if isinstance(model.vertex_subst, LabelDelta):
        if np.ndim(a) != 0 or np.ndim(b) != 0:
            raise CostModelError("label substitution applied to vector attributes")
        return model.vertex_subst.cost if a != b else 0.0
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or a.shape != b.shape:
        raise CostModelError("vector substitution needs two equal-length vectors")
    d = a - b
    return float(d @ d)


def _edge_subst_cost(model: CostModel, x: int, y: int) -> float:
    if isinstance(model.edge_subst, LabelDelta):
        return model.edge_subst.cost if x != y else 0.0
    return 0.0


def vertex_cost(model: CostModel, t: Transformation, phi: np.ndarray, phi2: np.ndarray) -> float:
    """Total vertex operation cost of ``t`` between two attribute arrays."""
    phi = np.asarray(phi)
    phi2 = np.asarray(phi2)
    if phi.shape[0] != t.source_order or phi2.shape[0] != t.target_order:
        raise CostModelError("attribute arrays do not match transformation orders")
    sub = t.substituted
    n_sub = int(sub.sum())
    targets = t.forward[sub]
    if isinstance(model.vertex_subst, LabelDelta):
        if phi.ndim != 1 or phi2.ndim != 1:
            raise CostModelError("label substitution applied to vector attributes")
        subst = model.vertex_subst.cost * np.count_nonzero(phi[sub] != phi2[targets])
    else:
        if phi.ndim != 2 or phi2.ndim != 2:
            raise CostModelError("vector substitution applied to label attributes")
        d = phi[sub] - phi2[targets]
        subst = float((d * d).sum())
    removed = t.source_order - n_sub
    inserted = t.target_order - n_sub
    return float(subst + model.c_vr * removed + model.c_vi * inserted)


def edge_cost(model: CostModel, t: Transformation, g: AttributedGraph, g2: AttributedGraph) -> float:
    """Total edge operation cost, counting each undirected edge twice."""
    if t.source_order != g.order or t.target_order != g2.order:
        raise CostModelError("transformation orders do not match the graphs")
    labelled = isinstance(model.edge_subst, LabelDelta)
    if labelled and (g.edge_attrs is None or g2.edge_attrs is None):
        raise CostModelError("label substitution applied to unattributed edges")
    f, r = t.forward, t.reverse
    n, n2 = g.order, g2.order
    a, a2 = g.adjacency, g2.adjacency
    total = 0.0
    for i, j in g.edge_list:
        fi, fj = f[i], f[j]
        if fi < n2 and fj < n2 and a2[fi, fj]:
            if labelled:
                total += _edge_subst_cost(model, g.edge_attrs[i, j], g2.edge_attrs[fi, fj])
        else:
            total += model.c_er
    for k, l in g2.edge_list:
        rk, rl = r[k], r[l]
        if not (rk < n and rl < n and a[rk, rl]):
            total += model.c_ei
    return 2.0 * total


def transformation_cost(
    model: CostModel, t: Transformation, g: AttributedGraph, g2: AttributedGraph
) -> float:
    """Cost of ``t`` from ``g`` to ``g2``: vertex term plus half the edge term."""
    return vertex_cost(model, t, g.vertex_attrs, g2.vertex_attrs) + 0.5 * edge_cost(model, t, g, g2)
