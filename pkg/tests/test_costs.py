"""Edit cost models and transformation cost evaluation."""

import numpy as np
import pytest

from gmedian import (
    CostModel,
    CostModelError,
    LabelDelta,
    SquaredEuclidean,
    ZeroCost,
    build_graph,
    edge_cost,
    make_cost_model,
    transformation_cost,
    transformation_from_forward,
    vertex_cost,
)
from gmedian.costs import check_model_compatible, vertex_subst_cost

from oracles import (
    direct_edge_cost,
    direct_transformation_cost,
    direct_vertex_cost,
    random_forward,
    random_graph,
)


@pytest.fixture
def pair():
    g = build_graph(4, [1, 2, 2, 3], [(1, 2, 1), (0, 3, 3), (1, 3, 2), (2, 3, 3)])
    g2 = build_graph(3, [1, 2, 2], [(1, 2, 1), (0, 2, 4)])
    return g, g2


def test_example_costs(pair):
    g, g2 = pair
    t = transformation_from_forward([0, 2, 1, 3], 4, 3)
    model = make_cost_model()
    assert vertex_cost(model, t, g.vertex_attrs, g2.vertex_attrs) == 3.0
    assert edge_cost(model, t, g, g2) == 24.0
    assert transformation_cost(model, t, g, g2) == 15.0


def test_example_costs_match_oracle(pair):
    g, g2 = pair
    t = transformation_from_forward([0, 2, 1, 3], 4, 3)
    model = make_cost_model()
    assert direct_vertex_cost(model, t, g.vertex_attrs, g2.vertex_attrs) == 3.0
    assert direct_edge_cost(model, t, g, g2) == 24.0
    assert direct_transformation_cost(model, t, g, g2) == 15.0


def test_default_constants():
    model = make_cost_model()
    assert isinstance(model.vertex_subst, LabelDelta) and model.vertex_subst.cost == 1.0
    assert isinstance(model.edge_subst, LabelDelta) and model.edge_subst.cost == 1.0
    assert (model.c_vr, model.c_vi, model.c_er, model.c_ei) == (3.0, 3.0, 3.0, 3.0)


def test_triangle_guard():
    with pytest.raises(CostModelError, match="exceeds"):
        make_cost_model(c_vs=7.0, c_vr=3.0, c_vi=3.0)
    with pytest.raises(CostModelError, match="exceeds"):
        make_cost_model(c_es=10.0, c_er=3.0, c_ei=3.0)
    with pytest.raises(CostModelError, match="negative"):
        make_cost_model(c_vr=-1.0)
    # boundary: equality is allowed
    make_cost_model(c_vs=6.0, c_vr=3.0, c_vi=3.0)


def test_squared_euclidean_warns():
    with pytest.warns(RuntimeWarning):
        make_cost_model(vertex_mode="vector")


def test_insertion_only_example():
    g = build_graph(0, [], edge_labels=True)
    g2 = build_graph(2, [1, 2], [(0, 1, 5)])
    t = transformation_from_forward([], 0, 2)
    model = make_cost_model()
    assert transformation_cost(model, t, g, g2) == 2 * 3.0 + 3.0  # two vertices, one edge


def test_removal_only_example():
    g = build_graph(2, [1, 2], [(0, 1, 5)])
    g2 = build_graph(0, [], edge_labels=True)
    t = transformation_from_forward([0, 0], 2, 0)
    model = make_cost_model()
    assert transformation_cost(model, t, g, g2) == 2 * 3.0 + 3.0


def test_cost_symmetry_under_symmetric_constants(pair):
    g, g2 = pair
    model = make_cost_model()
    rng = np.random.default_rng(0)
    for _ in range(50):
        t = transformation_from_forward(random_forward(rng, g.order, g2.order), g.order, g2.order)
        fwd = transformation_cost(model, t, g, g2)
        back = transformation_cost(model, t.inverse(), g2, g)
        assert fwd == pytest.approx(back)


def test_cost_asymmetry_with_unequal_constants(pair):
    g, g2 = pair
    model = make_cost_model(c_vr=5.0, c_vi=1.0)
    t = transformation_from_forward([0, 1, 2, 3], 4, 3)  # one removal, no insertion
    back = transformation_cost(model, t.inverse(), g2, g)
    assert transformation_cost(model, t, g, g2) != back


def test_vectorized_costs_match_oracle_labels():
    rng = np.random.default_rng(7)
    model = make_cost_model(c_vs=2.0, c_es=1.5, c_vr=2.5, c_vi=3.0, c_er=2.0, c_ei=3.5)
    for _ in range(150):
        n, n2 = int(rng.integers(0, 6)), int(rng.integers(0, 6))
        g = random_graph(rng, n)
        g2 = random_graph(rng, n2)
        t = transformation_from_forward(random_forward(rng, n, n2), n, n2)
        assert vertex_cost(model, t, g.vertex_attrs, g2.vertex_attrs) == pytest.approx(
            direct_vertex_cost(model, t, g.vertex_attrs, g2.vertex_attrs)
        )
        assert edge_cost(model, t, g, g2) == pytest.approx(direct_edge_cost(model, t, g, g2))
        assert transformation_cost(model, t, g, g2) == pytest.approx(
            direct_transformation_cost(model, t, g, g2)
        )


def test_vectorized_costs_match_oracle_vectors():
    rng = np.random.default_rng(8)
    with pytest.warns(RuntimeWarning):
        model = make_cost_model(vertex_mode="vector", edge_mode="none")
    for _ in range(100):
        n, n2 = int(rng.integers(0, 5)), int(rng.integers(0, 5))
        g = random_graph(rng, n, vertex_mode="vector", edge_mode="none")
        g2 = random_graph(rng, n2, vertex_mode="vector", edge_mode="none")
        t = transformation_from_forward(random_forward(rng, n, n2), n, n2)
        assert transformation_cost(model, t, g, g2) == pytest.approx(
            direct_transformation_cost(model, t, g, g2)
        )


def test_unattributed_edge_substitution_is_free():
    g = build_graph(2, [1, 1], [(0, 1)])
    g2 = build_graph(2, [1, 1], [(0, 1)])
    t = transformation_from_forward([0, 1], 2, 2)
    model = make_cost_model(edge_mode="none")
    assert transformation_cost(model, t, g, g2) == 0.0


def test_vertex_subst_cost_dispatch():
    model = make_cost_model()
    assert vertex_subst_cost(model, 1, 1) == 0.0
    assert vertex_subst_cost(model, 1, 2) == 1.0
    with pytest.warns(RuntimeWarning):
        vec = make_cost_model(vertex_mode="vector")
    assert vertex_subst_cost(vec, np.array([1.0, 0.0]), np.array([0.0, 2.0])) == 5.0


def test_check_model_compatible():
    model = make_cost_model()
    check_model_compatible(model, build_graph(2, [1, 2], [(0, 1, 1)]))
    with pytest.raises(CostModelError):
        check_model_compatible(model, build_graph(1, [[1.0, 2.0]]))
    with pytest.raises(CostModelError):
        check_model_compatible(model, build_graph(2, [1, 2], [(0, 1)]))


def test_cost_model_requires_known_modes():
    with pytest.raises(CostModelError):
        make_cost_model(vertex_mode="bogus")
    with pytest.raises(CostModelError):
        make_cost_model(edge_mode="bogus")


def test_direct_model_construction():
    model = CostModel(1.0, 1.0, 1.0, 1.0, LabelDelta(0.5), ZeroCost())
    assert model.vertex_mode == "label"
    assert model.edge_mode == "none"
    with pytest.raises(CostModelError):
        CostModel(1.0, 1.0, 1.0, 1.0, LabelDelta(0.5), SquaredEuclidean())
    with pytest.warns(RuntimeWarning):
        vec = CostModel(1.0, 1.0, 1.0, 1.0, SquaredEuclidean(), ZeroCost())
    assert vec.vertex_mode == "vector"
