"""Edit-distance solvers: exact enumeration, assignment bound, refinement."""

import numpy as np
import pytest

from gmedian import (
    GedSolverConfig,
    SolverError,
    build_graph,
    ged_bipartite,
    ged_exact,
    ged_ipfp,
    ged_multistart,
    make_cost_model,
    solve_ged,
    transformation_cost,
    transformation_from_forward,
)
from gmedian.solvers import _QapForm, _random_maximal_forward

from oracles import (
    direct_transformation_cost,
    oracle_ged,
    random_forward,
    random_graph,
)


@pytest.fixture
def pair():
    g = build_graph(4, [1, 2, 2, 3], [(1, 2, 1), (0, 3, 3), (1, 3, 2), (2, 3, 3)])
    g2 = build_graph(3, [1, 2, 2], [(1, 2, 1), (0, 2, 4)])
    return g, g2


def test_exact_on_example(pair):
    g, g2 = pair
    model = make_cost_model()
    result = ged_exact(model, g, g2)
    expected_cost, expected_forward = oracle_ged(model, g, g2)
    assert result.cost == pytest.approx(expected_cost)
    assert tuple(result.transformation.forward.tolist()) == expected_forward
    assert result.is_exact


def test_exact_matches_oracle_random():
    rng = np.random.default_rng(21)
    model = make_cost_model()
    for _ in range(60):
        n, n2 = int(rng.integers(0, 5)), int(rng.integers(0, 5))
        g = random_graph(rng, n)
        g2 = random_graph(rng, n2)
        result = ged_exact(model, g, g2)
        expected_cost, expected_forward = oracle_ged(model, g, g2)
        assert result.cost == pytest.approx(expected_cost)
        assert tuple(result.transformation.forward.tolist()) == expected_forward


def test_exact_self_distance_is_zero():
    rng = np.random.default_rng(22)
    model = make_cost_model()
    for _ in range(10):
        g = random_graph(rng, int(rng.integers(1, 5)))
        r = ged_exact(model, g, g)
        assert r.cost == 0.0
        assert r.transformation.forward.tolist() == list(range(g.order))


def test_exact_order_cap(pair):
    g, _ = pair
    big = random_graph(np.random.default_rng(0), 9)
    model = make_cost_model()
    with pytest.raises(SolverError, match="cap"):
        ged_exact(model, g, big)
    ged_exact(model, g, g, order_cap=4)


def test_quadratic_form_matches_direct_cost():
    rng = np.random.default_rng(23)
    model = make_cost_model(c_vs=2.0, c_es=1.5, c_vr=2.5, c_vi=3.0, c_er=2.0, c_ei=3.5)
    for _ in range(80):
        n, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        g = random_graph(rng, n)
        g2 = random_graph(rng, n2)
        form = _QapForm(model, g, g2)
        assert np.array_equal(form.quad, form.quad.T)
        for _ in range(4):
            forward = np.asarray(random_forward(rng, n, n2), dtype=np.int64)
            t = transformation_from_forward(forward, n, n2)
            x = form.start_matrix(t)
            assert x.sum(axis=0).tolist() == [1.0] * form.N
            assert x.sum(axis=1).tolist() == [1.0] * form.N
            xv = x.ravel()
            relaxed = float((form.linear * x).sum() + 0.5 * xv @ (form.quad @ xv))
            direct = direct_transformation_cost(model, t, g, g2)
            assert relaxed == pytest.approx(direct), forward


def test_quadratic_form_unlabeled_edges():
    rng = np.random.default_rng(24)
    model = make_cost_model(edge_mode="none", c_er=2.0, c_ei=1.0)
    for _ in range(40):
        n, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        g = random_graph(rng, n, edge_mode="none")
        g2 = random_graph(rng, n2, edge_mode="none")
        form = _QapForm(model, g, g2)
        forward = np.asarray(random_forward(rng, n, n2), dtype=np.int64)
        t = transformation_from_forward(forward, n, n2)
        x = form.start_matrix(t)
        xv = x.ravel()
        relaxed = float((form.linear * x).sum() + 0.5 * xv @ (form.quad @ xv))
        assert relaxed == pytest.approx(direct_transformation_cost(model, t, g, g2))


def test_bipartite_upper_bound(pair):
    g, g2 = pair
    model = make_cost_model()
    exact = ged_exact(model, g, g2)
    upper = ged_bipartite(model, g, g2)
    assert upper.cost >= exact.cost - 1e-12
    # the reported cost is the true cost of the returned map
    assert upper.cost == pytest.approx(
        transformation_cost(model, upper.transformation, g, g2)
    )


def test_ipfp_never_worse_than_init():
    rng = np.random.default_rng(25)
    model = make_cost_model()
    for _ in range(30):
        n, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        g = random_graph(rng, n)
        g2 = random_graph(rng, n2)
        init = transformation_from_forward(random_forward(rng, n, n2), n, n2)
        init_cost = transformation_cost(model, init, g, g2)
        refined = ged_ipfp(model, g, g2, init)
        assert refined.cost <= init_cost + 1e-9
        assert refined.cost == pytest.approx(
            transformation_cost(model, refined.transformation, g, g2)
        )


def test_ipfp_rejects_mismatched_init(pair):
    g, g2 = pair
    model = make_cost_model()
    with pytest.raises(SolverError):
        ged_ipfp(model, g, g2, transformation_from_forward([0, 1], 2, 3))


def test_solver_chain_ordering():
    rng = np.random.default_rng(26)
    model = make_cost_model()
    config = GedSolverConfig(multistart_count=8, rng_seed=3)
    for _ in range(25):
        n, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        g = random_graph(rng, n)
        g2 = random_graph(rng, n2)
        costs = {
            m: solve_ged(model, g, g2, GedSolverConfig(method=m, multistart_count=8, rng_seed=3)).cost
            for m in ("exact", "bipartite", "ipfp", "mbipartite", "mipfp")
        }
        assert costs["exact"] <= costs["mipfp"] + 1e-12
        assert costs["mipfp"] <= costs["ipfp"] + 1e-12
        assert costs["ipfp"] <= costs["bipartite"] + 1e-12
        assert costs["exact"] <= costs["mbipartite"] + 1e-12
        assert costs["mbipartite"] <= costs["bipartite"] + 1e-12


def test_multistart_deterministic(pair):
    g, g2 = pair
    model = make_cost_model()
    config = GedSolverConfig(method="mipfp", multistart_count=12, rng_seed=11)
    a = ged_multistart(model, g, g2, config)
    b = ged_multistart(model, g, g2, config)
    assert a.cost == b.cost
    assert a.transformation.forward.tolist() == b.transformation.forward.tolist()


def test_random_maximal_forward_shape():
    rng = np.random.default_rng(1)
    for n, n2 in [(0, 3), (3, 0), (4, 2), (2, 4), (3, 3)]:
        f = _random_maximal_forward(rng, n, n2)
        assert f.shape == (n,)
        sub = f[f < n2]
        assert len(set(sub.tolist())) == len(sub) == min(n, n2)


def test_solver_config_validation():
    with pytest.raises(SolverError):
        GedSolverConfig(method="nope")
    with pytest.raises(SolverError):
        GedSolverConfig(multistart_count=0)
    with pytest.raises(SolverError):
        GedSolverConfig(ipfp_max_iters=0)


def test_empty_graph_pairs():
    model = make_cost_model()
    empty = build_graph(0, [], edge_labels=True)
    g = build_graph(2, [1, 2], [(0, 1, 1)])
    for method in ("exact", "bipartite", "ipfp", "mbipartite", "mipfp"):
        r = solve_ged(model, empty, g, GedSolverConfig(method=method, multistart_count=2))
        assert r.cost == pytest.approx(2 * 3.0 + 3.0)
        r = solve_ged(model, g, empty, GedSolverConfig(method=method, multistart_count=2))
        assert r.cost == pytest.approx(2 * 3.0 + 3.0)
        r = solve_ged(model, empty, empty, GedSolverConfig(method=method, multistart_count=2))
        assert r.cost == 0.0


def test_vector_mode_solvers():
    rng = np.random.default_rng(27)
    with pytest.warns(RuntimeWarning):
        model = make_cost_model(vertex_mode="vector", edge_mode="none")
    for _ in range(15):
        g = random_graph(rng, int(rng.integers(1, 4)), vertex_mode="vector", edge_mode="none")
        g2 = random_graph(rng, int(rng.integers(1, 4)), vertex_mode="vector", edge_mode="none")
        exact = ged_exact(model, g, g2)
        expected_cost, _ = oracle_ged(model, g, g2)
        assert exact.cost == pytest.approx(expected_cost)
        upper = ged_bipartite(model, g, g2)
        assert upper.cost >= exact.cost - 1e-9
