import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cheegerlab.graphs import (
    UNREACHABLE,
    GraphError,
    all_graphs,
    ball_growth_bound,
    build_graph,
    complete,
    cycle,
    hypercube,
    margulis,
    path,
    random_regular,
)
from cheegerlab.io import InputError, graph_from_json, graph_to_json

from conftest import connected_graphs


def test_build_graph_symmetrizes_and_drops_loops():
    g = build_graph(3, [(0, 1), (1, 0), (1, 1), (1, 2)])
    assert g.directed_edges == ((0, 1), (1, 0), (1, 2), (2, 1))
    assert g.undirected_edges == ((0, 1), (1, 2))


def test_build_graph_rejects_out_of_range():
    with pytest.raises(GraphError):
        build_graph(2, [(0, 2)])


@pytest.mark.parametrize(
    "g, n, m, k",
    [
        (path(5), 5, 8, 2),
        (cycle(6), 6, 12, 2),
        (complete(5), 5, 20, 4),
        (hypercube(3), 8, 24, 3),
    ],
)
def test_generator_sizes(g, n, m, k):
    assert (g.n, g.num_directed_edges, g.k_max) == (n, m, k)


def test_margulis_valency_bounded_by_eight():
    # collapsing parallel edges and loops only lowers degrees
    for n in range(2, 9):
        g = margulis(n)
        assert g.n == n * n and g.k_max <= 8 and g.is_connected()
    assert margulis(3).k_max == 4


def test_random_regular_is_regular_and_seeded():
    a = random_regular(20, 3, seed=7)
    b = random_regular(20, 3, seed=7)
    assert a.directed_edges == b.directed_edges
    assert set(a.degree.tolist()) == {3}
    with pytest.raises(GraphError):
        random_regular(5, 3, seed=0)


def test_distances_on_cycle():
    g = cycle(8)
    assert g.dist[0].tolist() == [0, 1, 2, 3, 4, 3, 2, 1]
    assert g.diameter() == 4
    assert g.ball(0, 1) == frozenset({7, 0, 1})


def test_disconnected_distance_is_sentinel():
    g = build_graph(4, [(0, 1), (2, 3)])
    assert g.dist[0, 2] == UNREACHABLE
    assert g.components == ((0, 1), (2, 3))
    assert g.ball(0, 100) == frozenset({0, 1})


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)])
def test_all_graphs_counts(n, count):
    assert len(all_graphs(n)) == count


@given(connected_graphs(max_n=10), st.integers(0, 4))
def test_ball_growth(g, r):
    assert g.max_ball_size(r) <= ball_growth_bound(g.k_max, r)


@given(connected_graphs())
def test_metric_axioms(g):
    d = g.dist.astype(float)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)
    # triangle inequality through every midpoint
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :] + 1e-12)


@given(connected_graphs())
def test_json_round_trip(g):
    back = graph_from_json(json.loads(json.dumps(graph_to_json(g))))
    assert back.directed_edges == g.directed_edges


def test_graph_json_validation():
    for bad in ({"n": 2}, {"n": "2", "edges": []}, {"n": 2, "edges": [[0]]}, {"n": True, "edges": []}):
        with pytest.raises(InputError):
            graph_from_json(bad)
