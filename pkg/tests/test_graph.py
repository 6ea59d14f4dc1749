from itertools import combinations

import pytest
from hypothesis import given, settings

from sigmarho.errors import ParseError
from sigmarho.graph import (
    Graph,
    WeightedGraph,
    approx_vertex_cover,
    compute_degree_d_modulator,
    compute_vertex_cover,
    format_graph,
    generate_connected,
    generate_random,
    is_vertex_cover,
    parse_graph,
    parse_weighted_graph,
    verify_modulator,
)

from conftest import small_graphs


def test_parse_path():
    g = parse_graph("p edge 3 2\ne 1 2\ne 2 3\n")
    assert g.n == 3
    assert g.edges() == [(0, 1), (1, 2)]


def test_parse_isolated_and_comments():
    g = parse_graph("c two lonely vertices\np edge 2 0\n")
    assert g.n == 2 and g.edge_count == 0


def test_duplicate_edges_are_idempotent():
    g = parse_graph("p edge 2 2\ne 1 2\ne 2 1\n")
    assert g.edges() == [(0, 1)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("p edge 2 1\ne 1 1\n", 2),
        ("p edge 2 1\ne 1 3\n", 2),
        ("p node 2 1\n", 1),
        ("p edge 2 1\nc ok\ne 1 x\n", 3),
        ("e 1 2\n", 1),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError, match=f"line {line}:"):
        parse_graph(text)


def test_missing_header():
    with pytest.raises(ParseError):
        parse_graph("c nothing here\n")


def test_weights():
    wg = parse_weighted_graph("p edge 3 2\nw 2 7\ne 1 2\ne 2 3\n")
    assert wg.weights == (1, 7, 1)
    assert parse_weighted_graph(format_graph(wg.graph, wg.weights)) == wg
    with pytest.raises(ValueError):
        WeightedGraph(wg.graph, (1, 0, 1))


@given(small_graphs())
def test_format_round_trip(g):
    assert parse_graph(format_graph(g)) == g


def test_invariants_rejected():
    with pytest.raises(ValueError):
        Graph(2, (frozenset({1}), frozenset()))
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])


def test_generate_random_extremes_and_determinism():
    assert generate_random(4, 0.0, 3).edge_count == 0
    assert generate_random(4, 1.0, 3) == Graph.complete(4)
    assert generate_random(10, 0.5, 7) == generate_random(10, 0.5, 7)
    with pytest.raises(ValueError):
        generate_random(3, 1.5, 0)


def test_generate_connected():
    for seed in range(20):
        g = generate_connected(9, 0.15, seed)
        assert g.is_connected()
        assert g == generate_connected(9, 0.15, seed)


def test_verify_modulator_examples():
    k4 = Graph.complete(4)
    assert verify_modulator(k4, {0, 1}, 1)
    assert not verify_modulator(k4, {0}, 1)
    assert verify_modulator(k4, range(4), 0)


def test_vertex_cover_examples():
    assert compute_vertex_cover(Graph.path(3)) == {1}
    assert compute_vertex_cover(Graph.complete(4), 2) is None
    assert compute_vertex_cover(Graph.empty(5)) == frozenset()


def test_degree_d_examples():
    tri = compute_degree_d_modulator(Graph.complete(3), 1)
    assert len(tri) == 1
    assert compute_degree_d_modulator(Graph.path(5), 1, 0) is None


def _min_modulator_size(g, d):
    for size in range(g.n + 1):
        if any(verify_modulator(g, c, d) for c in combinations(range(g.n), size)):
            return size


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=9))
def test_modulators_valid_and_minimum(g):
    for d in (0, 1, 2):
        s = compute_degree_d_modulator(g, d)
        assert verify_modulator(g, s, d)
        assert len(s) == _min_modulator_size(g, d)
    assert is_vertex_cover(g, approx_vertex_cover(g))
    assert len(approx_vertex_cover(g)) <= 2 * len(compute_vertex_cover(g))


def test_graph_helpers():
    c5 = Graph.cycle(5)
    assert c5.complement().edge_count == 5
    sub, order = c5.induced([4, 0, 1])
    assert sorted(order) == [0, 1, 4]
    assert sub.edge_count == 2
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert sorted(map(sorted, two.components())) == [[0, 1], [2, 3]]
    assert not two.is_connected() and Graph.star(3).is_connected()
