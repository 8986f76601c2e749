import json
import math

import networkx as nx
import pytest

from oracles import to_nx
from pursuit import generators as gen
from pursuit.errors import DomainError
from pursuit.graph import (
    INF,
    Graph,
    all_pairs_distances,
    bfs_distances,
    closed_neighborhood,
    connected_components,
    girth,
    induced_subgraph,
    is_connected,
    load_graph,
    open_neighborhood,
    save_graph,
    shortest_path,
)


def test_closed_neighborhood_c4():
    assert closed_neighborhood(gen.cycle(4), {0}) == {3, 0, 1}


def test_closed_neighborhood_empty():
    assert closed_neighborhood(gen.petersen(), set()) == set()


def test_closed_neighborhood_petersen_matches_adjacency_list():
    g = gen.petersen()
    h = to_nx(g)
    got = closed_neighborhood(g, {0})
    assert got == {0} | set(h.neighbors(0))
    assert len(got) == 4


def test_closed_neighborhood_rejects_bad_vertex():
    with pytest.raises(DomainError):
        closed_neighborhood(gen.cycle(4), {7})


def test_open_neighborhood_excludes_set():
    assert open_neighborhood(gen.path(4), {1, 2}) == {0, 3}


def test_distances_path_and_disconnected():
    assert all_pairs_distances(gen.path(3)).dist[0, 2] == 2
    two = Graph.from_edges(2, [])
    assert all_pairs_distances(two).dist[0, 1] == INF


def test_toroidal_diameter_matches_networkx():
    g = gen.toroidal_grid(3, 5)
    assert all_pairs_distances(g).diameter() == nx.diameter(to_nx(g)) == 3


@pytest.mark.parametrize(
    "g, expected",
    [(gen.cycle(5), 5), (gen.path(6), math.inf), (gen.petersen(), 5), (gen.projective_incidence(2), 6), (gen.complete(4), 3)],
)
def test_girth(g, expected):
    assert girth(g) == expected
    if expected < math.inf:
        assert nx.girth(to_nx(g)) == expected


def test_induced_subgraph_cases():
    h, m = induced_subgraph(gen.cycle(4), {0, 1, 2})
    assert h.n == 3 and sorted(h.edges) == [(0, 1), (1, 2)]
    g = gen.petersen()
    same, ident = induced_subgraph(g, range(g.n))
    assert same.edges == g.edges and ident == {v: v for v in range(g.n)}
    star, _ = induced_subgraph(g, closed_neighborhood(g, {0}))
    degs = sorted(star.degree(v) for v in range(star.n))
    assert degs == [1, 1, 1, 3]


def test_components():
    assert connected_components(gen.cycle(4)) == [frozenset(range(4))]
    two = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert sorted(map(sorted, connected_components(two))) == [[0, 1], [2, 3]]
    c4 = gen.cycle(4)
    rest = set(range(4)) - closed_neighborhood(c4, {0})
    assert connected_components(c4, rest) == [frozenset({2})]


def test_bfs_restricted_and_shortest_path():
    g = gen.cycle(6)
    assert bfs_distances(g, 0)[3] == 3
    # forbid vertex 1: go the long way
    allowed = sum(1 << v for v in range(6) if v != 1)
    assert bfs_distances(g, 0, allowed)[2] == 4
    assert shortest_path(g, 0, 3) == [0, 1, 2, 3]  # lexicographically smallest tie
    assert shortest_path(Graph.from_edges(2, []), 0, 1) is None


def test_graph_invariants_enforced():
    with pytest.raises(DomainError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(DomainError):
        Graph.from_edges(2, [(0, 2)])
    g = Graph.from_edges(3, [(1, 0), (0, 1), (2, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.has_edge(1, 0) and not g.has_edge(0, 2)


def test_json_roundtrip(tmp_path):
    g = Graph.from_edges(3, [(2, 0), (0, 1)], labels=["a", "b", "c"])
    p = tmp_path / "g.json"
    save_graph(g, p)
    data = json.loads(p.read_text())
    assert data["edges"] == [[0, 1], [0, 2]]
    assert all(u < v for u, v in data["edges"])
    back = load_graph(p)
    assert back.edges == g.edges and back.labels == g.labels


def test_json_rejects_malformed():
    with pytest.raises(DomainError):
        Graph.loads('{"edges": [[0, 1]]}')


def test_is_connected():
    assert is_connected(gen.petersen())
    assert not is_connected(Graph.from_edges(3, [(0, 1)]))
