"""Graph construction, validation, and serialization."""

import json

import numpy as np
import pytest

from ramalift import (
    Graph,
    GraphFormatError,
    complete_bipartite,
    cycle,
    graph_from_edgelist,
    graph_from_json,
    graph_hash,
    graph_to_edgelist,
    graph_to_json,
    hermitian_eigenvalues,
    path,
    star,
    validate,
)


def test_complete_bipartite_k11_is_single_edge():
    g = complete_bipartite(1)
    assert g.n == 2
    assert g.edges == ((1, 2),)


def test_complete_bipartite_k33_shape():
    g = complete_bipartite(3)
    assert g.n == 6
    assert g.m == 9
    assert g.bipartition == ((1, 2, 3), (4, 5, 6))
    assert all(u <= 3 < v for u, v in g.edges)


def test_complete_bipartite_k33_spectrum():
    # K_{d,d} has eigenvalues +-d and 0 with multiplicity 2d-2
    g = complete_bipartite(3)
    spec = hermitian_eigenvalues(g.adjacency_matrix())
    assert np.allclose(spec.eigenvalues, [-3, 0, 0, 0, 0, 3], atol=1e-9)


def test_complete_bipartite_rejects_zero_degree():
    with pytest.raises(ValueError):
        complete_bipartite(0)


def test_edges_canonicalized_and_sorted():
    g = Graph(4, [(3, 1), (4, 2), (2, 1)])
    assert g.edges == ((1, 2), (1, 3), (2, 4))


def test_rejects_self_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(1, 2), (2, 1)])


def test_rejects_noncrossing_bipartition():
    with pytest.raises(ValueError):
        Graph(4, [(1, 2)], ((1, 2), (3, 4)))


def test_validate_k33():
    rep = validate(complete_bipartite(3))
    assert rep.is_regular and rep.degree == 3
    assert rep.is_bipartite and rep.is_connected


def test_validate_path3():
    rep = validate(path(3))
    assert not rep.is_regular and rep.degree is None
    assert rep.is_bipartite


def test_validate_two_disjoint_edges():
    rep = validate(Graph(4, [(1, 2), (3, 4)]))
    assert rep.is_regular and rep.degree == 1
    assert rep.is_bipartite and not rep.is_connected


def test_validate_odd_cycle_not_bipartite():
    rep = validate(cycle(5))
    assert rep.is_regular and rep.degree == 2
    assert not rep.is_bipartite


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_complete_bipartite_always_validates(d):
    rep = validate(complete_bipartite(d))
    assert rep.is_regular and rep.degree == d
    assert rep.is_bipartite and rep.is_connected


def test_star_and_cycle_shapes():
    assert star(4).degree_sequence() == [4, 1, 1, 1, 1]
    assert cycle(6).degree_sequence() == [2] * 6
    assert cycle(6).bipartition is not None
    assert cycle(5).bipartition is None


def test_json_round_trip(corpus):
    for name, g in corpus:
        back = graph_from_json(json.loads(json.dumps(graph_to_json(g))))
        assert back.n == g.n, name
        assert back.edges == g.edges, name
        assert back.bipartition == g.bipartition, name
        assert graph_hash(back) == graph_hash(g), name


def test_edgelist_round_trip(corpus):
    for name, g in corpus:
        back = graph_from_edgelist(graph_to_edgelist(g))
        assert (back.n, back.edges) == (g.n, g.edges), name


def test_json_parse_rejects_multigraph():
    with pytest.raises(GraphFormatError):
        graph_from_json({"n": 3, "edges": [[1, 2], [1, 2]], "bipartition": None})


def test_edgelist_parse_rejects_bad_header():
    with pytest.raises(GraphFormatError):
        graph_from_edgelist("1 2\n2 3\n")
    with pytest.raises(GraphFormatError):
        graph_from_edgelist("3 5\n1 2\n")


def test_hash_is_content_addressed():
    g1 = Graph(3, [(1, 2), (2, 3)])
    g2 = Graph(3, [(2, 3), (1, 2)])
    g3 = Graph(3, [(1, 2), (1, 3)])
    assert graph_hash(g1) == graph_hash(g2)
    assert graph_hash(g1) != graph_hash(g3)
