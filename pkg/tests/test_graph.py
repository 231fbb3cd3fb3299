import itertools
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distspec.errors import ContractError, DisconnectedGraphError, ParseError
from distspec.extremal import balanced_partition, extremal_complement, ExtremalSpec
from distspec.graph import (UNREACHABLE, Graph, ShapeKind, all_pairs_distances, as_graph,
                            complement, complete_graph, components, cycle_graph, diameter,
                            disjoint_union, distance_matrix_via_complement, empty_graph,
                            from_graph6, parse_graph, path_graph, serialize_graph, to_graph6)
from distspec.phipsi import ComplementConfig


def test_edge_list_parses_p3():
    g = parse_graph("3\n0 1\n1 2")
    assert g == path_graph(3)


def test_graph6_empty_three_vertices():
    # "B?" is the empty graph on 3 vertices; "B_" has the edge 01
    assert from_graph6("B?") == empty_graph(3)
    assert from_graph6("B_").sorted_edges() == [(0, 1)]
    assert nx.from_graph6_bytes(b"B_").number_of_edges() == 1


def test_duplicate_edge_rejected_with_line():
    with pytest.raises(ParseError) as exc:
        parse_graph("2\n0 1\n0 1")
    assert exc.value.line == 3


@pytest.mark.parametrize("text", ["3\n0 3", "3\n1 1", "3\n0", "3\n0 x", "x\n"])
def test_bad_edge_lists(text):
    with pytest.raises(ParseError):
        parse_graph(text)


@pytest.mark.parametrize("text", ["C~~", "C}}", "B\x01", ">>graph6<<"])
def test_bad_graph6(text):
    with pytest.raises(ParseError):
        from_graph6(text)


def test_graph6_padding_position():
    with pytest.raises(ParseError) as exc:
        from_graph6("Bb")  # padding bit set
    assert exc.value.position == 1


def test_graph6_header_accepted():
    assert from_graph6(">>graph6<<C~") == complete_graph(4)


def _random_graph(rng, n, p=0.4):
    return Graph(n, frozenset(e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def test_graph6_matches_networkx():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(1, 20)
        g = _random_graph(rng, n)
        ref = nx.Graph()
        ref.add_nodes_from(range(n))
        ref.add_edges_from(g.edges)
        assert to_graph6(g) == nx.to_graph6_bytes(ref, header=False).decode().strip()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 15).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, max(n - 1, 0)),
                                                     st.integers(0, max(n - 1, 0)))))))
def test_round_trip_both_formats(data):
    n, pairs = data
    g = Graph(n, frozenset((min(u, v), max(u, v)) for u, v in pairs if u != v))
    assert parse_graph(serialize_graph(g, "edgelist")) == g
    assert parse_graph(serialize_graph(g, "graph6")) == g


def test_as_graph_forms():
    a = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert as_graph(a) == path_graph(3)
    assert as_graph(b"Bg") == path_graph(3)
    with pytest.raises(ValueError):
        as_graph(np.array([[0, 1], [0, 0]]))


def test_complement_examples():
    assert complement(complete_graph(4)) == empty_graph(4)
    assert complement(path_graph(3)).sorted_edges() == [(0, 2)]
    g = path_graph(7)
    assert complement(g).m == 21 - g.m


def test_components_classification():
    h0 = ComplementConfig.parse("C3+P4+P4").to_graph()
    assert [str(s) for _, s in components(h0)] == ["C3", "P4", "P4"]
    assert [str(s) for _, s in components(Graph(1))] == ["P1"]
    assert components(complete_graph(4))[0][1].kind is ShapeKind.OTHER


def test_distances():
    d = all_pairs_distances(path_graph(3))
    assert d.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
    kn = all_pairs_distances(complete_graph(5)).to_array()
    assert np.array_equal(kn, np.ones((5, 5)) - np.eye(5))
    d2 = all_pairs_distances(empty_graph(2))
    assert d2[0, 1] is UNREACHABLE
    with pytest.raises(DisconnectedGraphError):
        d2.to_array()


def test_distances_match_networkx():
    rng = random.Random(2)
    for _ in range(50):
        g = _random_graph(rng, rng.randint(2, 12), 0.3)
        d = all_pairs_distances(g)
        ref = nx.Graph(list(g.edges))
        ref.add_nodes_from(range(g.n))
        lengths = dict(nx.all_pairs_shortest_path_length(ref))
        for u in range(g.n):
            for v in range(g.n):
                want = lengths[u].get(v, UNREACHABLE)
                assert d[u, v] == want if want is not UNREACHABLE else d[u, v] is UNREACHABLE


def test_via_complement_examples():
    h0 = disjoint_union(path_graph(2), path_graph(2))
    d = distance_matrix_via_complement(h0)
    assert d == all_pairs_distances(complement(h0))
    assert d.basis == "cycles-and-paths"
    h0 = ComplementConfig.parse("P5+P6").to_graph()
    d = distance_matrix_via_complement(h0).to_array()
    twos = {tuple(x) for x in np.argwhere(np.triu(d == 2))}
    assert twos == set(h0.edges) and len(twos) == 9
    with pytest.raises(ContractError, match="0 and 3|vertices"):
        distance_matrix_via_complement(path_graph(4))


def test_via_complement_random_configs():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(4, 12)
        sizes = []
        left = n
        while left:
            k = rng.randint(1, left)
            sizes.append(k)
            left -= k
        if len(sizes) < 2:
            continue
        cyc = [k for k in sizes if k >= 3 and rng.random() < 0.4]
        paths = list(sizes)
        for c in cyc:
            paths.remove(c)
        h0 = ComplementConfig(cyc, paths).to_graph()
        assert distance_matrix_via_complement(h0) == all_pairs_distances(complement(h0))


def test_diameter():
    assert diameter(complete_graph(5)) == 1
    assert diameter(path_graph(4)) == 3
    with pytest.raises(DisconnectedGraphError):
        diameter(empty_graph(2))


def test_dense_graphs_have_diameter_two():
    # every connected graph with m > C(n-1, 2), n <= 7, via its complement (few edges)
    for n in range(3, 8):
        pairs = list(itertools.combinations(range(n), 2))
        for e in range(0, n - 1):
            for sub in itertools.combinations(pairs, e):
                g = complement(Graph(n, frozenset(sub)))
                assert diameter(g) <= 2


def test_extremal_components_balanced():
    for n in range(4, 15):
        for s in range(1, n):
            comps = components(extremal_complement(ExtremalSpec.from_ns(n, s)))
            sizes = sorted(sh.size for _, sh in comps)
            assert all(sh.kind is ShapeKind.PATH for _, sh in comps)
            assert sizes == balanced_partition(n, s + 1)


def test_graph_validation():
    assert Graph(2, frozenset({(1, 0)})).sorted_edges() == [(0, 1)]
    with pytest.raises(ValueError):
        Graph(2, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        Graph(2, frozenset({(0, 2)}))
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        cycle_graph(2)
