import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridpaths.constructions import build_end_eater
from gridpaths.graph_core import (
    CountOutOfRange, GraphError, LabeledGraph, complete_bipartite, complete_graph, connected_components, cycle_graph,
    diamond_chain_substitute, edge_label, is_k4_free, is_triangle_free, k_subdivide, line_graph, path_graph,
    petersen, triangles,
)

from instances import from_nx


def iso(a: LabeledGraph, b: LabeledGraph) -> bool:
    return nx.is_isomorphic(nx.Graph(a.edges) if a.edges else nx.empty_graph(a.vertices),
                            nx.Graph(b.edges) if b.edges else nx.empty_graph(b.vertices))


def test_bad_graphs():
    with pytest.raises(GraphError):
        LabeledGraph(["a"], [("a", "a")])
    with pytest.raises(GraphError):
        LabeledGraph(["a"], [("a", "b")])
    with pytest.raises(GraphError):
        LabeledGraph(["a b"])


def test_k4_two_subdivision_counts():
    h = k_subdivide(complete_graph(4), 2)
    assert (len(h), h.num_edges()) == (16, 18)


def test_subdivide_single_edge():
    h = k_subdivide(path_graph(2), 1)
    assert len(h) == 3 and h.num_edges() == 2
    assert iso(h, path_graph(3))


def test_subdivide_edgeless():
    g = LabeledGraph(["a", "b"])
    assert k_subdivide(g, 3) == g


def test_line_graphs():
    assert iso(line_graph(path_graph(3)), path_graph(2))
    assert iso(line_graph(complete_graph(3)), complete_graph(3))
    star = LabeledGraph("cxyz", [("c", "x"), ("c", "y"), ("c", "z")])
    assert iso(line_graph(star), complete_graph(3))


def test_line_graph_labels():
    g = path_graph(3)
    lg = line_graph(g)
    assert set(lg.vertices) == {edge_label(u, v) for u, v in g.edges}


def test_diamond_chain_one_edge():
    g = path_graph(2)
    u, v = g.vertices
    d0 = diamond_chain_substitute(g, {(u, v): 0})
    assert (len(d0), d0.num_edges()) == (5, 6)
    d3 = diamond_chain_substitute(g, {(u, v): 3})
    assert len(d3) == len(g) + 12


def test_diamond_chain_bad_count():
    g = path_graph(2)
    u, v = g.vertices
    with pytest.raises(CountOutOfRange):
        diamond_chain_substitute(g, {(u, v): 5})


def test_diamond_chain_keeps_planarity():
    g = complete_graph(4)
    d = diamond_chain_substitute(g, {e: 2 for e in g.edges})
    assert nx.check_planarity(nx.Graph(d.edges))[0]


def test_triangle_queries():
    assert len(triangles(complete_graph(4))) == 4
    assert not is_k4_free(complete_graph(4))
    assert is_k4_free(build_end_eater(3).graph)
    assert is_triangle_free(k_subdivide(complete_graph(5), 2))


def test_named_graphs():
    assert complete_bipartite(2, 3).num_edges() == 6
    p = petersen()
    assert (len(p), p.num_edges()) == (10, 15)
    assert iso(p, from_nx(nx.petersen_graph()))
    assert cycle_graph(5).num_edges() == 5


def test_relabel_and_diff():
    g = path_graph(3)
    h = g.relabeled({v: v + "x" for v in g.vertices})
    assert g != h
    d = g.diff(h)
    assert d


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 8))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    es = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return LabeledGraph([str(i) for i in range(n)], [(str(a), str(b)) for a, b in es])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_line_graph_matches_networkx(g):
    a = to_nx(line_graph(g))
    b = nx.line_graph(to_nx(g))
    assert nx.is_isomorphic(a, b)


@settings(max_examples=80, deadline=None)
@given(graphs(), st.integers(1, 3))
def test_subdivision_counts(g, k):
    h = k_subdivide(g, k)
    assert len(h) == len(g) + k * g.num_edges()
    assert h.num_edges() == (k + 1) * g.num_edges()
    if k >= 2:
        assert is_triangle_free(h)


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_triangles_match_networkx(g):
    assert len(triangles(g)) == sum(nx.triangles(to_nx(g)).values()) // 3
    assert len(connected_components(g)) == nx.number_connected_components(to_nx(g))
