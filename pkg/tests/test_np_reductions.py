import pytest

from gridpaths.embedding import embed_auto, embed_orthogonal
from gridpaths.graph_core import (
    complete_graph, cycle_graph, diamond_chain_substitute, k_subdivide, line_graph, path_graph,
)
from gridpaths.np_reductions import (
    EmbeddingInvalid, lift_is_solution, project_is_solution, reduce_3col, reduce_cc, reduce_is, subdivision_rep,
)
from gridpaths.representation import PreconditionViolated, Representation, Semantics, derive_graph, validate
from gridpaths.solvers import (
    is_independent_set, is_k_colorable, max_independent_set, min_clique_cover, min_vertex_cover,
)

from instances import traced_instance

K4 = complete_graph(4)
K4_SUB = k_subdivide(K4, 2)


@pytest.fixture(scope="module")
def k4_rep1():
    return traced_instance(K4, 1)


@pytest.fixture(scope="module")
def k4_rep0():
    return traced_instance(K4, 0)


def test_subdivision_rep(k4_rep1, k4_rep0):
    for rep, mb in ((k4_rep1, 1), (k4_rep0, 0)):
        assert rep is not None
        assert validate(rep).ok and rep.max_bends() <= mb
        assert derive_graph(rep) == K4_SUB


def test_subdivision_rep_rejects_bent_embedding():
    emb = embed_orthogonal(K4, 6)
    if max(p.bends() for p in emb.edge_paths.values()) >= 3:
        with pytest.raises(EmbeddingInvalid):
            subdivision_rep(K4, emb, 0)


def test_reduce_is_k4(k4_rep1):
    red = reduce_is(K4_SUB, k4_rep1)
    assert len(red.out_graph) == 80
    assert red.out_rep.max_bends() == 0
    assert validate(red.out_rep).ok
    assert derive_graph(red.out_rep) == red.out_graph
    a_in, s_in = max_independent_set(K4_SUB)
    a_out, s_out = max_independent_set(red.out_graph)
    assert (a_in, a_out) == (7, 39)
    lifted = lift_is_solution(K4_SUB, s_in)
    assert len(lifted) == a_in + 2 * len(K4_SUB)
    assert is_independent_set(red.out_graph, lifted)
    back = project_is_solution(red, s_out)
    assert is_independent_set(K4_SUB, back)
    assert len(back) >= a_out - 2 * len(K4_SUB)


def test_reduce_is_rejects_other_graphs(k4_rep1):
    with pytest.raises(PreconditionViolated):
        reduce_is(cycle_graph(6), Representation({}))


def test_reduce_cc_k4(k4_rep0):
    red = reduce_cc(K4_SUB, k4_rep0)
    target = line_graph(k_subdivide(K4_SUB, 2))
    assert red.out_graph == target
    assert red.out_rep.max_bends() == 0
    assert derive_graph(red.out_rep) == target
    theta = min_clique_cover(red.out_graph)[0]
    beta = min_vertex_cover(k_subdivide(K4_SUB, 2))[0]
    assert theta == beta == 27


def test_line_graph_identity_on_k4_instance():
    assert min_clique_cover(line_graph(K4_SUB))[0] == min_vertex_cover(K4_SUB)[0] == 9


def test_reduce_cc_rejects_bends(k4_rep1):
    if k4_rep1.max_bends() > 0:
        with pytest.raises(PreconditionViolated):
            reduce_cc(K4_SUB, k4_rep1)


@pytest.mark.parametrize("g, colorable", [(cycle_graph(5), True), (K4, False), (path_graph(3), True)])
def test_reduce_3col(g, colorable):
    emb = embed_auto(g)
    red = reduce_3col(g, emb)
    assert red.out_rep.semantics is Semantics.EPG
    assert red.out_rep.max_bends() <= 1
    assert derive_graph(red.out_rep) == red.out_graph
    bends = {e: p.bends() for e, p in emb.edge_paths.items()}
    assert red.out_graph == diamond_chain_substitute(g, bends)
    assert len(red.out_graph) == len(g) + sum(3 * (b + 1) for b in bends.values())
    assert is_k_colorable(g, 3)[0] is colorable
    assert is_k_colorable(red.out_graph, 3)[0] is colorable


def test_reduce_3col_bad_embedding():
    emb = embed_auto(cycle_graph(5))
    with pytest.raises(EmbeddingInvalid):
        reduce_3col(cycle_graph(4), emb)
