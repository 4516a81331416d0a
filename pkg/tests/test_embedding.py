import pytest

from gridpaths.embedding import (
    DegreeTooHigh, EmbeddingFailure, OrthogonalEmbedding, embed_auto, embed_orthogonal, validate_embedding,
)
from gridpaths.graph_core import complete_bipartite, complete_graph, cycle_graph, edge_key
from gridpaths.grid_geom import GridPath, GridPoint

from instances import random_planar_deg4

K4_POINTS = {"1": (0, 0), "2": (4, 0), "3": (2, 2), "4": (2, 4)}
K4_EDGES = {
    ("1", "2"): [(0, 0), (4, 0)],
    ("1", "3"): [(0, 0), (0, 2), (2, 2)],
    ("2", "3"): [(4, 0), (4, 2), (2, 2)],
    ("3", "4"): [(2, 2), (2, 4)],
    ("1", "4"): [(0, 0), (-1, 0), (-1, 4), (2, 4)],
    ("2", "4"): [(4, 0), (5, 0), (5, 4), (2, 4)],
}


def k4_embedding(override=None):
    edges = {**K4_EDGES, **(override or {})}
    return OrthogonalEmbedding({k: GridPoint(*p) for k, p in K4_POINTS.items()},
                               {edge_key(*k): GridPath(v) for k, v in edges.items()})


def check(g, emb):
    assert validate_embedding(g, emb).ok
    for (u, v), p in emb.edge_paths.items():
        assert set(p.endpoints) == {emb.vertex_points[u], emb.vertex_points[v]}
        assert p.bends() <= 4
    assert len(set(emb.vertex_points.values())) == len(g)


def test_handmade_k4_valid():
    check(complete_graph(4), k4_embedding())


def test_crossing_edges_invalid():
    bad = k4_embedding({("1", "4"): [(0, 0), (0, 3), (3, 3), (3, 4), (2, 4)]})
    assert not validate_embedding(complete_graph(4), bad).ok


def test_five_bends_invalid():
    five = [(0, 0), (0, -1), (1, -1), (1, -2), (3, -2), (3, 0), (4, 0)]
    assert GridPath(five).bends() == 5
    assert not validate_embedding(complete_graph(4), k4_embedding({("1", "2"): five})).ok


def test_through_other_vertex_invalid():
    bad = k4_embedding({("1", "2"): [(0, 0), (0, 2), (4, 2), (4, 0)]})
    assert not validate_embedding(complete_graph(4), bad).ok


def test_c4_side_three():
    g = cycle_graph(4)
    check(g, embed_orthogonal(g, 3))


def test_k5_fails():
    with pytest.raises(EmbeddingFailure):
        embed_orthogonal(complete_graph(5), 4, time_budget=2)


def test_k23_side_eight():
    g = complete_bipartite(2, 3)
    check(g, embed_orthogonal(g, 8))


def test_degree_too_high():
    with pytest.raises(DegreeTooHigh):
        embed_orthogonal(complete_graph(6), 10)


def test_embed_auto_and_round_trip():
    import random
    rng = random.Random(11)
    for _ in range(4):
        g = random_planar_deg4(rng)
        emb = embed_auto(g, time_budget=2)
        check(g, emb)
        assert OrthogonalEmbedding.from_dict(emb.to_dict()).to_dict() == emb.to_dict()
