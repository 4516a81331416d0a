"""Shared instance generators for the test suite."""

from __future__ import annotations

import random

import networkx as nx

from gridpaths.embedding import EmbeddingFailure, embed_orthogonal
from gridpaths.graph_core import LabeledGraph, complete_graph, max_degree
from gridpaths.np_reductions import EmbeddingInvalid, subdivision_rep
from gridpaths.sat_reduction import Formula, validate_exactly3bounded


def from_nx(h, name: str = "g") -> LabeledGraph:
    return LabeledGraph([str(v) for v in h], [(str(a), str(b)) for a, b in h.edges()], name=name)


def random_cubic_planar(rng: random.Random, n: int) -> LabeledGraph:
    while True:
        h = nx.random_regular_graph(3, n, seed=rng.randrange(10**9))
        if nx.is_connected(h) and nx.check_planarity(h)[0]:
            return from_nx(h, "cubic%d" % n)


def random_planar_deg4(rng: random.Random, lo: int = 5, hi: int = 8) -> LabeledGraph:
    while True:
        n = rng.randrange(lo, hi + 1)
        h = nx.gnm_random_graph(n, rng.randrange(n, 2 * n), seed=rng.randrange(10**9))
        if max(dict(h.degree()).values()) <= 4 and nx.check_planarity(h)[0]:
            return from_nx(h, "planar%d" % n)


def random_subcubic_triangle_free(rng: random.Random, lo: int = 3, hi: int = 7) -> LabeledGraph:
    from gridpaths.graph_core import is_triangle_free
    while True:
        n = rng.randrange(lo, hi + 1)
        h = nx.gnm_random_graph(n, rng.randrange(n - 1, n + 3), seed=rng.randrange(10**9))
        g = from_nx(h)
        if g.num_edges() and max_degree(g) <= 3 and is_triangle_free(g):
            return g


def random_formula(rng: random.Random, n: int) -> Formula:
    """Exactly-3-bounded formula on n variables, clauses of size 2 or 3."""
    vs = ["v%d" % k for k in range(1, n + 1)]
    while True:
        slots = []
        for v in vs:
            npos = rng.choice((1, 2))
            slots += [(v, True)] * npos + [(v, False)] * (3 - npos)
        rng.shuffle(slots)
        clauses, i, ok = [], 0, True
        while i < len(slots):
            c = slots[i:i + rng.choice((2, 3))]
            i += len(c)
            if len({v for v, _ in c}) != len(c):
                ok = False
                break
            clauses.append(c)
        if ok:
            f = Formula(vs, clauses)
            if validate_exactly3bounded(f).ok:
                return f


def traced_instance(c: LabeledGraph, max_bends: int, sides=range(4, 16)):
    """A max_bends-bend CPG representation of the 2-subdivision of c, traced
    along an orthogonal embedding of c; None if no tried embedding allows it."""
    for side in sides:
        try:
            emb = embed_orthogonal(c, side, time_budget=1)
            return subdivision_rep(c, emb, max_bends)
        except (EmbeddingFailure, EmbeddingInvalid):
            continue
    return None


def cubic_instances(count: int, max_bends: int, seed: int = 1, sizes=(6, 8, 10)):
    """K4 followed by random cubic planar graphs whose 2-subdivision traces
    with at most max_bends bends."""
    rng = random.Random(seed)
    out = [(complete_graph(4), traced_instance(complete_graph(4), max_bends))]
    tries = 0
    while len(out) < count + 1 and tries < 60:
        tries += 1
        c = random_cubic_planar(rng, sizes[tries % len(sizes)])
        rep = traced_instance(c, max_bends)
        if rep is not None:
            out.append((c, rep))
    return out


def random_one_bend_family(rng: random.Random, box: int = 6) -> dict:
    """3-6 random paths with at most one bend; with some probability one more
    path hooks an L-shaped path at both of its ends (touches it twice)."""
    from gridpaths.grid_geom import GridPath
    ps = {}
    for i in range(rng.randint(3, 6)):
        x, y = rng.randint(0, box), rng.randint(0, box)
        horiz = rng.random() < 0.5
        a = rng.choice((-1, 1)) * rng.randint(1, 4)
        pts = [(x, y), (x + a, y) if horiz else (x, y + a)]
        if rng.random() < 0.6:
            b = rng.choice((-1, 1)) * rng.randint(1, 4)
            px, py = pts[1]
            pts.append((px, py + b) if horiz else (px + b, py))
        ps["p%d" % i] = pts
    bent = [k for k, p in ps.items() if len(p) == 3]
    if bent and rng.random() < 0.5:
        s, c, t = (GridPath(ps[rng.choice(bent)]).seq)
        # a hook from an interior point of segment s-c to one of segment c-t
        ds = (s.x - c.x, s.y - c.y)
        dt = (t.x - c.x, t.y - c.y)
        i, j = abs(ds[0] + ds[1]), abs(dt[0] + dt[1])
        if i >= 2 and j >= 2:
            ui, uj = rng.randint(1, i - 1), rng.randint(1, j - 1)
            sx, sy = (ds[0] > 0) - (ds[0] < 0), (ds[1] > 0) - (ds[1] < 0)
            tx, ty = (dt[0] > 0) - (dt[0] < 0), (dt[1] > 0) - (dt[1] < 0)
            p = (c.x + sx * ui, c.y + sy * ui)
            q = (c.x + tx * uj, c.y + ty * uj)
            ps["hook"] = [p, (p[0] + tx * uj, p[1] + ty * uj), q]
    return ps
