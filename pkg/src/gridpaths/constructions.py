"""Named graphs with concrete representations: the separator family G_k,
G(v), and the three end-eating graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph_core import LabeledGraph
from .grid_geom import GridPath, GridPoint
from .representation import Representation, derive_graph, point_incidence


@dataclass(frozen=True)
class Anchor:
    """Where an outside path may end on the gadget.

    ``port`` is a point of the anchor path that no other path of the gadget
    contains; the open ray from ``port`` in ``direction`` meets no path of the
    gadget.  ``bbox`` is the gadget's bounding box.
    """

    label: str
    port: GridPoint
    direction: tuple[int, int]
    bbox: tuple[int, int, int, int]
    port_is_endpoint: bool = False


@dataclass
class GadgetBundle:
    graph: LabeledGraph
    rep: Representation
    anchors: list[Anchor] = field(default_factory=list)

    def check(self) -> None:
        d = derive_graph(self.rep)
        if d != self.graph:
            raise AssertionError("bundle %s: derived graph differs: %r" % (self.graph.name, d.diff(self.graph)))


# -- helpers --------------------------------------------------------------------

def _chain(labels: str, suffix: str = "") -> list[tuple[str, str]]:
    t = [x + suffix for x in labels.split()]
    return list(zip(t, t[1:]))


def _ray_clear(rep: Representation, label: str, port: GridPoint, d: tuple[int, int]) -> bool:
    x0, y0, x1, y1 = rep.bbox()
    far = GridPoint(port.x + d[0] * (x1 - x0 + 2), port.y + d[1] * (y1 - y0 + 2))
    start = GridPoint(port.x + d[0], port.y + d[1])
    ray = GridPath([start, far])
    from .grid_geom import path_intersection

    return not any(path_intersection(ray, p) for p in rep.paths.values())


def find_port(rep: Representation, label: str) -> Anchor | None:
    """First interior lattice point of P_label, free of other paths, with a
    clear perpendicular ray to the outside (scan order: segments, then
    points along each segment, then directions)."""
    busy = point_incidence(rep)
    p = rep.paths[label]
    for a, b in p.segments():
        horiz = a.y == b.y
        dirs = [(0, 1), (0, -1)] if horiz else [(-1, 0), (1, 0)]
        n = abs(b.x - a.x) + abs(b.y - a.y)
        sx, sy = (b.x > a.x) - (b.x < a.x), (b.y > a.y) - (b.y < a.y)
        for t in range(1, n):
            q = GridPoint(a.x + t * sx, a.y + t * sy)
            if q in busy or q in p.seq:
                continue
            for d in dirs:
                if _ray_clear(rep, label, q, d):
                    return Anchor(label, q, d, rep.bbox())
    return None


def _bundle(name: str, vertices, edges, paths: dict, anchor_label: str, scale: int = 1,
            endpoint_anchor: tuple | None = None) -> GadgetBundle:
    g = LabeledGraph(vertices, edges, name=name)
    level = {1: 0, 2: 1}[scale]
    rep = Representation({k: GridPath(v).scaled(scale) for k, v in paths.items()}, refinement_level=level)
    if endpoint_anchor is not None:
        q, d = endpoint_anchor
        anchor = Anchor(anchor_label, GridPoint(q[0] * scale, q[1] * scale), d, rep.bbox(), True)
    else:
        anchor = find_port(rep, anchor_label)
        if anchor is None:
            raise AssertionError("no outward port on %s in %s" % (anchor_label, name))
    b = GadgetBundle(g.with_tags({anchor_label: {"anchor"}}), rep, [anchor])
    b.check()
    return b


# -- G(v) -------------------------------------------------------------------------

GV_PATHS = {
    "v": [(0, 2), (3, 2)],
    "s": [(2, 2), (2, 0), (4, 0)],
    "t": [(2, 1), (3, 1), (3, 3)],
    "a": [(1, 2), (1, 1), (2, 1)],
    "b": [(4, 0), (4, 2), (3, 2)],
    "c": [(2, 2), (2, 3), (3, 3)],
}

GV_EDGES = [("v", "s"), ("s", "t"), ("t", "v")] + [(x, y) for x in "abc" for y in "vst"]


def build_gv() -> GadgetBundle:
    """G(v): triangle v,s,t with a,b,c each joined to all three; P_v keeps one
    free endpoint, which is the anchor."""
    return _bundle("G(v)", "vstabc", GV_EDGES, GV_PATHS, "v", endpoint_anchor=((0, 2), (-1, 0)))


# -- end-eating graphs --------------------------------------------------------------

E1_PATHS = {
    "v": [(-3, 2), (2, 2)],
    "s": [(1, 2), (1, 0), (3, 0)],
    "t": [(1, 1), (2, 1), (2, 3)],
    "a": [(0, 2), (0, 1), (1, 1)],
    "b": [(3, 0), (3, 2), (2, 2)],
    "c": [(1, 2), (1, 3), (2, 3)],
    "s'": [(-2, 2), (-2, 0), (-4, 0)],
    "t'": [(-2, 1), (-3, 1), (-3, 3)],
    "a'": [(-1, 2), (-1, 1), (-2, 1)],
    "b'": [(-4, 0), (-4, 2), (-3, 2)],
    "c'": [(-2, 2), (-2, 3), (-3, 3)],
}


def _e1_edges():
    out = []
    for sfx in ("", "'"):
        s, t = "s" + sfx, "t" + sfx
        out += [("v", s), (s, t), (t, "v")]
        out += [(x + sfx, y) for x in "abc" for y in ("v", s, t)]
    return out


E2_CHAIN = ("1 2 3 4 8 7 6 5 1 4 2 11 3 12 4 13 7 14 6 9 5 8 6 15 14 13 8 12 13 18 7 5 10 9 1 10 2 "
            "16 10 11 16 15 9 14 18 15 17 18 16 17 11 12 17 3 1")

E2_PATHS = {
    "1": [(1, 5), (0, 5), (0, 2), (2, 2)],
    "4": [(1, 5), (1, 6), (4, 6), (4, 4)],
    "2": [(1, 5), (1, 3), (2, 3)],
    "3": [(1, 5), (3, 5), (3, 4)],
    "5": [(5, 1), (5, 0), (2, 0), (2, 2)],
    "8": [(5, 1), (6, 1), (6, 4), (4, 4)],
    "6": [(5, 1), (3, 1), (3, 2)],
    "7": [(5, 1), (5, 3), (4, 3)],
    "14": [(3, 2), (4, 2), (4, 3)],
    "11": [(2, 3), (2, 4), (3, 4)],
    "15": [(3, 3), (3, 2)],
    "18": [(3, 3), (4, 3)],
    "17": [(3, 3), (3, 4)],
    "16": [(3, 3), (2, 3)],
    "9": [(2, 2), (3, 2)],
    "10": [(2, 2), (2, 3)],
    "13": [(4, 4), (4, 3)],
    "12": [(4, 4), (3, 4)],
}


def _e3_edges():
    out = []
    for sfx in ("", "'"):
        out += _chain("1 2 3 4 5 1 c 2 f 3 e 4 b 5 a 1", sfx)
        out += _chain("a c f e b a d b", sfx)
        out += _chain("c d e", sfx) + _chain("d f", sfx)
    out += [("1'", "2"), ("1'", "3"), ("1'", "4"), ("1'", "5"), ("2'", "5"),
            ("2'", "1"), ("3'", "1"), ("4'", "1"), ("5'", "1"), ("5'", "2")]
    return out


E3_PATHS = {
    "1'": [(7, 8), (7, 9), (10, 9), (10, 2), (5, 2)],
    "2'": [(7, 9), (7, 10), (4, 10), (4, 11), (10, 11)],
    "3'": [(4, 10), (2, 10), (2, 14), (11, 14), (11, 13)],
    "4'": [(10, 1), (10, 0), (0, 0), (0, 10), (2, 10)],
    "5'": [(10, 2), (10, 1), (1, 1), (1, 8), (2, 8)],
    "a'": [(10, 2), (11, 2), (11, 11), (13, 11)],
    "b'": [(10, 1), (13, 1), (13, 13), (12, 13)],
    "c'": [(10, 9), (10, 11), (11, 11)],
    "d'": [(11, 11), (11, 12), (12, 12), (12, 13)],
    "e'": [(11, 13), (12, 13), (12, 15), (1, 15), (1, 10)],
    "f'": [(10, 11), (10, 13), (11, 13), (11, 12)],
    "1": [(2, 10), (2, 8), (4, 8), (4, 10)],
    "2": [(2, 8), (2, 2), (5, 2), (5, 4)],
    "3": [(7, 7), (7, 8), (9, 8), (9, 3), (5, 3)],
    "4": [(5, 8), (7, 8)],
    "5": [(4, 8), (5, 8), (5, 9), (7, 9)],
    "a": [(4, 8), (4, 5), (5, 5), (5, 7)],
    "b": [(5, 8), (5, 7), (6, 7)],
    "c": [(3, 8), (3, 4), (5, 4), (5, 5)],
    "d": [(6, 7), (6, 6), (7, 6), (7, 5), (5, 5)],
    "e": [(6, 8), (6, 7), (7, 7)],
    "f": [(7, 6), (7, 7), (8, 7), (8, 4), (5, 4)],
}

# Every interior point of P_1 is enclosed by other paths, so the splice
# uses the outer path P_4' instead (any vertex of this graph eats an end).
E3_ANCHOR = "4'"

_END_EATER_CACHE: dict[int, GadgetBundle] = {}


def build_end_eater(i: int) -> GadgetBundle:
    """E_1, E_2 or E_3 with a representation using at most i bends per path.

    Coordinates are doubled so that the anchor port can sit between two
    original lattice points.
    """
    if i not in (1, 2, 3):
        raise ValueError("end-eater index must be 1, 2 or 3")
    if i not in _END_EATER_CACHE:
        if i == 1:
            verts = ["v"] + [x + s for s in ("", "'") for x in "stabc"]
            b = _bundle("E1", verts, _e1_edges(), E1_PATHS, "v", scale=2)
        elif i == 2:
            chain = E2_CHAIN.split()
            b = _bundle("E2", set(chain), list(zip(chain, chain[1:])), E2_PATHS, "1", scale=2)
        else:
            verts = [x + s for s in ("", "'") for x in "12345abcdef"]
            b = _bundle("E3", verts, _e3_edges(), E3_PATHS, E3_ANCHOR, scale=2)
        _END_EATER_CACHE[i] = b
    b = _END_EATER_CACHE[i]
    return GadgetBundle(b.graph, b.rep, list(b.anchors))


# -- the separator family G_k -----------------------------------------------------

def alpha(i: int) -> str:
    return "alpha%d" % i


def sewing(i: int, j: int) -> str:
    return "u%d^%d" % (j, i)


def separator_graph(k: int) -> LabeledGraph:
    if k < 0:
        raise ValueError("k must be non-negative")
    vs = ["a", "b"] + [alpha(i) for i in range(1, 21)]
    es = [("a", "b")]
    for i in range(1, 21):
        es += [("a", alpha(i)), ("b", alpha(i))]
    for i in range(1, 20):
        chain = [sewing(i, j) for j in range(1, k + 3)]
        vs += chain
        for u in chain:
            es += [(alpha(i), u), (alpha(i + 1), u)]
        es += list(zip(chain, chain[1:]))
    tags = {alpha(i): {"secondary"} for i in range(1, 21)}
    for i in range(1, 20):
        for j in range(1, k + 3):
            tags[sewing(i, j)] = {"sewing:%d" % i}
    return LabeledGraph(vs, es, name="G%d" % k, tags=tags)


def build_separator(k: int) -> GadgetBundle:
    """G_k with a (k+1)-bend representation.

    Secondary path i (0-based) rises from P_a at column i, then climbs a
    staircase of k+1 bends; consecutive staircases are diagonal neighbours, so
    the k+2 sewing paths between them are unit segments zig-zagging across
    the gap, each sharing an endpoint with the next at a staircase bend.
    """
    g = separator_graph(k)
    h = 22
    width = 19 + k + 4
    top = h + k + 4
    paths: dict[str, list] = {}

    def bend(i: int, m: int) -> tuple[int, int]:
        # m-th bend of staircase i
        q, r = divmod(m, 2)
        return (i + q + r, h - i + q)

    for i in range(20):
        seq = [(i, 0)] + [bend(i, m) for m in range(k + 1)]
        lx, ly = seq[-1]
        seq.append((width, ly) if k % 2 == 0 else (lx, top))
        paths[alpha(i + 1)] = seq
    paths["a"] = [(-1, 0), (width, 0)]
    paths["b"] = [(width, 0), (width, top)] if k % 2 == 0 else [(width, 0), (width, top), (-1, top)]

    for i in range(19):
        z = [(i, h - i - 1)]
        for j in range(1, k + 3):
            z.append(bend(i + 1, j - 1) if j % 2 else bend(i, j - 1))
        for j in range(1, k + 3):
            paths[sewing(i + 1, j)] = [z[j - 1], z[j]]

    rep = Representation(paths)
    b = GadgetBundle(g, rep, [])
    return b
