"""Orthogonal grid embeddings of planar graphs with maximum degree 4.

An embedding puts every vertex on a lattice point and every edge on a
rectilinear lattice path with at most four bends; edge paths meet only at
shared end-vertices.  ``embed_orthogonal`` is a small deterministic router
meant for graphs of a few dozen vertices; larger drawings can be loaded from
file.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Mapping

from .graph_core import LabeledGraph, edge_key, max_degree
from .grid_geom import OVERLAP, GridPath, GridPoint, path_intersection

MAX_EDGE_BENDS = 4
DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


class DegreeTooHigh(ValueError):
    pass


class EmbeddingFailure(RuntimeError):
    pass


class EmbeddingBudgetExhausted(EmbeddingFailure):
    pass


class EmbeddingSearchExhausted(EmbeddingFailure):
    """No embedding exists inside the given box (says nothing about larger boxes)."""


@dataclass
class OrthogonalEmbedding:
    vertex_points: dict[str, GridPoint]
    edge_paths: dict[tuple[str, str], GridPath]

    def path(self, u: str, v: str) -> GridPath:
        """Edge path oriented from u to v."""
        p = self.edge_paths[edge_key(u, v)]
        return p if p.seq[0] == self.vertex_points[u] else p.reversed()

    def scaled(self, f: int) -> "OrthogonalEmbedding":
        return OrthogonalEmbedding(
            {k: GridPoint(p.x * f, p.y * f) for k, p in self.vertex_points.items()},
            {k: p.scaled(f) for k, p in self.edge_paths.items()},
        )

    def translated(self, dx: int, dy: int) -> "OrthogonalEmbedding":
        return OrthogonalEmbedding(
            {k: GridPoint(p.x + dx, p.y + dy) for k, p in self.vertex_points.items()},
            {k: p.translated(dx, dy) for k, p in self.edge_paths.items()},
        )

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.vertex_points.values()]
        ys = [p.y for p in self.vertex_points.values()]
        for p in self.edge_paths.values():
            b = p.bbox()
            xs += [b[0], b[2]]
            ys += [b[1], b[3]]
        return min(xs), min(ys), max(xs), max(ys)

    def to_dict(self) -> dict:
        return {
            "vertices": {k: [p.x, p.y] for k, p in sorted(self.vertex_points.items())},
            "edges": {"%s|%s" % k: [[q.x, q.y] for q in p.seq] for k, p in sorted(self.edge_paths.items())},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "OrthogonalEmbedding":
        verts = {k: GridPoint(int(v[0]), int(v[1])) for k, v in d["vertices"].items()}
        edges = {}
        for key, seq in d["edges"].items():
            edges[_split_edge_key(key, verts)] = GridPath([tuple(q) for q in seq])
        return cls(verts, edges)


def _split_edge_key(key: str, verts: Mapping) -> tuple[str, str]:
    # labels may themselves contain '|', so try every split point
    hits = []
    for i, ch in enumerate(key):
        if ch == "|" and key[:i] in verts and key[i + 1:] in verts:
            hits.append(edge_key(key[:i], key[i + 1:]))
    if len(hits) != 1:
        raise ValueError("cannot split edge key %r into two vertex labels" % key)
    return hits[0]


@dataclass
class EmbeddingReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate_embedding(g: LabeledGraph, emb: OrthogonalEmbedding) -> EmbeddingReport:
    rep = EmbeddingReport()
    pts = emb.vertex_points
    for v in g.vertices:
        if v not in pts:
            rep.problems.append("vertex %s has no point" % v)
    owner: dict[GridPoint, str] = {}
    for v, p in sorted(pts.items()):
        if p in owner:
            rep.problems.append("vertices %s and %s share point %r" % (owner[p], v, tuple(p)))
        owner[p] = v
    want = set(g.edges)
    have = set(emb.edge_paths)
    for e in sorted(want - have):
        rep.problems.append("edge %s-%s has no path" % e)
    for e in sorted(have - want):
        rep.problems.append("path for %s-%s which is not an edge" % e)
    for (u, v), p in sorted(emb.edge_paths.items()):
        if u not in pts or v not in pts:
            continue
        if set(p.endpoints) != {pts[u], pts[v]}:
            rep.problems.append("edge %s-%s does not join its end-vertices" % (u, v))
        if p.bends() > MAX_EDGE_BENDS:
            rep.problems.append("edge %s-%s has %d bends" % (u, v, p.bends()))
        for q, w in owner.items():
            if w not in (u, v) and p.contains(q):
                rep.problems.append("edge %s-%s passes through vertex %s" % (u, v, w))
    items = sorted(emb.edge_paths.items())
    from .representation import candidate_pairs

    paths = {"%d" % i: p for i, (_, p) in enumerate(items)}
    for a, b in candidate_pairs(paths):
        (e, p), (f, q) = items[int(a)], items[int(b)]
        r = path_intersection(p, q)
        if not r:
            continue
        shared = {pts.get(x) for x in set(e) & set(f)}
        if r is OVERLAP or not set(r) <= shared:
            rep.problems.append("edges %s-%s and %s-%s meet away from a shared vertex" % (e + f))
    return rep


# -- routing ----------------------------------------------------------------------

def _route(a: GridPoint, b: GridPoint, blocked: set, side: int,
           penalty: Mapping | None = None, max_bends: int = MAX_EDGE_BENDS):
    """Fewest-bend, then cheapest, lattice route from a to b avoiding
    ``blocked`` (b itself may be blocked).  ``penalty`` adds per-point cost.
    Returns the point sequence or None."""
    penalty = penalty or {}
    best: set = set()
    parent = {}
    heap = [(0, 0, a.x, a.y, d, None) for d in range(4)]
    heapq.heapify(heap)
    while heap:
        bends, cost, x, y, d, prev = heapq.heappop(heap)
        key = (x, y, d)
        if key in best:
            continue
        best.add(key)
        parent[key] = prev
        if (x, y) == (b.x, b.y) and prev is not None:
            out = [(x, y)]
            k = key
            while parent[k] is not None:
                k = parent[k]
                out.append(k[:2])
            out.reverse()
            return _compress(out)
        for nd in range(4):
            if prev is None and nd != d:
                continue
            if prev is not None and nd == (d + 2) % 4:
                continue
            dx, dy = DIRS[nd]
            q = GridPoint(x + dx, y + dy)
            if not (0 <= q.x < side and 0 <= q.y < side):
                continue
            if q != b and q in blocked:
                continue
            nb = bends + (1 if prev is not None and nd != d else 0)
            if nb > max_bends or (q.x, q.y, nd) in best:
                continue
            heapq.heappush(heap, (nb, cost + 1 + penalty.get(q, 0), q.x, q.y, nd, key))
    return None


def _compress(pts: list) -> list:
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        a, b, c = out[-1], pts[i], pts[i + 1]
        if (a[0] == b[0] == c[0]) or (a[1] == b[1] == c[1]):
            continue
        out.append(b)
    out.append(pts[-1])
    return out


def _all_routes(a: GridPoint, b: GridPoint, blocked: set, side: int, tick=lambda: None):
    """Yield every simple route from a to b with at most four bends inside the
    box (depth-first, straight moves tried first)."""

    def reachable(x, y, d, left):
        dx, dy = DIRS[d]
        ahead = (b.x - x) * dx + (b.y - y) * dy
        if left == 0:
            return ahead > 0 and (b.x - x) * dy == (b.y - y) * dx
        return left > 1 or ahead >= 0

    def dfs(x, y, d, bends, seen, trail):
        tick()
        dirs = range(4) if d is None else (d, (d + 1) % 4, (d + 3) % 4)
        for nd in dirs:
            nb = bends + (1 if d is not None and nd != d else 0)
            if nb > MAX_EDGE_BENDS or not reachable(x, y, nd, MAX_EDGE_BENDS - nb):
                continue
            dx, dy = DIRS[nd]
            q = (x + dx, y + dy)
            if not (0 <= q[0] < side and 0 <= q[1] < side) or q in seen:
                continue
            if q == (b.x, b.y):
                yield _compress(trail + [q])
                continue
            if GridPoint(*q) in blocked:
                continue
            seen.add(q)
            yield from dfs(q[0], q[1], nd, nb, seen, trail + [q])
            seen.discard(q)

    yield from dfs(a.x, a.y, None, 0, {(a.x, a.y)}, [(a.x, a.y)])


def _bfs_order(g: LabeledGraph) -> list[str]:
    adj = g.adjacency()
    order: list[str] = []
    for s in sorted(g.vertices, key=lambda v: (-len(adj[v]), v)):
        if s in order:
            continue
        order.append(s)
        queue = [s]
        while queue:
            x = queue.pop(0)
            for y in sorted(adj[x], key=lambda v: (-len(adj[v]), v)):
                if y not in order:
                    order.append(y)
                    queue.append(y)
    return order


def _free_ports(p: GridPoint, used: set, side: int) -> int:
    n = 0
    for dx, dy in DIRS:
        q = GridPoint(p.x + dx, p.y + dy)
        if 0 <= q.x < side and 0 <= q.y < side and q not in used:
            n += 1
    return n


def _port_guard(pts, pending, used, side, ends):
    """Block the last free ports of vertices that still need them; make the
    other ports of unfinished vertices expensive."""
    blocked = set(used)
    penalty = {}
    for w, p in pts.items():
        if w in ends or pending[w] == 0:
            continue
        free = []
        for dx, dy in DIRS:
            q = GridPoint(p.x + dx, p.y + dy)
            if 0 <= q.x < side and 0 <= q.y < side and q not in used:
                free.append(q)
        if len(free) <= pending[w]:
            blocked.update(free)
        else:
            for q in free:
                penalty[q] = penalty.get(q, 0) + 6
    return blocked, penalty


def _seed_layouts(g: LabeledGraph):
    """Planar straight-line layouts, one per deterministic vertex shuffle,
    reduced to (x-rank, y-rank) pairs."""
    import random

    import networkx as nx

    verts = g.vertices
    for r in range(64):
        order = list(verts)
        if r:
            random.Random(r).shuffle(order)
        G = nx.Graph()
        G.add_nodes_from(order)
        G.add_edges_from(sorted(g.edges, key=lambda e: (order.index(e[0]), order.index(e[1]))))
        try:
            pos = nx.planar_layout(G)
        except nx.NetworkXException:
            return
        xs = sorted({round(float(p[0]), 9) for p in pos.values()})
        ys = sorted({round(float(p[1]), 9) for p in pos.values()})
        yield {v: (xs.index(round(float(pos[v][0]), 9)), ys.index(round(float(pos[v][1]), 9))) for v in verts}


def _heuristic(g: LabeledGraph, side: int, deadline: float):
    """Planar-layout seeding plus greedy fewest-bend routing with reordering."""
    if len(g) == 0:
        return None
    edges = g.edges
    for ranks in _seed_layouts(g):
        top = max(max(r) for r in ranks.values())
        for spacing in (3, 4, 2, 1):
            if spacing * top + 2 >= side:
                continue
            pts = {v: GridPoint(1 + spacing * rx, 1 + spacing * ry) for v, (rx, ry) in ranks.items()}
            emb = _route_all(g, pts, edges, side, deadline)
            if emb is not None:
                return emb
            if time.monotonic() > deadline:
                return None
    return None


def _route_all(g, pts, edges, side, deadline):
    order = sorted(edges, key=lambda e: (abs(pts[e[0]].x - pts[e[1]].x) + abs(pts[e[0]].y - pts[e[1]].y), e))
    for _ in range(2 * len(order) + 1):
        if time.monotonic() > deadline:
            return None
        used = set(pts.values())
        routed = {}
        failed = None
        pending = {v: g.degree(v) for v in g.vertices}
        for u, v in order:
            blocked, penalty = _port_guard(pts, pending, used, side, (u, v))
            seq = _route(pts[u], pts[v], blocked, side, penalty)
            if seq is None:
                failed = (u, v)
                break
            path = GridPath(seq)
            routed[(u, v)] = path
            used.update(path.lattice_points())
            pending[u] -= 1
            pending[v] -= 1
        if failed is None:
            emb = OrthogonalEmbedding(dict(pts), routed)
            return emb if validate_embedding(g, emb).ok else None
        order.remove(failed)
        order.insert(0, failed)
    return None


def _complete_search(g: LabeledGraph, side: int, deadline: float, node_limit: int):
    adj = g.adjacency()
    order = _bfs_order(g)
    points = [GridPoint(x, y) for y in range(side) for x in range(side)]
    pts: dict[str, GridPoint] = {}
    routed: dict[tuple[str, str], GridPath] = {}
    used: set = set()
    counter = [0]

    def tick():
        counter[0] += 1
        if counter[0] > node_limit or (counter[0] & 255 == 0 and time.monotonic() > deadline):
            raise EmbeddingBudgetExhausted("embedding search budget exhausted")

    def ports_ok() -> bool:
        for v, p in pts.items():
            pending = sum(1 for u in adj[v] if u not in pts)
            if _free_ports(p, used, side) < pending:
                return False
        return True

    def route_edges(todo, i):
        if not todo:
            return place(i + 1)
        (u, v), rest = todo[0], todo[1:]
        for seq in _all_routes(pts[u], pts[v], used, side, tick):
            tick()
            path = GridPath(seq)
            inner = [GridPoint(*q) for q in path.lattice_points()][1:-1]
            used.update(inner)
            routed[edge_key(u, v)] = path if edge_key(u, v)[0] == u else path.reversed()
            if ports_ok() and route_edges(rest, i):
                return True
            del routed[edge_key(u, v)]
            used.difference_update(inner)
        return False

    def place(i) -> bool:
        if i == len(order):
            return True
        v = order[i]
        cands = points
        if i == 0:
            # symmetry: first vertex in the lower-left octant of the box
            h = (side - 1) / 2
            cands = [p for p in points if p.x <= h and p.y <= p.x]
        for p in cands:
            tick()
            if p in used:
                continue
            if _free_ports(p, used, side) < len(adj[v]):
                continue
            pts[v] = p
            used.add(p)
            todo = [(u, v) for u in sorted(adj[v]) if u in pts and u != v]
            if ports_ok() and route_edges(todo, i):
                return True
            used.discard(p)
            del pts[v]
        return False

    if place(0):
        return OrthogonalEmbedding(dict(pts), dict(routed))
    return None


def embed_orthogonal(g: LabeledGraph, grid_side: int, time_budget: float = 10.0,
                     node_limit: int = 2_000_000) -> OrthogonalEmbedding:
    """Embed g inside the grid_side x grid_side box of lattice points
    [0, grid_side)^2.  Raises DegreeTooHigh, EmbeddingBudgetExhausted, or
    EmbeddingSearchExhausted (no embedding in this box)."""
    if max_degree(g) > 4:
        raise DegreeTooHigh("maximum degree %d exceeds 4" % max_degree(g))
    if grid_side <= 0:
        raise ValueError("grid_side must be positive")
    deadline = time.monotonic() + time_budget
    emb = _heuristic(g, grid_side, deadline)
    if emb is None:
        emb = _complete_search(g, grid_side, deadline, node_limit)
        if emb is None:
            raise EmbeddingSearchExhausted("no orthogonal embedding inside a %dx%d box" % (grid_side, grid_side))
    fixed = {}
    for (u, v), p in emb.edge_paths.items():
        fixed[(u, v)] = p if p.seq[0] == emb.vertex_points[u] else p.reversed()
    emb = OrthogonalEmbedding(emb.vertex_points, fixed)
    rpt = validate_embedding(g, emb)
    if not rpt.ok:
        raise AssertionError("embedder produced an invalid embedding: %s" % rpt.problems[:3])
    return emb


def embed_auto(g: LabeledGraph, max_side: int | None = None, time_budget: float = 3.0) -> OrthogonalEmbedding:
    """Smallest box side (tried upward) in which embed_orthogonal succeeds."""
    n = max(len(g), 1)
    top = max_side if max_side is not None else 2 * n + 4
    for side in range(2, top + 1):
        if side * side < n:
            continue
        try:
            return embed_orthogonal(g, side, time_budget=time_budget)
        except EmbeddingFailure:
            continue
    raise EmbeddingSearchExhausted("no embedding found with box side up to %d" % top)
