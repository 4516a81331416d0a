"""Reductions for Independent Set, Clique Cover and 3-Colorability, each
producing a graph together with a grid representation of it."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .embedding import OrthogonalEmbedding, validate_embedding
from .graph_core import (
    LabeledGraph,
    diamond_chain_substitute,
    diamond_labels,
    edge_label,
    is_triangle_free,
    k_subdivide,
    line_graph,
    max_degree,
    subdivision_label,
)
from .grid_geom import GridPath, GridPoint, path_intersection
from .representation import (
    PreconditionViolated,
    Representation,
    Semantics,
    derive_graph,
    normalize_b01,
    point_incidence,
    refine,
    require_valid,
    validate,
)


class EmbeddingInvalid(ValueError):
    pass


@dataclass
class ReductionOutput:
    out_graph: LabeledGraph
    out_rep: Representation
    vertex_map: dict[str, tuple[str, str]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rep": self.out_rep.to_dict(),
            "vertex_map": {k: list(v) for k, v in sorted(self.vertex_map.items())},
        }


def _unit(a: GridPoint, b: GridPoint) -> tuple[int, int]:
    return ((b.x > a.x) - (b.x < a.x), (b.y > a.y) - (b.y < a.y))


def _step(p: GridPoint, d: tuple[int, int], n: int = 1) -> GridPoint:
    return GridPoint(p.x + n * d[0], p.y + n * d[1])


def _seg_len(a: GridPoint, b: GridPoint) -> int:
    return abs(b.x - a.x) + abs(b.y - a.y)


def _check_rep_of(g: LabeledGraph, rep: Representation, semantics: Semantics, bends: int) -> None:
    if rep.semantics is not semantics:
        raise PreconditionViolated("%s representation required" % semantics.value.upper())
    if rep.max_bends() > bends:
        raise PreconditionViolated("a path has more than %d bend(s)" % bends)
    if not validate(rep).ok:
        raise PreconditionViolated("representation is not valid")
    derived = derive_graph(rep)
    if derived != g:
        raise PreconditionViolated("representation does not derive the graph: %r" % derived.diff(g))


def _contact(rep: Representation, u: str, v: str) -> GridPoint:
    common = path_intersection(rep.paths[u], rep.paths[v])
    if len(common) != 1:
        raise PreconditionViolated("paths %s and %s touch %d times" % (u, v, len(common)))
    return next(iter(common))


# -- inputs drawn from orthogonal embeddings --------------------------------

def _vertex_axes(g: LabeledGraph, emb: OrthogonalEmbedding) -> dict[str, tuple[int, int]]:
    axes = {}
    for u in g.vertices:
        ports = {emb.path(u, v).seq[1] for v in g.neighbors(u)}
        dirs = {_unit(emb.vertex_points[u], q) for q in ports}
        if (1, 0) in dirs and (-1, 0) in dirs:
            axes[u] = (1, 0)
        elif (0, 1) in dirs and (0, -1) in dirs:
            axes[u] = (0, 1)
        elif dirs:
            axes[u] = min(dirs, key=lambda d: (d[0] == 0, d))
            axes[u] = (abs(axes[u][0]), abs(axes[u][1]))
        else:
            axes[u] = (1, 0)
    return axes


def subdivision_rep(g: LabeledGraph, emb: OrthogonalEmbedding, max_bends: int = 1) -> Representation:
    """CPG representation of the 2-subdivision of g traced along an
    orthogonal embedding of g.

    Each vertex becomes a short straight path through its point, oriented
    along an opposite pair of used ports.  An edge route is cut into the two
    subdivision paths; when the route has too many bends its first or last
    segment is absorbed into the vertex path it leaves along the axis.
    Raises EmbeddingInvalid when the embedding is too bent for max_bends.
    """
    if max_degree(g) > 3:
        raise PreconditionViolated("graph is not subcubic")
    if not validate_embedding(g, emb).ok:
        raise EmbeddingInvalid("embedding is not valid for the graph")
    f = 4
    pts = {u: GridPoint(p.x * f, p.y * f) for u, p in emb.vertex_points.items()}
    axes = _vertex_axes(g, emb)
    reach = {u: {1: 1, -1: 1} for u in g.vertices}
    routes = {}
    for (u, v), p in emb.edge_paths.items():
        seq = list(p.scaled(f).seq)
        if seq[0] != pts[u]:
            seq.reverse()
        routes[(u, v)] = seq
    budget = 2 * max_bends + 2
    trims = {}
    for (u, v), seq in sorted(routes.items()):
        m = len(seq) - 1
        cut_u = cut_v = False
        for end, w in ((0, u), (1, v)):
            if m <= budget:
                break
            a, b = (seq[0], seq[1]) if end == 0 else (seq[-1], seq[-2])
            d = _unit(a, b)
            if (abs(d[0]), abs(d[1])) == axes[w]:
                sign = d[0] + d[1]
                reach[w][sign] = _seg_len(a, b)
                if end == 0:
                    cut_u = True
                else:
                    cut_v = True
                m -= 1
        if m > budget:
            raise EmbeddingInvalid("edge %s-%s has too many bends for %d-bend pieces" % (u, v, max_bends))
        trims[(u, v)] = (cut_u, cut_v)
    paths: dict[str, GridPath] = {}
    for u in g.vertices:
        ax = axes[u]
        lo = _step(pts[u], ax, -reach[u][-1])
        hi = _step(pts[u], ax, reach[u][1])
        paths[u] = GridPath([lo, hi])
    for (u, v), seq in sorted(routes.items()):
        cut_u, cut_v = trims[(u, v)]
        body = list(seq)
        for end, w, cut in ((0, u, cut_u), (1, v, cut_v)):
            if cut:
                if end == 0:
                    body = body[1:]
                else:
                    body = body[:-1]
                continue
            a, b = (body[0], body[1]) if end == 0 else (body[-1], body[-2])
            d = _unit(a, b)
            if (abs(d[0]), abs(d[1])) == axes[w]:
                start = _step(a, d, 1)
                if end == 0:
                    body[0] = start
                else:
                    body[-1] = start
        segs = len(body) - 1
        if segs % 2 == 0:
            split = segs // 2
            first, second = body[:split + 1], body[split:]
        else:
            i = segs // 2
            a, b = body[i], body[i + 1]
            mid = _step(a, _unit(a, b), _seg_len(a, b) // 2)
            first, second = body[:i + 1] + [mid], [mid] + body[i + 1:]
        paths[subdivision_label(u, v, 1)] = GridPath(first)
        paths[subdivision_label(u, v, 2)] = GridPath(second)
    rep = Representation(paths, Semantics.CPG)
    require_valid(rep)
    want = k_subdivide(g, 2)
    if derive_graph(rep) != want:
        raise AssertionError("traced representation does not derive the 2-subdivision")
    return rep


# -- Independent Set --------------------------------------------------------

IS_ROLES = ("_1", "^1", "^2", "^3", "_2")


def is_label(u: str, role: str) -> str:
    return u + role


def _check_two_subdivision_of_cubic(g: LabeledGraph) -> None:
    if not is_triangle_free(g) or max_degree(g) > 3:
        raise PreconditionViolated("graph must be triangle-free and subcubic")
    for u in g.vertices:
        d = g.degree(u)
        if d == 3:
            if any(g.degree(w) != 2 for w in g.neighbors(u)):
                raise PreconditionViolated("cubic vertex %s has a non-subdivision neighbor" % u)
        elif d == 2:
            kinds = sorted(g.degree(w) for w in g.neighbors(u))
            if kinds != [2, 3]:
                raise PreconditionViolated("vertex %s is not inside a chain of two subdivision vertices" % u)
        else:
            raise PreconditionViolated("vertex %s has degree %d" % (u, d))


def _is_pieces(p: GridPath, taken: set) -> tuple[list, tuple]:
    """Five pieces u_1, u^1, u^2, u^3, u_2 of one path and the stub window."""
    if p.bends() == 0:
        a, b = sorted(p.endpoints)
        d = _unit(a, b)
        mid = _step(a, d, _seg_len(a, b) // 2)
        if mid in taken:
            mid = _step(mid, d)
        end = b
        base = [a, mid]
    else:
        s, c, t = p.seq
        h_end, v_end = (t, s) if s.x == c.x else (s, t)
        mid, end = c, v_end
        d = _unit(c, v_end)
        base = [h_end, c]
    window = tuple(_step(mid, d, j) for j in range(4))
    if _seg_len(mid, end) <= 3:
        raise AssertionError("segment too short for the stub window")
    pieces = [base] + [[window[j], window[j + 1]] for j in range(3)] + [[window[3], end]]
    return [GridPath(q) for q in pieces], window


def reduce_is(g: LabeledGraph, rep: Representation) -> ReductionOutput:
    """Replace every path by five bendless pieces; alpha grows by exactly 2|V|."""
    _check_two_subdivision_of_cubic(g)
    _check_rep_of(g, rep, Semantics.CPG, 1)
    ref = refine(normalize_b01(g, rep), 4)
    taken = set(point_incidence(ref))
    paths: dict[str, GridPath] = {}
    vmap: dict[str, tuple[str, str]] = {}
    edges = []
    for u, p in ref.paths.items():
        pieces, window = _is_pieces(p, taken)
        bad = [q for q in window if q in taken]
        if bad:
            raise AssertionError("stub window of %s meets a contact point at %r" % (u, bad[0]))
        labels = [is_label(u, r) for r in IS_ROLES]
        for lab, piece, role in zip(labels, pieces, IS_ROLES):
            paths[lab] = piece
            vmap[lab] = (u, role)
        edges += list(zip(labels, labels[1:]))
    for u, v in g.edges:
        q = _contact(ref, u, v)
        ends = []
        for w in (u, v):
            hit = [r for r in ("_1", "_2") if paths[is_label(w, r)].contains(q)]
            if len(hit) != 1:
                raise AssertionError("contact of %s-%s is not on exactly one end piece of %s" % (u, v, w))
            ends.append(is_label(w, hit[0]))
        edges.append(tuple(ends))
    out_rep = Representation(paths, Semantics.CPG, ref.refinement_level)
    out_graph = LabeledGraph(vmap, edges, name="%s-is" % g.name)
    _finish(out_graph, out_rep)
    return ReductionOutput(out_graph, out_rep, vmap)


def lift_is_solution(g: LabeledGraph, s: Iterable[str]) -> set[str]:
    """S independent in g  ->  independent set of size |S| + 2|V| in the output."""
    s = set(s)
    if not s <= set(g.vertices):
        raise ValueError("solution mentions unknown vertices")
    out = set()
    for u in g.vertices:
        roles = ("_1", "^2", "_2") if u in s else ("^1", "^3")
        out |= {is_label(u, r) for r in roles}
    return out


def project_is_solution(red: ReductionOutput, s_out: Iterable[str]) -> set[str]:
    """Independent set of the output  ->  independent set of g of size at
    least |S'| - 2|V|.  A vertex is kept when both end pieces are chosen."""
    s_out = set(s_out)
    chosen = defaultdict(set)
    for lab in s_out:
        u, role = red.vertex_map[lab]
        chosen[u].add(role)
    return {u for u, roles in chosen.items() if {"_1", "_2"} <= roles}


# -- Clique Cover -----------------------------------------------------------

def _cc_stage_one(g: LabeledGraph, rep: Representation) -> Representation:
    """0-bend representation of the 2-subdivision: two unit paths at every
    contact point, cut from the lexicographically smallest path ending there."""
    contacts = {}
    for u, v in g.edges:
        q = _contact(rep, u, v)
        owners = [w for w in (u, v) if q in rep.paths[w].endpoints]
        if not owners:
            raise PreconditionViolated("contact of %s and %s is interior to both" % (u, v))
        contacts[(u, v)] = (q, min(owners))
    loss = defaultdict(int)
    for q, w in contacts.values():
        loss[w] += 2
    times = 2
    while any(rep.paths[w].length() * 2 ** times <= loss[w] for w in loss):
        times += 1
    ref = refine(rep, times)
    f = 2 ** times
    paths = dict(ref.paths)
    for (u, v), (q0, w) in sorted(contacts.items()):
        q = GridPoint(q0.x * f, q0.y * f)
        p = paths[w]
        if p.seq[-1] == q:
            far = p.seq[0]
        else:
            far = p.seq[-1]
        d = _unit(far, q)
        near = _step(q, d, -2)
        paths[w] = GridPath([far, near] if p.seq[-1] == q else [near, far])
        p1 = GridPath([_step(q, d, -1), q])
        p2 = GridPath([near, _step(q, d, -1)])
        if w == u:
            paths[subdivision_label(u, v, 1)], paths[subdivision_label(u, v, 2)] = p2, p1
        else:
            paths[subdivision_label(u, v, 1)], paths[subdivision_label(u, v, 2)] = p1, p2
    out = Representation(paths, Semantics.CPG, ref.refinement_level)
    require_valid(out)
    if derive_graph(out) != k_subdivide(g, 2):
        raise AssertionError("stage one does not represent the 2-subdivision")
    return out


def _chains(h: LabeledGraph, cubic: set) -> list[tuple[list[str], bool]]:
    """Maximal runs of non-cubic vertices, each with a cycle flag."""
    seen = set()
    out = []
    rest = [u for u in h.vertices if u not in cubic]
    inner = {u: [w for w in h.neighbors(u) if w not in cubic] for u in rest}
    for u in rest:
        if u in seen or len(inner[u]) == 2:
            continue
        chain = [u]
        seen.add(u)
        while True:
            nxt = [w for w in inner[chain[-1]] if w not in seen]
            if not nxt:
                break
            chain.append(nxt[0])
            seen.add(nxt[0])
        out.append((chain, False))
    for u in rest:
        if u in seen:
            continue
        chain = [u]
        seen.add(u)
        while True:
            nxt = sorted(w for w in inner[chain[-1]] if w not in seen)
            if not nxt:
                break
            chain.append(nxt[0])
            seen.add(nxt[0])
        out.append((chain, True))
    return out


def reduce_cc(g: LabeledGraph, rep: Representation) -> ReductionOutput:
    """0-bend representation of the line graph of the 2-subdivision of g."""
    if not is_triangle_free(g) or max_degree(g) > 3:
        raise PreconditionViolated("graph must be triangle-free and subcubic")
    _check_rep_of(g, rep, Semantics.CPG, 0)
    norm = normalize_b01(g, rep)
    h = k_subdivide(g, 2)
    r1 = refine(_cc_stage_one(g, norm), 1)
    cubic = {u for u in g.vertices if g.degree(u) == 3}
    paths: dict[str, GridPath] = {}
    vmap: dict[str, tuple[str, str]] = {}
    short = dict(r1.paths)

    def put(lab: str, p: GridPath, a: str, b: str) -> None:
        paths[lab] = p
        vmap[lab] = (a, b)

    # triangle implants
    for u in sorted(cubic):
        p = r1.paths[u]
        s, t = p.endpoints
        by_point = {}
        for w in h.neighbors(u):
            by_point[_contact(r1, u, w)] = w
        if s not in by_point or t not in by_point or len(by_point) != 3:
            raise PreconditionViolated("cubic path %s is not in normal form" % u)
        (q, y), = [(q, w) for q, w in by_point.items() if q not in (s, t)]
        py = short[y]
        if q not in py.endpoints:
            raise PreconditionViolated("path %s does not end on %s" % (y, u))
        far = py.seq[-1] if py.seq[0] == q else py.seq[0]
        d = _unit(q, far)
        short[y] = GridPath([_step(q, d), far])
        put(edge_label(u, by_point[s]), GridPath([s, q]), u, by_point[s])
        put(edge_label(u, by_point[t]), GridPath([q, t]), u, by_point[t])
        put(edge_label(u, y), GridPath([q, _step(q, d)]), u, y)
    # snakes
    for chain, cyclic in _chains(h, cubic):
        segs = [short[x] for x in chain]
        if cyclic:
            for x, y, p in zip(chain, chain[1:] + chain[:1], segs):
                put(edge_label(x, y), p, x, y)
            continue
        if len(chain) == 1 and not any(w in cubic for w in h.neighbors(chain[0])):
            continue
        pairs = []
        for i in range(len(chain) - 1):
            a, b = segs[i], segs[i + 1]
            if _unit(*a.endpoints) in (_unit(*b.endpoints), _unit(*b.reversed().endpoints)):
                if set(a.endpoints) & set(b.endpoints):
                    pairs.append((tuple(sorted((chain[i], chain[i + 1]))), i))
        if not pairs:
            raise PreconditionViolated("snake starting at %s has no collinear adjacent pair" % chain[0])
        i = min(pairs)[1]
        a, b = segs[i], segs[i + 1]
        shared = (set(a.endpoints) & set(b.endpoints)).pop()
        ends = [q for q in a.endpoints + b.endpoints if q != shared]
        merged = segs[:i] + [GridPath(sorted(ends))] + segs[i + 2:]
        for k, p in enumerate(merged):
            put(edge_label(chain[k], chain[k + 1]), p, chain[k], chain[k + 1])
    out_rep = Representation(paths, Semantics.CPG, r1.refinement_level)
    out_graph = line_graph(h)
    _finish(out_graph, out_rep)
    return ReductionOutput(out_graph, out_rep, vmap)


# -- 3-Colorability ---------------------------------------------------------

def _departure(c: GridPoint, d: tuple[int, int], s: int) -> tuple[GridPath, GridPoint]:
    """Path of the middle pair of the first diamond, and where its far vertex starts."""
    if d[1] != 0:
        return GridPath([_step(c, d, s), _step(c, d, 3 * s)]), _step(c, d, 2 * s)
    stub = _step(c, (0, 1), s) if d == (-1, 0) else _step(c, (0, -1), s)
    return GridPath([stub, c, _step(c, d, 2 * s)]), _step(c, d, s)


def _arrival(c: GridPoint, d: tuple[int, int], s: int) -> tuple[list[GridPoint], GridPoint]:
    """Tail of the last far vertex entering c while moving along d, and the
    point where the last middle pair stops."""
    if d[1] != 0:
        return [_step(c, d, -3 * s), _step(c, d, -s)], _step(c, d, -2 * s)
    up = (0, 1) if d == (1, 0) else (0, -1)
    return [_step(c, d, -2 * s), c, _step(c, up, s)], _step(c, d, -s)


def _polyline(pts: list[GridPoint]) -> GridPath:
    out = [pts[0]]
    for q in pts[1:]:
        if q == out[-1]:
            continue
        if len(out) >= 2 and _unit(out[-2], out[-1]) == _unit(out[-1], q):
            out[-1] = q
        else:
            out.append(q)
    return GridPath(out)


def reduce_3col(g: LabeledGraph, emb: OrthogonalEmbedding) -> ReductionOutput:
    """1-bend EPG representation of g with every edge replaced by a chain of
    diamonds, one diamond per segment of its embedded route."""
    if max_degree(g) > 4:
        raise PreconditionViolated("maximum degree exceeds 4")
    rpt = validate_embedding(g, emb)
    if not rpt.ok:
        raise EmbeddingInvalid("; ".join(rpt.problems[:3]))
    f, s = 8, 1
    pts = {u: GridPoint(p.x * f, p.y * f) for u, p in emb.vertex_points.items()}
    routes = {}
    for (u, v) in emb.edge_paths:
        routes[(u, v)] = list(emb.path(u, v).scaled(f).seq)
    bends = {(u, v): len(seq) - 2 for (u, v), seq in routes.items()}
    out_graph = diamond_chain_substitute(g, bends)
    used = defaultdict(set)
    for (u, v), seq in routes.items():
        used[u].add(_unit(seq[0], seq[1]))
        used[v].add(_unit(seq[-1], seq[-2]))
    paths: dict[str, GridPath] = {}
    vmap: dict[str, tuple[str, str]] = {}
    for u in g.vertices:
        c = pts[u]
        top = 2 * s if (0, 1) in used[u] else s
        bottom = 2 * s if (0, -1) in used[u] else s
        paths[u] = GridPath([_step(c, (0, -1), bottom), _step(c, (0, 1), top)])
        vmap[u] = (u, "vertex")
    for (u, v), seq in sorted(routes.items()):
        k = len(seq) - 2
        dirs = [_unit(a, b) for a, b in zip(seq, seq[1:])]
        for j in range(1, k + 2):
            wa, wb, z = diamond_labels(u, v, j)
            d = dirs[j - 1]
            if j == 1:
                mid, start = _departure(seq[0], d, s)
            else:
                b = seq[j - 1]
                mid = GridPath([_step(b, d, s), _step(b, d, 3 * s)])
                start = _step(b, d, 2 * s)
            if j == k + 1:
                tail, stop = _arrival(seq[-1], d, s)
                if j > 1:
                    mid = GridPath([_step(seq[j - 1], d, s), stop])
                zp = _polyline([start] + tail)
            else:
                corner = seq[j]
                zp = _polyline([start, corner, _step(corner, dirs[j], 2 * s)])
            paths[wa] = paths[wb] = mid
            paths[z] = zp
            vmap[wa] = (edge_label(u, v), "diamond%d-middle" % j)
            vmap[wb] = (edge_label(u, v), "diamond%d-middle" % j)
            vmap[z] = (edge_label(u, v), "diamond%d-far" % j)
    out_rep = Representation(paths, Semantics.EPG, f.bit_length() - 1)
    _finish(out_graph, out_rep)
    return ReductionOutput(out_graph, out_rep, vmap)


def _finish(out_graph: LabeledGraph, out_rep: Representation) -> None:
    rpt = validate(out_rep)
    if not rpt.ok:
        raise AssertionError("reduction produced an invalid representation: %s" % rpt.summary())
    derived = derive_graph(out_rep)
    if derived != out_graph:
        raise AssertionError("reduction output mismatch: %r" % derived.diff(out_graph))
