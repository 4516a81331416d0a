"""CPG / EPG representations: validity, derived graphs, contact statistics,
refinement and the one-bend normalization procedure."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .graph_core import LabeledGraph, is_triangle_free, max_degree
from .grid_geom import (
    OVERLAP,
    SYMMETRIES,
    GridPath,
    GridPoint,
    apply_symmetry,
    path_intersection,
)


class Semantics(enum.Enum):
    CPG = "cpg"
    EPG = "epg"


class InvalidRepresentation(ValueError):
    pass


class FourContactPresent(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class Representation:
    """A labeled family of grid paths under CPG or EPG semantics."""

    __slots__ = ("semantics", "paths", "refinement_level")

    def __init__(self, paths: Mapping[str, GridPath | Iterable], semantics: Semantics | str = Semantics.CPG,
                 refinement_level: int = 0):
        self.semantics = Semantics(semantics)
        self.paths: dict[str, GridPath] = {
            k: (p if isinstance(p, GridPath) else GridPath(p)) for k, p in sorted(paths.items())
        }
        if refinement_level < 0:
            raise ValueError("refinement level must be non-negative")
        self.refinement_level = refinement_level

    def __len__(self) -> int:
        return len(self.paths)

    def __getitem__(self, label: str) -> GridPath:
        return self.paths[label]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Representation) and self.semantics == other.semantics
                and self.paths == other.paths and self.refinement_level == other.refinement_level)

    def __repr__(self) -> str:
        return "Representation(%s, %d paths, level %d)" % (self.semantics.value, len(self.paths), self.refinement_level)

    def max_bends(self) -> int:
        return max((p.bends() for p in self.paths.values()), default=0)

    def bbox(self) -> tuple[int, int, int, int]:
        boxes = [p.bbox() for p in self.paths.values()]
        if not boxes:
            return (0, 0, 0, 0)
        return (min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes))

    def replace(self, paths: Mapping[str, GridPath] | None = None, refinement_level: int | None = None,
                semantics: Semantics | None = None) -> "Representation":
        return Representation(
            self.paths if paths is None else paths,
            self.semantics if semantics is None else semantics,
            self.refinement_level if refinement_level is None else refinement_level,
        )

    def restricted(self, labels: Iterable[str]) -> "Representation":
        keep = set(labels)
        return self.replace({k: p for k, p in self.paths.items() if k in keep})

    def to_dict(self) -> dict:
        return {
            "semantics": self.semantics.value,
            "refinement_level": self.refinement_level,
            "paths": {k: [[p.x, p.y] for p in path.seq] for k, path in self.paths.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Representation":
        return cls({k: [tuple(q) for q in v] for k, v in d["paths"].items()},
                   Semantics(d.get("semantics", "cpg")), int(d.get("refinement_level", 0)))


# -- pairwise geometry ------------------------------------------------------

def candidate_pairs(paths: Mapping[str, GridPath]) -> list[tuple[str, str]]:
    """Pairs of labels whose bounding boxes meet (sweep over x)."""
    items = sorted(((p.bbox(), k) for k, p in paths.items()), key=lambda t: (t[0][0], t[1]))
    active: list[tuple[tuple, str]] = []
    out = []
    for box, k in items:
        active = [(b, j) for b, j in active if b[2] >= box[0]]
        for b, j in active:
            if b[1] <= box[3] and box[1] <= b[3]:
                out.append((j, k) if j < k else (k, j))
        active.append((box, k))
    out.sort()
    return out


def pairwise_intersections(rep: Representation) -> dict[tuple[str, str], object]:
    """Nonempty intersections keyed by sorted label pair."""
    out = {}
    for u, v in candidate_pairs(rep.paths):
        r = path_intersection(rep.paths[u], rep.paths[v])
        if r:
            out[(u, v)] = r
    return out


@dataclass
class Violation:
    pair: tuple[str, str]
    reason: str
    points: tuple = ()


@dataclass
class ValidityReport:
    semantics: Semantics
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "valid %s representation" % self.semantics.value
        lines = ["%d violation(s):" % len(self.violations)]
        for v in self.violations[:20]:
            lines.append("  %s-%s: %s %s" % (v.pair[0], v.pair[1], v.reason, list(v.points)))
        return "\n".join(lines)


def validate(rep: Representation, _inter=None) -> ValidityReport:
    """Check pairwise interior-disjointness (CPG).  Path validity itself is
    enforced when each GridPath is constructed, so EPG input is always valid."""
    report = ValidityReport(rep.semantics)
    if rep.semantics is Semantics.EPG:
        return report
    inter = pairwise_intersections(rep) if _inter is None else _inter
    for (u, v), r in inter.items():
        if r is OVERLAP:
            report.violations.append(Violation((u, v), "overlap"))
            continue
        eu, ev = rep.paths[u].endpoints, rep.paths[v].endpoints
        bad = tuple(sorted(q for q in r if q not in eu and q not in ev))
        if bad:
            report.violations.append(Violation((u, v), "interior crossing", bad))
    return report


def require_valid(rep: Representation) -> dict:
    inter = pairwise_intersections(rep)
    rpt = validate(rep, inter)
    if not rpt.ok:
        raise InvalidRepresentation(rpt.summary())
    return inter


def derive_graph(rep: Representation, name: str = "derived") -> LabeledGraph:
    inter = require_valid(rep)
    if rep.semantics is Semantics.CPG:
        edges = list(inter)
    else:
        edges = [pair for pair, r in inter.items() if r is OVERLAP]
    return LabeledGraph(rep.paths, edges, name=name)


# -- contact statistics -----------------------------------------------------

class ContactClass(enum.Enum):
    TWO = "TwoContact"
    TYPE_IIA = "TypeIIa"
    TYPE_IIB = "TypeIIb"
    FOUR = "FourContact"
    OTHER = "Other"


@dataclass(frozen=True)
class ContactPoint:
    point: GridPoint
    multiplicity: int
    labels: tuple[str, ...]
    kind: ContactClass


@dataclass
class ContactReport:
    contact_points: list[ContactPoint]
    free_endpoints: list[tuple[str, GridPoint]]
    weights: dict[str, Fraction]
    endpoint_weights: dict[tuple[str, int], Fraction]

    @property
    def f(self) -> int:
        return len(self.free_endpoints)

    def total_weight(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def of_kind(self, kind: ContactClass) -> list[ContactPoint]:
        return [c for c in self.contact_points if c.kind is kind]


def point_incidence(rep: Representation, inter=None) -> dict[GridPoint, set[str]]:
    """Every contact point mapped to the labels of the paths through it."""
    inter = pairwise_intersections(rep) if inter is None else inter
    at: dict[GridPoint, set[str]] = defaultdict(set)
    for (u, v), r in inter.items():
        for q in r:
            at[q].update((u, v))
    return dict(at)


def _classify(rep: Representation, q: GridPoint, labels: set[str]) -> ContactClass:
    k = len(labels)
    if k == 2:
        return ContactClass.TWO
    if k >= 4:
        return ContactClass.FOUR if k == 4 else ContactClass.OTHER
    paths = [rep.paths[l] for l in labels]
    if any(q in p.bend_points for p in paths):
        return ContactClass.TYPE_IIB
    if any(q not in p.endpoints for p in paths):
        return ContactClass.TYPE_IIA
    return ContactClass.OTHER


def contact_report(rep: Representation) -> ContactReport:
    if rep.semantics is not Semantics.CPG:
        raise InvalidRepresentation("weights and contact types are defined for CPG only")
    inter = require_valid(rep)
    at = point_incidence(rep, inter)
    cps = [ContactPoint(q, len(ls), tuple(sorted(ls)), _classify(rep, q, ls)) for q, ls in sorted(at.items())]
    free = []
    weights: dict[str, Fraction] = {}
    ew: dict[tuple[str, int], Fraction] = {}
    for u, p in rep.paths.items():
        total = Fraction(0)
        for i, q in enumerate(p.endpoints):
            others = at.get(q, set()) - {u}
            if not others:
                free.append((u, q))
            interior = sum(1 for o in others if q not in rep.paths[o].endpoints)
            w = interior + Fraction(len(others) - interior, 2)
            ew[(u, i)] = w
            total += w
        weights[u] = total
    return ContactReport(cps, free, weights, ew)


@dataclass(frozen=True)
class TriangleBound:
    max_packing: int
    bound: int
    holds: bool


def triangle_bound_check(rep: Representation, node_limit: int = 5_000_000) -> TriangleBound:
    """Largest family of 3-contact points with pairwise edge-disjoint triangles,
    compared against |E| - 2|V| + f."""
    from .solvers import max_independent_set_adj

    cr = contact_report(rep)
    if any(c.multiplicity >= 4 for c in cr.contact_points):
        raise FourContactPresent("representation has a contact point of multiplicity >= 4")
    g = derive_graph(rep)
    tri = [c.labels for c in cr.contact_points if c.multiplicity == 3]
    by_edge: dict[tuple[str, str], list[int]] = defaultdict(list)
    for i, t in enumerate(tri):
        for e in combinations(t, 2):
            by_edge[e].append(i)
    adj: dict[int, set[int]] = {i: set() for i in range(len(tri))}
    for ids in by_edge.values():
        for i, j in combinations(ids, 2):
            adj[i].add(j)
            adj[j].add(i)
    packing = len(max_independent_set_adj(adj, node_limit=node_limit))
    bound = g.num_edges() - 2 * len(g) + cr.f
    return TriangleBound(packing, bound, packing >= bound)


# -- refinement -------------------------------------------------------------

def refine(rep: Representation, times: int = 1) -> Representation:
    if times < 1:
        raise ValueError("times must be positive")
    f = 2 ** times
    return rep.replace({k: p.scaled(f) for k, p in rep.paths.items()}, rep.refinement_level + times)


# -- plane graph of contacts ------------------------------------------------

def _arc_position(p: GridPath, q: GridPoint) -> int:
    pos = 0
    for a, b in p.segments():
        lo_x, hi_x = sorted((a.x, b.x))
        lo_y, hi_y = sorted((a.y, b.y))
        if lo_x <= q.x <= hi_x and lo_y <= q.y <= hi_y:
            return pos + abs(q.x - a.x) + abs(q.y - a.y)
        pos += abs(b.x - a.x) + abs(b.y - a.y)
    raise ValueError("point %r is not on the path" % (q,))


def point_label(q: GridPoint) -> str:
    return "(%d,%d)" % (q.x, q.y)


def contact_plane_graph(rep: Representation) -> LabeledGraph:
    """Contact points and free endpoints joined along path portions, then
    1-subdivided so the result is simple."""
    if rep.semantics is not Semantics.CPG:
        raise InvalidRepresentation("plane graph extraction needs a CPG representation")
    inter = require_valid(rep)
    at = point_incidence(rep, inter)
    on_path: dict[str, set[GridPoint]] = defaultdict(set)
    for q, ls in at.items():
        for l in ls:
            on_path[l].add(q)
    verts: set[str] = set()
    edges = []
    for u, p in rep.paths.items():
        stops = set(on_path[u]) | set(p.endpoints)
        order = sorted(stops, key=lambda q: _arc_position(p, q))
        for q in order:
            verts.add(point_label(q))
        for i, (a, b) in enumerate(zip(order, order[1:])):
            mid = "%s:%d" % (u, i)
            verts.add(mid)
            edges += [(point_label(a), mid), (mid, point_label(b))]
    return LabeledGraph(verts, edges, name="plane")


# -- one-bend normalization -------------------------------------------------

def _cut(p: GridPath, start: GridPoint, keep_from_end: bool) -> GridPath:
    """Sub-path of p from point ``start`` to the far endpoint.

    With keep_from_end the kept part runs from ``start`` to p's last point,
    otherwise from p's first point to ``start``.
    """
    pts = list(p.seq) if keep_from_end else list(p.seq[::-1])
    pos = _arc_position(GridPath(pts), start)
    acc = 0
    for i in range(len(pts) - 1):
        a, b = pts[i], pts[i + 1]
        seg = abs(b.x - a.x) + abs(b.y - a.y)
        if acc + seg > pos:
            rest = [start] + pts[i + 1:] if start != a else pts[i:]
            out = GridPath(rest)
            return out if keep_from_end else out.reversed()
        acc += seg
    raise ValueError("cut point is the far endpoint")


def _contacts_on(rep: Representation, u: str) -> set[GridPoint]:
    p = rep.paths[u]
    out = set()
    for v, q in rep.paths.items():
        if v == u:
            continue
        r = path_intersection(p, q)
        if r is OVERLAP:
            raise InvalidRepresentation("overlap between %s and %s" % (u, v))
        out |= r
    return out


def _shorten_end(rep: Representation, u: str, end: int, paths: dict, drop_segment: bool = False) -> bool:
    """Trim P_u from endpoint ``end`` (0 or 1) back to the nearest contact point.

    When the nearest contact is the other endpoint, either give up (returns
    False) or, with ``drop_segment``, remove the whole first segment.
    """
    p = paths[u]
    contacts = _contacts_on(rep.replace(paths), u)
    start = p.endpoints[end]
    if end == 1:
        p = p.reversed()
    others = [q for q in contacts if q != start]
    if not others:
        return False
    near = min(others, key=lambda q: _arc_position(p, q))
    if near == p.endpoints[1]:
        if not drop_segment or p.bends() == 0:
            return False
        near = p.seq[1]
    cut = _cut(p, near, keep_from_end=True)
    paths[u] = cut if end == 0 else cut.reversed()
    return True


def _touch_points(a: GridPath, b: GridPath) -> frozenset:
    r = path_intersection(a, b)
    if r is OVERLAP:
        raise InvalidRepresentation("overlapping paths")
    return r


def _pass_double_touch(rep: Representation) -> Representation:
    paths = dict(rep.paths)
    changed = True
    while changed:
        changed = False
        for u, v in candidate_pairs(paths):
            common = _touch_points(paths[u], paths[v])
            if len(common) < 2:
                continue
            for x, y in ((u, v), (v, u)):
                ends = [i for i, q in enumerate(paths[x].endpoints) if q in common]
                if ends:
                    if not _shorten_end(rep, x, ends[0], paths, drop_segment=True):
                        raise PreconditionViolated("cannot resolve double touch of %s and %s" % (u, v))
                    changed = True
                    break
            if changed:
                break
    return rep.replace(paths)


def _pass_free_ends(rep: Representation) -> Representation:
    paths = dict(rep.paths)
    for u in list(paths):
        for end in (0, 1):
            q = paths[u].endpoints[end]
            if q in _contacts_on(rep.replace(paths), u):
                continue
            _shorten_end(rep, u, end, paths)
    return rep.replace(paths)


def _inverse(m):
    for n in SYMMETRIES:
        if apply_symmetry(n, apply_symmetry(m, (1, 0))) == (1, 0) and apply_symmetry(n, apply_symmetry(m, (0, 1))) == (0, 1):
            return n
    raise AssertionError


def _bend_contacts(paths: Mapping[str, GridPath]) -> list[tuple[str, str, GridPoint]]:
    """(bent path, touching path, point) triples, in label order."""
    out = []
    for u, v in candidate_pairs(paths):
        for q in sorted(_touch_points(paths[u], paths[v])):
            if q in paths[u].bend_points:
                out.append((u, v, q))
            elif q in paths[v].bend_points:
                out.append((v, u, q))
    return out


def _shift_off_bend(paths: dict[str, GridPath], bent: str, other: str, q: GridPoint) -> dict[str, GridPath]:
    """Move the half-line below a bend contact one unit sideways.

    Works in a frame where the touching path arrives from below along the
    bent path's upward arm and the other arm points right.
    """
    P, Q = paths[bent], paths[other]
    i = P.seq.index(q)
    arms = [P.seq[i - 1], P.seq[i + 1]]
    tail = Q.seq[-2] if Q.seq[-1] == q else Q.seq[1]
    arrive = (_sgn(q.x - tail.x), _sgn(q.y - tail.y))
    frame = None
    for m in SYMMETRIES:
        up = apply_symmetry(m, arrive)
        if up != (0, 1):
            continue
        dirs = {apply_symmetry(m, (_sgn(a.x - q.x), _sgn(a.y - q.y))) for a in arms}
        if dirs == {(0, 1), (1, 0)}:
            frame = m
            break
    if frame is None:
        raise PreconditionViolated("unexpected geometry at bend contact %r" % (q,))
    inv = _inverse(frame)
    c = apply_symmetry(frame, q)
    out = {}
    for k, p in paths.items():
        pts = [apply_symmetry(frame, s) for s in p.seq]
        new = list(pts)
        n = len(pts)
        for j in (0, n - 1):
            if pts[j].x == c.x and pts[j].y <= c.y:
                new[j] = GridPoint(c.x + 1, pts[j].y)
        for j in range(n - 1):
            a, b = pts[j], pts[j + 1]
            if a.x == b.x == c.x and max(a.y, b.y) <= c.y:
                new[j] = GridPoint(c.x + 1, a.y)
                new[j + 1] = GridPoint(c.x + 1, b.y)
        out[k] = GridPath([apply_symmetry(inv, s) for s in new])
    return out


def _sgn(v: int) -> int:
    return (v > 0) - (v < 0)


def _pass_bend_contacts(rep: Representation) -> Representation:
    cur = rep
    for _ in range(4 * len(rep.paths) + 4):
        bc = _bend_contacts(cur.paths)
        if not bc:
            return cur
        bent, other, q = bc[0]
        cur = refine(cur, 1)
        q2 = GridPoint(2 * q.x, 2 * q.y)
        cur = cur.replace(_shift_off_bend(dict(cur.paths), bent, other, q2))
        require_valid(cur)
    raise PreconditionViolated("bend-contact removal did not converge")


@dataclass(frozen=True)
class NormalFormReport:
    touch_once: bool
    cubic_iff_contains: bool
    no_bend_contact: bool

    @property
    def ok(self) -> bool:
        return self.touch_once and self.cubic_iff_contains and self.no_bend_contact


def check_normal_form(g: LabeledGraph, rep: Representation) -> NormalFormReport:
    inter = pairwise_intersections(rep)
    once = all(r is not OVERLAP and len(r) <= 1 for r in inter.values())
    contains = defaultdict(bool)
    for (u, v), r in inter.items():
        if r is OVERLAP:
            continue
        for q in r:
            if q in rep.paths[v].endpoints and q not in rep.paths[u].endpoints:
                contains[u] = True
            if q in rep.paths[u].endpoints and q not in rep.paths[v].endpoints:
                contains[v] = True
    iff = all(contains[u] == (g.degree(u) == 3) for u in g.vertices)
    nobend = not _bend_contacts(rep.paths)
    return NormalFormReport(once, iff, nobend)


def normalize_b01(g: LabeledGraph, rep: Representation) -> Representation:
    """Normal form for at most one bend: paths touch at most once, a path
    strictly contains another's endpoint iff its vertex is cubic, and no
    contact happens at a bend-point."""
    if rep.semantics is not Semantics.CPG:
        raise PreconditionViolated("CPG representation required")
    if not is_triangle_free(g):
        raise PreconditionViolated("graph has a triangle")
    if max_degree(g) > 3:
        raise PreconditionViolated("graph is not subcubic")
    if rep.max_bends() > 1:
        raise PreconditionViolated("a path has more than one bend")
    try:
        derived = derive_graph(rep)
    except InvalidRepresentation as exc:
        raise PreconditionViolated(str(exc)) from exc
    if derived != g:
        raise PreconditionViolated("representation does not derive the graph: %r" % derived.diff(g))
    out = _pass_double_touch(rep)
    out = _pass_free_ends(out)
    out = _pass_bend_contacts(out)
    if derive_graph(out) != g:
        raise AssertionError("normalization changed the derived graph")
    return out
