"""Planar exactly-3-bounded SAT to B_i-CPG recognition.

Formulas become the graph G_i(F): a wheel-shaped gadget per variable, a
three-triangle gadget per clause, a seven-vertex connector per
variable/clause incidence, and an end-eating graph E_i hung off every vertex
whose path must spend an endpoint.  For satisfiable formulas a concrete
i-bend representation is built from an orthogonal embedding of the incidence
graph; conversely an assignment is read back from any valid representation
through the R-values of the terminal pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Mapping

from .constructions import build_end_eater
from .embedding import OrthogonalEmbedding, validate_embedding
from .graph_core import LabeledGraph
from .grid_geom import SYMMETRIES, GridPath, GridPoint, apply_symmetry, path_intersection
from .representation import (
    InvalidRepresentation,
    PreconditionViolated,
    Representation,
    derive_graph,
    validate,
)
from .solvers import satisfies

Literal = tuple[str, bool]


class EmptyClauseProduced(ValueError):
    pass


class AssignmentDoesNotSatisfy(ValueError):
    pass


class EmbeddingTooTight(RuntimeError):
    pass


class InconsistentRValues(ValueError):
    pass


# -- formulas ---------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    variables: tuple[str, ...]
    clauses: tuple[tuple[Literal, ...], ...]

    def __init__(self, variables: Iterable[str], clauses: Iterable[Iterable[Literal]]):
        vs = tuple(variables)
        cs = tuple(tuple((str(v), bool(p)) for v, p in c) for c in clauses)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variable label")
        known = set(vs)
        for c in cs:
            names = [v for v, _ in c]
            if len(set(names)) != len(names):
                raise ValueError("clause %r contains a variable twice" % (c,))
            for v in names:
                if v not in known:
                    raise ValueError("clause mentions undeclared variable %r" % v)
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "clauses", cs)

    def occurrences(self, x: str) -> list[tuple[int, bool]]:
        """(clause index, polarity) for each occurrence of x, in clause order."""
        return [(j, p) for j, c in enumerate(self.clauses) for v, p in c if v == x]


def preprocess_formula(f: Formula) -> tuple[Formula, dict[str, bool]]:
    """Repeatedly fix pure variables and drop the clauses they satisfy."""
    if any(len(c) == 0 for c in f.clauses):
        raise EmptyClauseProduced("formula contains an empty clause")
    clauses = list(f.clauses)
    variables = list(f.variables)
    forced: dict[str, bool] = {}
    changed = True
    while changed:
        changed = False
        for x in list(variables):
            pols = {p for c in clauses for v, p in c if v == x}
            if len(pols) == 2:
                continue
            value = pols.pop() if pols else False
            forced[x] = value
            variables.remove(x)
            clauses = [c for c in clauses if (x, value) not in c]
            changed = True
    return Formula(variables, clauses), forced


@dataclass
class FormulaReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate_exactly3bounded(f: Formula) -> FormulaReport:
    rep = FormulaReport()
    for j, c in enumerate(f.clauses, 1):
        if not 1 <= len(c) <= 3:
            rep.problems.append("clause %d has %d literals" % (j, len(c)))
    for x in f.variables:
        occ = f.occurrences(x)
        if len(occ) != 3:
            rep.problems.append("variable %s occurs %d times" % (x, len(occ)))
        pos = sum(1 for _, p in occ if p)
        if pos > 2 or len(occ) - pos > 2:
            rep.problems.append("variable %s is pure or has three equal signs" % x)
    return rep


def parse_dimacs(text: str) -> Formula:
    nvars = None
    clauses: list[list[Literal]] = []
    cur: list[Literal] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError("bad problem line %r" % line)
            nvars = int(parts[2])
            continue
        for tok in line.split():
            n = int(tok)
            if n == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append((str(abs(n)), n > 0))
    if cur:
        clauses.append(cur)
    if nvars is None:
        raise ValueError("missing 'p cnf' line")
    return Formula([str(i) for i in range(1, nvars + 1)], clauses)


def to_dimacs(f: Formula) -> str:
    index = {v: i for i, v in enumerate(f.variables, 1)}
    lines = ["p cnf %d %d" % (len(f.variables), len(f.clauses))]
    for c in f.clauses:
        lines.append(" ".join(str(index[v] if p else -index[v]) for v, p in c) + " 0")
    return "\n".join(lines) + "\n"


# -- labels -------------------------------------------------------------------------

def var_node(x: str) -> str:
    return "x:" + x


def clause_node(j: int) -> str:
    return "c:%d" % (j + 1)


def incidence_graph(f: Formula) -> LabeledGraph:
    verts = [var_node(x) for x in f.variables] + [clause_node(j) for j in range(len(f.clauses))]
    edges = [(var_node(v), clause_node(j)) for j, c in enumerate(f.clauses) for v, _ in c]
    return LabeledGraph(verts, edges, name="H")


POSITIVE_PAIRS = ("bc", "da")
NEGATIVE_PAIRS = ("ab", "cd")
RIM = ("ab", "bc", "cd", "da")


@dataclass(frozen=True)
class Terminal:
    gadget: str
    name: str
    pair: tuple[str, str]
    kind: str  # "positive", "negative" or "clause"


@dataclass(frozen=True)
class Connector:
    var: str
    clause: str
    polarity: bool
    var_terminal: str
    clause_terminal: str
    labels: tuple[str, ...]  # t_xc, t1..t5, t_cx


@dataclass
class ReductionArtifacts:
    formula: Formula
    i: int
    graph: LabeledGraph
    terminal_index: dict[tuple[str, str], Terminal]
    anchor_index: list[str]
    connector_index: dict[tuple[str, str], Connector]
    false_terminators: dict[str, list[tuple[str, str]]]

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "terminals": [
                {"gadget": t.gadget, "name": t.name, "pair": list(t.pair), "kind": t.kind}
                for t in self.terminal_index.values()
            ],
            "anchors": list(self.anchor_index),
            "connectors": [
                {"var": c.var, "clause": c.clause, "polarity": c.polarity, "var_terminal": c.var_terminal,
                 "clause_terminal": c.clause_terminal, "labels": list(c.labels)}
                for c in self.connector_index.values()
            ],
            "false_terminators": {k: [list(x) for x in v] for k, v in self.false_terminators.items()},
        }


def eater_label(w: str, e: str) -> str:
    return "%s/%s" % (w, e)


def build_reduction_graph(f: Formula, i: int) -> ReductionArtifacts:
    if i not in (1, 2, 3):
        raise PreconditionViolated("i must be 1, 2 or 3")
    rpt = validate_exactly3bounded(f)
    if not rpt.ok:
        raise PreconditionViolated("formula is not exactly-3-bounded: " + "; ".join(rpt.problems))
    eater = build_end_eater(i)
    anchor = eater.anchors[0].label
    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    terminals: dict[tuple[str, str], Terminal] = {}
    anchors: list[str] = []

    def hang(w: str) -> None:
        verts.extend(eater_label(w, v) for v in eater.graph.vertices)
        edges.extend((eater_label(w, a), eater_label(w, b)) for a, b in eater.graph.edges)
        edges.append((w, eater_label(w, anchor)))
        anchors.append(w)

    for x in f.variables:
        X = var_node(x)
        lab = {r: "%s.%s" % (X, r) for r in "abcde"}
        verts.extend(lab.values())
        edges.extend((lab[p[0]], lab[p[1]]) for p in RIM)
        edges.extend((lab["e"], lab[r]) for r in "abcd")
        for r in "abcd":
            hang(lab[r])
        for names, kind in ((POSITIVE_PAIRS, "positive"), (NEGATIVE_PAIRS, "negative")):
            for n in names:
                terminals[(X, n)] = Terminal(X, n, (lab[n[0]], lab[n[1]]), kind)

    connectors: dict[tuple[str, str], Connector] = {}
    false_terms: dict[str, list[tuple[str, str]]] = {}
    for j, c in enumerate(f.clauses):
        C = clause_node(j)
        o = C + ".o"
        verts.append(o)
        for k in (1, 2, 3):
            p, q = "%s.p%d" % (C, k), "%s.q%d" % (C, k)
            verts += [p, q]
            edges += [(o, p), (o, q), (p, q)]
            hang(p)
            hang(q)
            terminals[(C, str(k))] = Terminal(C, str(k), (p, q), "clause")
        for k in range(len(c) + 1, 4):
            t = "%s.f%d" % (C, k)
            verts.append(t)
            p, q = terminals[(C, str(k))].pair
            edges += [(t, p), (t, q)]
            hang(t)
            false_terms.setdefault(C, []).append((t, str(k)))

    used: dict[str, int] = {}
    for x in f.variables:
        X = var_node(x)
        npos = nneg = 0
        for j, pol in f.occurrences(x):
            C = clause_node(j)
            k = [v for v, _ in f.clauses[j]].index(x) + 1
            if pol:
                vt = POSITIVE_PAIRS[npos]
                npos += 1
            else:
                vt = NEGATIVE_PAIRS[nneg]
                nneg += 1
            base = "%s~%s." % (X, C)
            labels = tuple(base + s for s in ("xc", "t1", "t2", "t3", "t4", "t5", "cx"))
            verts.extend(labels)
            edges.extend(zip(labels, labels[1:]))
            for y in terminals[(X, vt)].pair:
                edges.append((labels[0], y))
            for y in terminals[(C, str(k))].pair:
                edges.append((labels[-1], y))
            for t in labels[1:-1]:
                hang(t)
            connectors[(X, C)] = Connector(X, C, pol, vt, str(k), labels)
            used[X] = used.get(X, 0) + 1

    g = LabeledGraph(verts, edges, name="G%d" % i, tags={w: {"eaten"} for w in anchors})
    return ReductionArtifacts(f, i, g, terminals, anchors, connectors, false_terms)


# -- R-values -------------------------------------------------------------------------

def assign_r_values(arts: ReductionArtifacts, a: Mapping[str, bool]) -> dict[tuple[str, str], int]:
    f = arts.formula
    if set(a) < set(f.variables) or not satisfies(f, a):
        raise AssignmentDoesNotSatisfy("assignment does not satisfy the formula")
    out: dict[tuple[str, str], int] = {}
    for x in f.variables:
        X = var_node(x)
        for n in POSITIVE_PAIRS:
            out[(X, n)] = int(bool(a[x]))
        for n in NEGATIVE_PAIRS:
            out[(X, n)] = int(not a[x])
    for j, c in enumerate(f.clauses):
        C = clause_node(j)
        chosen = next(k for k, (v, p) in enumerate(c, 1) if bool(a[v]) == p)
        for k in (1, 2, 3):
            out[(C, str(k))] = 0 if k == chosen else 1
    return out


def _r_value(rep: Representation, arts: ReductionArtifacts, key: tuple[str, str]) -> int:
    t = arts.terminal_index[key]
    y, z = (rep.paths[w] for w in t.pair)
    meet = path_intersection(y, z)
    if not meet or not isinstance(meet, frozenset):
        raise InvalidRepresentation("terminal %s:%s paths do not meet in isolated points" % key)
    if t.kind == "clause":
        o = rep.paths[t.gadget + ".o"]
        for r in meet:
            if r in y.endpoints and r in z.endpoints and o.contains(r) and r not in o.endpoints:
                return 0
        return 1
    e = rep.paths[t.gadget + ".e"]
    return 0 if all(e.contains(r) for r in meet) else 1


def _check_rep(rep: Representation, arts: ReductionArtifacts) -> None:
    v = validate(rep)
    if not v.ok:
        raise InvalidRepresentation(v.summary())
    d = derive_graph(rep)
    if d != arts.graph:
        raise InvalidRepresentation("representation does not derive G_i: %r" % {k: v[:4] for k, v in d.diff(arts.graph).items()})


def terminal_r_value(rep: Representation, arts: ReductionArtifacts, key: tuple[str, str], check: bool = True) -> int:
    if check:
        _check_rep(rep, arts)
    return _r_value(rep, arts, key)


def all_r_values(rep: Representation, arts: ReductionArtifacts, check: bool = True) -> dict[tuple[str, str], int]:
    if check:
        _check_rep(rep, arts)
    return {k: _r_value(rep, arts, k) for k in arts.terminal_index}


def clauses_have_zero_terminal(rep: Representation, arts: ReductionArtifacts, check: bool = True) -> bool:
    r = all_r_values(rep, arts, check)
    clauses = {t.gadget for t in arts.terminal_index.values() if t.kind == "clause"}
    return all(any(r[(C, k)] == 0 for k in "123") for C in clauses)


def extract_assignment(rep: Representation, arts: ReductionArtifacts) -> dict[str, bool]:
    r = all_r_values(rep, arts)
    out = {}
    for x in arts.formula.variables:
        X = var_node(x)
        pos = {r[(X, n)] for n in POSITIVE_PAIRS}
        neg = {r[(X, n)] for n in NEGATIVE_PAIRS}
        if len(pos) != 1 or len(neg) != 1 or pos == neg:
            raise InconsistentRValues("variable %s: positive %s, negative %s" % (x, sorted(pos), sorted(neg)))
        out[x] = pos == {1}
    return out


# -- square layouts ---------------------------------------------------------------
#
# Each layout fills the square of one gadget.  Ports name a side, the R-value
# of the terminal served there and the path of the connector vertex attached
# to it.  For R-value 1 that path starts on the free contact point of the pair
# and leaves towards the side; for R-value 0 it touches the pair twice and the
# connector arrives at ``target`` from the side.  Core paths list their eaten
# endpoint first.

N, E, S, W = (0, 1), (1, 0), (0, -1), (-1, 0)


@dataclass(frozen=True)
class _Port:
    side: tuple[int, int]
    r: int
    pair: tuple[str, str]
    t: tuple
    target: tuple | None = None


@dataclass(frozen=True)
class _Layout:
    name: str
    paths: dict
    ports: tuple


_WHEEL_A = {
    "e": [(0, 1), (1, 1)],
    "A": [(-2, 2), (1, 2), (1, 1)],
    "B": [(-2, 1), (0, 1), (0, 2)],
    "C": [(3, 1), (1, 1), (1, 0)],
    "D": [(3, 0), (0, 0), (0, 1)],
}


def _wheel_b(low: int, high: int) -> dict:
    return {
        "e": [(1, 0), (1, 1)],
        "A": [(0, low), (0, 1), (1, 1)],
        "B": [(1, low), (1, 0), (0, 0)],
        "C": [(1, high), (1, 1), (2, 1)],
        "D": [(2, high), (2, 0), (1, 0)],
    }


VARIABLE_LAYOUTS = (
    _Layout("two-zero-opposite", _WHEEL_A, (
        _Port(W, 0, ("B", "D"), ((-1, 1), (-1, 0), (0, 0)), (-1, 0)),
        _Port(E, 0, ("A", "C"), ((1, 2), (2, 2), (2, 1)), (2, 2)),
        _Port(N, 1, ("A", "B"), ((0, 2), (0, 3))),
    )),
    _Layout("two-zero-adjacent", _wheel_b(-2, 3), (
        _Port(E, 0, ("B", "D"), ((1, -1), (2, -1), (2, 0)), (2, -1)),
        _Port(N, 0, ("A", "C"), ((0, 1), (0, 2), (1, 2)), (0, 2)),
        _Port(W, 1, ("A", "B"), ((0, 0), (-1, 0))),
    )),
    _Layout("one-zero-opposite", _wheel_b(-1, 3), (
        _Port(N, 0, ("A", "C"), ((0, 1), (0, 2), (1, 2)), (0, 2)),
        _Port(W, 1, ("A", "B"), ((0, 0), (-1, 0))),
        _Port(E, 1, ("C", "D"), ((2, 1), (3, 1))),
    )),
    _Layout("one-zero-adjacent", _wheel_b(-2, 2), (
        _Port(E, 0, ("B", "D"), ((1, -1), (2, -1), (2, 0)), (2, -1)),
        _Port(W, 1, ("A", "B"), ((0, 0), (-1, 0))),
        _Port(N, 1, ("C", "D"), ((2, 1), (3, 1), (3, 2))),
    )),
)

CLAUSE_LAYOUTS = (
    _Layout("ones-opposite", {
        "o": [(0, 2), (2, 2), (2, 0)],
        "p1": [(2, 4), (2, 2)], "q1": [(4, 2), (2, 2)],
        "p2": [(-1, 1), (1, 1), (1, 2)], "q2": [(0, 3), (0, 1)],
        "p3": [(3, -1), (3, 1), (2, 1)], "q3": [(1, 0), (3, 0)],
    }, (
        _Port(N, 0, ("p1", "q1"), ((2, 3), (3, 3), (3, 2)), (3, 3)),
        _Port(W, 1, ("p2", "q2"), ((0, 1), (0, 0), (-1, 0))),
        _Port(E, 1, ("p3", "q3"), ((3, 0), (4, 0))),
    )),
    _Layout("zero-opposite-one", {
        "o": [(0, -2), (0, 0), (2, 0)],
        "p1": [(0, 2), (0, 0)], "q1": [(-2, 0), (0, 0)],
        "p2": [(2, -1), (2, 1)], "q2": [(3, 1), (1, 1), (1, 0)],
        "p3": [(-1, -2), (1, -2)], "q3": [(1, -3), (1, -1), (0, -1)],
    }, (
        _Port(W, 0, ("p1", "q1"), ((-1, 0), (-1, 1), (0, 1)), (-1, 1)),
        _Port(N, 1, ("p2", "q2"), ((2, 1), (2, 2))),
        _Port(E, 1, ("p3", "q3"), ((1, -2), (2, -2))),
    )),
)


def _sym_inv(m):
    a, b, c, d = m
    det = a * d - b * c
    return (d * det, -b * det, -c * det, a * det)


def _unit(dx: int, dy: int) -> tuple[int, int]:
    return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


def _touching(paths: Mapping[str, list]) -> set[frozenset]:
    gp = {k: GridPath(v) for k, v in paths.items()}
    return {frozenset((a, b)) for a in gp for b in gp if a < b and path_intersection(gp[a], gp[b])}


@dataclass
class _Fill:
    """A placed gadget square: core paths, per-edge port geometry, and eaten
    free ends of false terminators."""

    paths: dict[str, list]
    port_point: dict[tuple[str, str], GridPoint]
    port_side: dict[tuple[str, str], tuple[int, int]]
    t_paths: dict[tuple[str, str], list]
    r1: dict[tuple[str, str], bool]
    radius: int


def _match(layout: _Layout, sides: Mapping, rvals: Mapping, m) -> dict | None:
    """Map each incident H-edge to a layout port under symmetry m."""
    by_side = {apply_symmetry(m, p.side): p for p in layout.ports}
    out = {}
    for key, side in sides.items():
        p = by_side.get(GridPoint(*side))
        if p is None or p.r != rvals[key]:
            return None
        out[key] = p
    spare = [p for p in layout.ports if p not in out.values()]
    if any(p.r != 1 for p in spare):
        return None
    return out


def _place(layout: _Layout, m, center: GridPoint, rename: Mapping[str, str], assignment: Mapping,
           extra_t: Mapping) -> _Fill:
    pts = [q for seq in layout.paths.values() for q in seq] + [q for p in layout.ports for q in p.t]
    tx = [apply_symmetry(m, q) for q in pts]
    cx = (min(q.x for q in tx) + max(q.x for q in tx)) // 2
    cy = (min(q.y for q in tx) + max(q.y for q in tx)) // 2
    dx, dy = center.x - cx, center.y - cy

    def T(q):
        r = apply_symmetry(m, q)
        return GridPoint(r.x + dx, r.y + dy)

    radius = max(max(abs(T(q).x - center.x), abs(T(q).y - center.y)) for q in pts) + 2
    paths = {rename[k]: [T(q) for q in seq] for k, seq in layout.paths.items()}
    fill = _Fill(paths, {}, {}, {}, {}, radius)
    for key, port in assignment.items():
        side = apply_symmetry(m, port.side)
        seq = [T(q) for q in port.t]
        fill.port_side[key] = tuple(side)
        fill.r1[key] = port.r == 1
        if port.r == 1:
            last = seq[-1]
            reach = (last.x - center.x) * side.x + (last.y - center.y) * side.y
            far = GridPoint(last.x + side.x * (radius - reach), last.y + side.y * (radius - reach))
            seq[-1] = far
            fill.port_point[key] = far
        else:
            fill.port_point[key] = T(port.target)
        fill.t_paths[key] = seq
    for label, port in extra_t.items():
        seq = [T(q) for q in port.t]
        fill.paths[label] = seq[::-1]
    return fill


def _fill_variable(arts, x, center, sides, rvals) -> _Fill:
    X = var_node(x)
    used = {key: arts.connector_index[key].var_terminal for key in sides}
    graph_r = {}
    for n in POSITIVE_PAIRS + NEGATIVE_PAIRS:
        graph_r[frozenset(n)] = rvals[(X, n)]
    for layout in VARIABLE_LAYOUTS:
        touch = _touching(layout.paths)
        rim = {s for s in touch if "e" not in s}
        core = {k: GridPath(v) for k, v in layout.paths.items()}
        for m in SYMMETRIES:
            assign = _match(layout, sides, {k: rvals[(X, used[k])] for k in sides}, m)
            if assign is None:
                continue
            for perm in permutations("abcd"):
                f = dict(zip("ABCD", perm))
                f["e"] = "e"
                if {frozenset(f[u] for u in s) for s in rim} != {frozenset(n) for n in RIM}:
                    continue
                if any(frozenset(f[u] for u in assign[k].pair) != frozenset(used[k]) for k in assign):
                    continue
                ok = True
                for s in rim:
                    a, b = sorted(s)
                    meet = path_intersection(core[a], core[b])
                    r = 0 if all(core["e"].contains(q) for q in meet) else 1
                    if r != graph_r[frozenset(f[u] for u in s)]:
                        ok = False
                if not ok:
                    continue
                rename = {k: "%s.%s" % (X, f[k]) for k in layout.paths}
                return _place(layout, m, center, rename, assign, {})
    raise EmbeddingTooTight("no variable layout fits the edge directions at %s" % X)


def _fill_clause(arts, j, center, sides, rvals) -> _Fill:
    C = clause_node(j)
    used = {key: arts.connector_index[key].clause_terminal for key in sides}
    spare_terms = list(arts.false_terminators.get(C, []))
    for layout in CLAUSE_LAYOUTS:
        for m in SYMMETRIES:
            assign = _match(layout, sides, {k: rvals[(C, used[k])] for k in sides}, m)
            if assign is None:
                continue
            spare = [p for p in layout.ports if p not in assign.values()]
            rename = {"o": C + ".o"}
            for k, p in assign.items():
                idx = p.pair[0][1:]
                rename["p" + idx] = "%s.p%s" % (C, used[k])
                rename["q" + idx] = "%s.q%s" % (C, used[k])
            extra = {}
            for p, (t, k) in zip(spare, spare_terms):
                idx = p.pair[0][1:]
                rename["p" + idx] = "%s.p%s" % (C, k)
                rename["q" + idx] = "%s.q%s" % (C, k)
                extra[t] = p
            if len(extra) != len(spare_terms):
                continue
            return _place(layout, m, center, rename, assign, extra)
    raise EmbeddingTooTight("no clause layout fits the edge directions at %s" % C)


# -- connectors ---------------------------------------------------------------------

def _lattice_walk(poly: list[GridPoint]) -> tuple[list[GridPoint], set[int]]:
    pts = [poly[0]]
    corners = set()
    for a, b in zip(poly, poly[1:]):
        ux, uy = _unit(b.x - a.x, b.y - a.y)
        n = abs(b.x - a.x) + abs(b.y - a.y)
        for s in range(1, n + 1):
            pts.append(GridPoint(a.x + ux * s, a.y + uy * s))
        corners.add(len(pts) - 1)
    corners.discard(len(pts) - 1)
    return pts, corners


def _compress(poly: list[GridPoint]) -> list[GridPoint]:
    out = [poly[0]]
    for q in poly[1:]:
        if q == out[-1]:
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            if (a.x == b.x == q.x) or (a.y == b.y == q.y):
                out[-1] = q
                continue
        out.append(q)
    return out


def _shifted_polyline(path: GridPath, start: GridPoint, end: GridPoint) -> list[GridPoint]:
    """Move the end segments of an embedded edge sideways onto the port
    lines through ``start`` and ``end``."""
    poly = list(path.seq)
    d0 = _unit(poly[1].x - poly[0].x, poly[1].y - poly[0].y)
    d1 = _unit(poly[-2].x - poly[-1].x, poly[-2].y - poly[-1].y)
    s0 = GridPoint((start.x - poly[0].x) * abs(d0[1]), (start.y - poly[0].y) * abs(d0[0]))
    s1 = GridPoint((end.x - poly[-1].x) * abs(d1[1]), (end.y - poly[-1].y) * abs(d1[0]))
    if len(poly) == 2 and s0 != s1:
        a, b = poly
        mid = GridPoint((a.x + b.x) // 2, (a.y + b.y) // 2)
        poly = [a, mid, mid, b]
    add = lambda q, s: GridPoint(q.x + s.x, q.y + s.y)
    poly[0], poly[1] = add(poly[0], s0), add(poly[1], s0)
    poly[-1], poly[-2] = add(poly[-1], s1), add(poly[-2], s1)
    poly[0], poly[-1] = start, end
    return _compress(poly)


def _connector_paths(walk: list[GridPoint], corners: set[int], busy: set, keep_out) -> list[list[GridPoint]]:
    """Five one-bend paths along ``walk``: path k bends at split s_k and runs to
    s_{k+1}; its other arm is a one-step stub (the eaten end)."""
    n = len(walk)
    chosen = sorted(corners)
    if len(chosen) > 4:
        raise EmbeddingTooTight("connector route has %d bends" % len(chosen))
    ok = [i for i in range(n) if not keep_out(walk[i])]
    while len(chosen) < 4:
        bounds = [0] + chosen + [n - 1]
        best = None
        for a, b in zip(bounds, bounds[1:]):
            cands = [i for i in ok if a + 3 <= i <= b - 3]
            if cands:
                mid = (a + b) // 2
                i = min(cands, key=lambda i: (abs(i - mid), i))
                if best is None or b - a > best[0]:
                    best = (b - a, i)
        if best is None:
            raise EmbeddingTooTight("no room to split a connector")
        chosen = sorted(chosen + [best[1]])
    splits = [0] + chosen
    out = []
    for k, s in enumerate(splits):
        q = walk[s]
        nxt = walk[splits[k + 1]] if k + 1 < len(splits) else walk[-1]
        if s in corners:
            stub_opts = [GridPoint(2 * q.x - walk[s - 1].x, 2 * q.y - walk[s - 1].y)]
        else:
            ux, uy = _unit(walk[s + 1].x - q.x, walk[s + 1].y - q.y)
            stub_opts = [GridPoint(q.x - uy, q.y + ux), GridPoint(q.x + uy, q.y - ux)]
        stub = next((p for p in stub_opts if p not in busy), None)
        if stub is None:
            raise EmbeddingTooTight("no free stub at %r" % (tuple(q),))
        busy.add(stub)
        out.append([stub, q, nxt])
    return out


# -- splicing end-eaters ------------------------------------------------------------

def _splice(core: dict[str, list], eaten: list[str], i: int) -> dict[str, GridPath]:
    bundle = build_end_eater(i)
    anc = bundle.anchors[0]
    reach = 0
    for p in bundle.rep.paths.values():
        for q in p.seq:
            reach = max(reach, abs(q.x - anc.port.x), abs(q.y - anc.port.y))
    scale = 2 * reach + 2
    out = {k: GridPath(v).scaled(scale) for k, v in core.items()}
    for w in eaten:
        p = out[w]
        end, nxt = p.seq[0], p.seq[1]
        u = _unit(nxt.x - end.x, nxt.y - end.y)
        m = next(m for m in SYMMETRIES if tuple(apply_symmetry(m, anc.direction)) == u)
        port = apply_symmetry(m, anc.port)
        dx, dy = end.x - port.x, end.y - port.y
        for k, path in bundle.rep.paths.items():
            out[eater_label(w, k)] = GridPath([(apply_symmetry(m, q).x + dx, apply_symmetry(m, q).y + dy)
                                               for q in path.seq])
    return out


# -- the builder ----------------------------------------------------------------------

def build_reduction_rep(arts: ReductionArtifacts, a: Mapping[str, bool], emb: OrthogonalEmbedding,
                        scale: int | None = None) -> Representation:
    """An i-bend CPG representation of G_i(F) built from a satisfying
    assignment and an orthogonal embedding of the incidence graph."""
    f = arts.formula
    rvals = assign_r_values(arts, a)
    H = incidence_graph(f)
    er = validate_embedding(H, emb)
    if not er.ok:
        raise PreconditionViolated("embedding is not valid for the incidence graph: %s" % er.problems[:3])
    if scale is not None:
        return _build(arts, rvals, emb, H, scale)
    last = None
    for s in (24, 48, 96):
        try:
            return _build(arts, rvals, emb, H, s)
        except EmbeddingTooTight as exc:
            last = exc
    raise last


def _build(arts, rvals, emb, H, M) -> Representation:
    big = emb.scaled(M)
    centers = big.vertex_points
    fills: dict[str, _Fill] = {}
    for node in H.vertices:
        sides = {}
        for other in H.neighbors(node):
            p = big.path(node, other)
            d = _unit(p.seq[1].x - p.seq[0].x, p.seq[1].y - p.seq[0].y)
            key = (node, other) if node.startswith("x:") else (other, node)
            sides[key] = d
        if node.startswith("x:"):
            fills[node] = _fill_variable(arts, node[2:], centers[node], sides, rvals)
        else:
            fills[node] = _fill_clause(arts, int(node[2:]) - 1, centers[node], sides, rvals)
    radius = max(fl.radius for fl in fills.values())
    if 2 * radius + 6 >= M:
        raise EmbeddingTooTight("squares of radius %d do not fit at scale %d" % (radius, M))

    core: dict[str, list] = {}
    for fl in fills.values():
        core.update(fl.paths)
    busy = set()
    for seq in core.values():
        busy.update(GridPath(seq).lattice_points())
    for fl in fills.values():
        for seq in fl.t_paths.values():
            busy.update(GridPath(seq).lattice_points())

    def keep_out(q):
        return any(max(abs(q.x - c.x), abs(q.y - c.y)) <= radius + 1 for c in centers.values())

    for key, conn in sorted(arts.connector_index.items()):
        X, C = key
        fx, fc = fills[X], fills[C]
        if fc.r1[key]:
            first, second = (C, fc), (X, fx)
            t_first, t_second = conn.labels[-1], conn.labels[0]
            chain = conn.labels[5:0:-1]
        else:
            first, second = (X, fx), (C, fc)
            t_first, t_second = conn.labels[0], conn.labels[-1]
            chain = conn.labels[1:6]
        poly = _shifted_polyline(big.path(first[0], second[0]), first[1].port_point[key], second[1].port_point[key])
        walk, corners = _lattice_walk(poly)
        busy.update(walk)
        pieces = _connector_paths(walk, corners, busy, keep_out)
        for label, seq in zip(chain, pieces):
            core[label] = seq
        core[t_first] = first[1].t_paths[key]
        core[t_second] = second[1].t_paths[key]

    paths = _splice(core, arts.anchor_index, arts.i)
    rep = Representation(paths)
    v = validate(rep)
    if not v.ok:
        raise EmbeddingTooTight("assembled representation is invalid: " + v.summary())
    d = derive_graph(rep)
    if d != arts.graph:
        raise EmbeddingTooTight("assembled representation derives a different graph: %r"
                                % {k: x[:4] for k, x in d.diff(arts.graph).items()})
    return rep


EXAMPLE_FORMULA = Formula(["x", "y"], [[("x", True), ("y", True)], [("x", True), ("y", False)],
                                       [("x", False), ("y", False)]])
