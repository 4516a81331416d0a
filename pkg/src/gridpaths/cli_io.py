"""File formats, SVG rendering and the ``gridpaths`` command line.

Exit codes: 0 success, 1 a domain "no" (invalid, UNSAT, not found, not
colourable), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .graph_core import LabeledGraph, to_text
from .grid_geom import GeometryError, GridPath, GridPoint
from .representation import Representation, Semantics, point_incidence, validate


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__("%d:%d: %s" % (line, column, message) if line else message)
        self.line = line
        self.column = column


class SchemaError(ValueError):
    pass


# -- graphs -------------------------------------------------------------------

def parse_graph(text: str) -> LabeledGraph:
    name = "g"
    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    seen_header = False
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        col = raw.index(line[0]) + 1
        parts = line.split()
        if parts[0] == "graph":
            if seen_header or verts or edges:
                raise ParseError("misplaced 'graph' header", n, col)
            name = line[len("graph"):].strip() or "g"
            seen_header = True
        elif parts[0] == "v" and len(parts) == 2:
            verts.append(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise ParseError("expected 'graph', 'v <label>' or 'e <label> <label>'", n, col)
    try:
        return LabeledGraph(verts, edges, name=name)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def write_graph(g: LabeledGraph) -> str:
    return to_text(g)


# -- JSON helpers ---------------------------------------------------------------

def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc


def _point(obj, where: str) -> GridPoint:
    if (not isinstance(obj, list) or len(obj) != 2
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in obj)):
        raise SchemaError("%s: a point must be a pair of integers, got %r" % (where, obj))
    return GridPoint(obj[0], obj[1])


def _path(obj, where: str) -> GridPath:
    if not isinstance(obj, list) or not obj:
        raise SchemaError("%s: a path must be a non-empty list of points" % where)
    try:
        return GridPath([_point(q, where) for q in obj])
    except GeometryError as exc:
        raise SchemaError("%s: %s" % (where, exc)) from exc


def _dump_paths(paths: Mapping[str, GridPath]) -> list[str]:
    rows = []
    for k in sorted(paths):
        pts = ",".join("[%d,%d]" % (q.x, q.y) for q in paths[k].seq)
        rows.append("    %s: [%s]" % (json.dumps(k), pts))
    return rows


# -- representations ----------------------------------------------------------

def parse_rep(text: str) -> Representation:
    d = _load_json(text)
    if not isinstance(d, dict) or not isinstance(d.get("paths"), dict):
        raise SchemaError("representation needs a 'paths' object")
    sem = d.get("semantics", "cpg")
    if sem not in ("cpg", "epg"):
        raise SchemaError("semantics must be 'cpg' or 'epg'")
    lvl = d.get("refinement_level", 0)
    if not isinstance(lvl, int) or isinstance(lvl, bool) or lvl < 0:
        raise SchemaError("refinement_level must be a non-negative integer")
    paths = {k: _path(v, "path %r" % k) for k, v in d["paths"].items()}
    return Representation(paths, Semantics(sem), lvl)


def write_rep(rep: Representation) -> str:
    head = ['{', '  "semantics": "%s",' % rep.semantics.value,
            '  "refinement_level": %d,' % rep.refinement_level, '  "paths": {']
    body = _dump_paths(rep.paths)
    return "\n".join(head + [",\n".join(body)] * bool(body) + ["  }", "}"]) + "\n"


# -- embeddings ---------------------------------------------------------------

def parse_embedding(text: str):
    from .embedding import OrthogonalEmbedding
    d = _load_json(text)
    if not isinstance(d, dict) or not isinstance(d.get("vertices"), dict) or not isinstance(d.get("edges"), dict):
        raise SchemaError("embedding needs 'vertices' and 'edges' objects")
    verts = {k: _point(v, "vertex %r" % k) for k, v in d["vertices"].items()}
    edges = {k: [[q.x, q.y] for q in _path(v, "edge %r" % k).seq] for k, v in d["edges"].items()}
    try:
        return OrthogonalEmbedding.from_dict({"vertices": {k: list(p) for k, p in verts.items()}, "edges": edges})
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def write_embedding(emb) -> str:
    d = emb.to_dict()
    verts = ["    %s: [%d,%d]" % (json.dumps(k), v[0], v[1]) for k, v in sorted(d["vertices"].items())]
    edges = ["    %s: [%s]" % (json.dumps(k), ",".join("[%d,%d]" % tuple(q) for q in v))
             for k, v in sorted(d["edges"].items())]
    out = ["{", '  "vertices": {'] + [",\n".join(verts)] * bool(verts) + ["  },", '  "edges": {']
    out += [",\n".join(edges)] * bool(edges) + ["  }", "}"]
    return "\n".join(out) + "\n"


# -- DIMACS ---------------------------------------------------------------------

def parse_cnf(text: str):
    from .sat_reduction import parse_dimacs
    try:
        return parse_dimacs(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def write_cnf(f) -> str:
    from .sat_reduction import to_dimacs
    return to_dimacs(f)


# -- SVG ----------------------------------------------------------------------

@dataclass
class RenderOptions:
    unit_px: int = 16
    show_labels: bool = True
    color_roles: dict[str, str] = field(default_factory=dict)
    mark_endpoints: bool = True
    show_contacts: bool = False

    def __post_init__(self):
        if self.unit_px < 4:
            raise ValueError("unit_px must be at least 4")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def render_svg(obj, opts: RenderOptions | None = None, tags: Mapping[str, Sequence[str]] | None = None) -> str:
    """SVG of a Representation or an OrthogonalEmbedding.  One polyline per
    path (or embedded edge); y grows upward."""
    from .embedding import OrthogonalEmbedding
    o = opts or RenderOptions()
    tags = tags or {}
    if isinstance(obj, OrthogonalEmbedding):
        paths = {"%s|%s" % k: p for k, p in obj.edge_paths.items()}
        dots = dict(obj.vertex_points)
        shared: list = []
        contacts: list = []
    else:
        paths = dict(obj.paths)
        dots = {}
        if obj.semantics is Semantics.EPG:
            use = Counter(e for p in paths.values() for e in p.unit_edges())
            shared = sorted(e for e, c in use.items() if c > 1)
        else:
            shared = []
        contacts = sorted(point_incidence(obj)) if o.show_contacts and obj.semantics is Semantics.CPG else []
    xs = [q.x for p in paths.values() for q in p.seq] + [q.x for q in dots.values()]
    ys = [q.y for p in paths.values() for q in p.seq] + [q.y for q in dots.values()]
    if not xs:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d"></svg>\n'
                % ((2 * o.unit_px,) * 4))
    u = o.unit_px
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    w, h = (x1 - x0) * u, (y1 - y0) * u

    def px(q) -> str:
        return "%d,%d" % ((q[0] - x0) * u, (y1 - q[1]) * u)

    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">' % (w, h, w, h)]
    if o.mark_endpoints:
        out.append('<defs><marker id="end" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" '
                   'orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>')
    out.append('<g stroke="#dddddd" stroke-width="1">')
    for x in range(x0, x1 + 1):
        out.append('<line x1="%d" y1="0" x2="%d" y2="%d"/>' % ((x - x0) * u, (x - x0) * u, h))
    for y in range(y0, y1 + 1):
        out.append('<line x1="0" y1="%d" x2="%d" y2="%d"/>' % ((y1 - y) * u, w, (y1 - y) * u))
    out.append("</g>")
    for a, b in shared:
        out.append('<line class="shared" x1="%s" y1="%s" x2="%s" y2="%s" stroke="#ffd54f" stroke-width="%d"/>'
                   % (*px(a).split(","), *px(b).split(","), max(u // 2, 2)))
    for i, k in enumerate(sorted(paths)):
        color = _PALETTE[i % len(_PALETTE)]
        for t in sorted(tags.get(k, ())):
            if t in o.color_roles:
                color = o.color_roles[t]
                break
        marks = ' marker-start="url(#end)" marker-end="url(#end)"' if o.mark_endpoints else ""
        out.append('<polyline class="path" data-label=%s points="%s" fill="none" stroke="%s" stroke-width="2"%s/>'
                   % (_attr(k), " ".join(px(q) for q in paths[k].seq), color, marks))
    for q in contacts:
        x, y = px(q).split(",")
        out.append('<circle class="contact" cx="%s" cy="%s" r="%d"/>' % (x, y, max(u // 6, 2)))
    for k, q in sorted(dots.items()):
        x, y = px(q).split(",")
        out.append('<circle class="vertex" cx="%s" cy="%s" r="%d"/>' % (x, y, max(u // 4, 2)))
        if o.show_labels:
            out.append('<text x="%s" y="%s" font-size="%d">%s</text>' % (x, y, max(u // 2, 6), _text(k)))
    if o.show_labels:
        for k in sorted(paths):
            seq = paths[k].seq
            a, b = seq[len(seq) // 2 - 1] if len(seq) > 1 else seq[0], seq[len(seq) // 2]
            mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            out.append('<text x="%g" y="%g" font-size="%d">%s</text>'
                       % ((mid[0] - x0) * u, (y1 - mid[1]) * u - 2, max(u // 2, 6), _text(k)))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _text(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _attr(s: str) -> str:
    return '"%s"' % _text(s).replace('"', "&quot;")


# -- command line ---------------------------------------------------------------

class DomainFailure(Exception):
    """A well-formed request whose answer is "no"."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, dest: str | None) -> None:
    if dest:
        Path(dest).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_bundle(prefix: str | None, graph: LabeledGraph, rep: Representation, extra: dict | None = None) -> None:
    if prefix is None:
        sys.stdout.write(write_rep(rep))
        return
    Path(prefix + ".graph").write_text(write_graph(graph), encoding="utf-8")
    Path(prefix + ".rep.json").write_text(write_rep(rep), encoding="utf-8")
    if extra is not None:
        Path(prefix + ".map.json").write_text(json.dumps(extra, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _cmd_build(a) -> int:
    from .constructions import build_end_eater, build_gv, build_separator
    if a.what == "gk":
        b = build_separator(a.k)
    elif a.what == "end-eater":
        b = build_end_eater(a.i)
    else:
        b = build_gv()
    anchors = {x.label: {"port": list(x.port), "direction": list(x.direction)} for x in b.anchors}
    _write_bundle(a.out, b.graph, b.rep, {"anchors": anchors})
    return 0


def _cmd_verify(a) -> int:
    from .representation import derive_graph
    rep = parse_rep(_read(a.rep))
    if rep.semantics.value != a.semantics:
        rep = rep.replace(semantics=Semantics(a.semantics))
    rpt = validate(rep)
    print(rpt.summary())
    if not rpt.ok:
        return 1
    if a.graph:
        g = parse_graph(_read(a.graph))
        d = derive_graph(rep)
        if d != g:
            print("derived graph differs: %s" % json.dumps(d.diff(g), sort_keys=True))
            return 1
        print("derives the given graph")
    return 0


def _cmd_derive(a) -> int:
    from .representation import InvalidRepresentation, derive_graph
    rep = parse_rep(_read(a.rep))
    try:
        g = derive_graph(rep, name=a.name)
    except InvalidRepresentation as exc:
        raise DomainFailure(str(exc)) from exc
    _emit(write_graph(g), a.output)
    return 0


def _cmd_stats(a) -> int:
    from .representation import ContactClass, contact_report, derive_graph, triangle_bound_check
    rep = parse_rep(_read(a.rep))
    rpt = validate(rep)
    if not rpt.ok:
        raise DomainFailure(rpt.summary())
    g = derive_graph(rep)
    out = {"paths": len(rep), "edges": g.num_edges(), "max_bends": rep.max_bends()}
    if rep.semantics is Semantics.CPG:
        cr = contact_report(rep)
        out["total_weight"] = str(cr.total_weight())
        out["contacts"] = dict(sorted(Counter(c.kind.name for c in cr.contact_points).items()))
        out["f"] = cr.f
        if not cr.of_kind(ContactClass.FOUR):
            tb = triangle_bound_check(rep)
            out["triangle_bound"] = {"packing": tb.max_packing, "bound": tb.bound, "holds": tb.holds}
    print(json.dumps(out, sort_keys=True, indent=1))
    return 0


def _cmd_normalize(a) -> int:
    from .representation import normalize_b01
    g = parse_graph(_read(a.graph))
    rep = parse_rep(_read(a.rep))
    _emit(write_rep(normalize_b01(g, rep)), a.output)
    return 0


def _cmd_refine(a) -> int:
    from .representation import refine
    _emit(write_rep(refine(parse_rep(_read(a.rep)), a.times)), a.output)
    return 0


def _cmd_reduce(a) -> int:
    from . import np_reductions as npr
    if a.problem == "sat":
        return _reduce_sat(a)
    if a.rep is None:
        print("reduce %s needs GRAPH and REP/EMBEDDING files" % a.problem, file=sys.stderr)
        return 2
    g = parse_graph(_read(a.input))
    if a.problem == "3col":
        red = npr.reduce_3col(g, parse_embedding(_read(a.rep)))
    elif a.problem == "is":
        red = npr.reduce_is(g, parse_rep(_read(a.rep)))
    else:
        red = npr.reduce_cc(g, parse_rep(_read(a.rep)))
    _write_bundle(a.out, red.out_graph, red.out_rep, {"vertex_map": {k: list(v) for k, v in red.vertex_map.items()}})
    return 0


def _parse_assignment(spec: str, variables) -> dict[str, bool]:
    out = {}
    for part in spec.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError("assignment entries look like x=1")
        k, v = part.split("=", 1)
        if v.strip() not in ("0", "1"):
            raise ParseError("assignment values are 0 or 1")
        out[k.strip()] = v.strip() == "1"
    missing = set(variables) - set(out)
    if missing:
        raise ParseError("assignment misses %s" % ", ".join(sorted(missing)))
    return out


def _reduce_sat(a) -> int:
    from .embedding import embed_auto
    from .sat_reduction import build_reduction_graph, build_reduction_rep, incidence_graph
    from .solvers import sat_solve, satisfies
    f = parse_cnf(_read(a.input))
    arts = build_reduction_graph(f, a.i)
    if a.assignment == "auto":
        sol = sat_solve(f)
        if sol is None:
            raise DomainFailure("formula is unsatisfiable")
        asg = dict(sol)
    else:
        asg = _parse_assignment(a.assignment, f.variables)
        if not satisfies(f, asg):
            raise DomainFailure("assignment does not satisfy the formula")
    emb = embed_auto(incidence_graph(f))
    rep = build_reduction_rep(arts, asg, emb)
    _write_bundle(a.out, arts.graph, rep, arts.to_dict())
    return 0


def _cmd_extract(a) -> int:
    from .sat_reduction import build_reduction_graph, extract_assignment
    f = parse_cnf(_read(a.cnf))
    arts = build_reduction_graph(f, a.i)
    asg = extract_assignment(parse_rep(_read(a.rep)), arts)
    print(",".join("%s=%d" % (k, int(v)) for k, v in sorted(asg.items())))
    return 0


def _cmd_embed(a) -> int:
    from .embedding import embed_auto, embed_orthogonal
    g = parse_graph(_read(a.graph))
    emb = embed_orthogonal(g, a.side, time_budget=a.time) if a.side else embed_auto(g, time_budget=a.time)
    _emit(write_embedding(emb), a.output)
    return 0


def _cmd_solve(a) -> int:
    from . import solvers
    if a.problem == "sat":
        f = parse_cnf(_read(a.input))
        sol = solvers.sat_solve(f)
        if sol is None:
            print("UNSAT")
            return 1
        print("SAT " + ",".join("%s=%d" % (k, int(v)) for k, v in sorted(dict(sol).items())))
        return 0
    g = parse_graph(_read(a.input))
    if a.problem == "mis":
        n, s = solvers.max_independent_set(g)
    elif a.problem == "vc":
        n, s = solvers.min_vertex_cover(g)
    elif a.problem == "cc":
        n, parts = solvers.min_clique_cover(g)
        s = [" ".join(p) for p in parts]
    elif a.problem == "tripack":
        n, tris = solvers.max_edge_disjoint_triangles(g)
        s = [" ".join(t) for t in tris]
    else:
        ok, col = solvers.is_k_colorable(g, a.k)
        if not ok:
            print("not %d-colorable" % a.k)
            return 1
        print("%d-colorable" % a.k)
        for v, c in sorted(col.items()):
            print("%s %d" % (v, c))
        return 0
    print(n)
    for x in s:
        print(x)
    return 0


def _cmd_search(a) -> int:
    from .solvers import SearchBudget, search_cpg_rep
    g = parse_graph(_read(a.graph))
    rep = search_cpg_rep(g, a.k, a.side, SearchBudget(wall_limit=a.time))
    _emit(write_rep(rep), a.output)
    return 0


def _cmd_render(a) -> int:
    text = _read(a.input)
    d = _load_json(text)
    obj = parse_embedding(text) if isinstance(d, dict) and "vertices" in d else parse_rep(text)
    opts = RenderOptions(unit_px=a.unit_px, show_labels=not a.no_labels, show_contacts=a.contacts)
    _emit(render_svg(obj, opts), a.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridpaths", description="Grid path representations of graphs.")
    sub = p.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="generate a gadget graph and its representation")
    b.add_argument("what", choices=["gk", "end-eater", "gv"])
    b.add_argument("--k", type=int, default=0)
    b.add_argument("--i", type=int, default=1)
    b.add_argument("--out", help="file prefix for .graph/.rep.json/.map.json")
    b.set_defaults(func=_cmd_build)

    v = sub.add_parser("verify", help="check a representation")
    v.add_argument("semantics", choices=["cpg", "epg"])
    v.add_argument("rep")
    v.add_argument("--graph")
    v.set_defaults(func=_cmd_verify)

    d = sub.add_parser("derive", help="graph of a representation")
    d.add_argument("rep")
    d.add_argument("--name", default="derived")
    d.add_argument("-o", "--output")
    d.set_defaults(func=_cmd_derive)

    s = sub.add_parser("stats", help="weights, contact classes and the triangle bound")
    s.add_argument("rep")
    s.set_defaults(func=_cmd_stats)

    n = sub.add_parser("normalize", help="normal form of a 0/1-bend CPG representation")
    n.add_argument("graph")
    n.add_argument("rep")
    n.add_argument("-o", "--output")
    n.set_defaults(func=_cmd_normalize)

    r = sub.add_parser("refine", help="halve the grid step")
    r.add_argument("rep")
    r.add_argument("--times", type=int, default=1)
    r.add_argument("-o", "--output")
    r.set_defaults(func=_cmd_refine)

    red = sub.add_parser("reduce", help="run a reduction")
    red.add_argument("problem", choices=["sat", "is", "cc", "3col"])
    red.add_argument("input", help="CNF file (sat) or graph file")
    red.add_argument("rep", nargs="?", help="representation (is, cc) or embedding (3col)")
    red.add_argument("--i", type=int, default=1)
    red.add_argument("--assignment", default="auto")
    red.add_argument("--out")
    red.set_defaults(func=_cmd_reduce)

    x = sub.add_parser("extract-assignment", help="read the truth assignment off a representation")
    x.add_argument("cnf")
    x.add_argument("rep")
    x.add_argument("--i", type=int, default=1)
    x.set_defaults(func=_cmd_extract)

    e = sub.add_parser("embed", help="orthogonal grid embedding")
    e.add_argument("graph")
    e.add_argument("--side", type=int)
    e.add_argument("--time", type=float, default=10.0)
    e.add_argument("-o", "--output")
    e.set_defaults(func=_cmd_embed)

    so = sub.add_parser("solve", help="exact solvers")
    so.add_argument("problem", choices=["mis", "vc", "cc", "kcol", "sat", "tripack"])
    so.add_argument("input")
    so.add_argument("--k", type=int, default=3)
    so.set_defaults(func=_cmd_solve)

    se = sub.add_parser("search-rep", help="bounded search for a k-bend CPG representation")
    se.add_argument("graph")
    se.add_argument("--k", type=int, default=0)
    se.add_argument("--side", type=int, default=8)
    se.add_argument("--time", type=float, default=60.0)
    se.add_argument("-o", "--output")
    se.set_defaults(func=_cmd_search)

    rd = sub.add_parser("render", help="SVG of a representation or embedding")
    rd.add_argument("input")
    rd.add_argument("-o", "--output")
    rd.add_argument("--unit-px", type=int, default=16)
    rd.add_argument("--no-labels", action="store_true")
    rd.add_argument("--contacts", action="store_true")
    rd.set_defaults(func=_cmd_render)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    from .embedding import DegreeTooHigh, EmbeddingBudgetExhausted, EmbeddingSearchExhausted
    from .np_reductions import EmbeddingInvalid
    from .representation import FourContactPresent, InvalidRepresentation, PreconditionViolated
    from .sat_reduction import AssignmentDoesNotSatisfy, InconsistentRValues
    from .solvers import BudgetExceeded, NotFoundInBox
    domain = (DomainFailure, InvalidRepresentation, FourContactPresent, EmbeddingInvalid, EmbeddingSearchExhausted,
              DegreeTooHigh, NotFoundInBox, AssignmentDoesNotSatisfy, InconsistentRValues)
    p = build_parser()
    try:
        a = p.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return a.func(a)
    except domain as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except PreconditionViolated as exc:
        print("precondition: %s" % exc, file=sys.stderr)
        return 1
    except (BudgetExceeded, EmbeddingBudgetExhausted) as exc:
        # no answer either way
        print("budget exhausted: %s" % exc, file=sys.stderr)
        return 3
    except (ParseError, SchemaError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
