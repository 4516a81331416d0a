"""Exact oracles: SAT, independent set / vertex cover, clique cover, colouring,
edge-disjoint triangle packing and bounded-box CPG representation search.

Everything here is exact.  Budgets turn blow-ups into ``BudgetExceeded``
instead of wrong answers.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .graph_core import LabeledGraph, triangles


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 10_000_000
    wall_limit: float = 60.0

    def __post_init__(self):
        if self.node_limit <= 0 or self.wall_limit <= 0:
            raise ValueError("budget limits must be positive")


class _Meter:
    __slots__ = ("nodes", "limit", "deadline")

    def __init__(self, budget: SearchBudget | None, node_limit: int | None = None):
        b = budget or SearchBudget()
        self.nodes = 0
        self.limit = node_limit if node_limit is not None else b.node_limit
        self.deadline = time.monotonic() + b.wall_limit

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExceeded("node limit %d reached" % self.limit)
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("wall-clock limit reached")


# -- SAT ----------------------------------------------------------------------

def sat_solve(formula, budget: SearchBudget | None = None):
    """DPLL with unit propagation.  Returns a dict var -> bool, or None (UNSAT).

    ``formula`` needs ``variables`` and ``clauses``; a literal is a
    ``(variable, polarity)`` pair.
    """
    meter = _Meter(budget)
    clauses = [tuple(c) for c in formula.clauses]
    if any(len(c) == 0 for c in clauses):
        return None
    order = list(formula.variables)

    def simplify(cls, var, val):
        out = []
        for c in cls:
            if (var, val) in c:
                continue
            r = tuple(l for l in c if l[0] != var)
            if not r:
                return None
            out.append(r)
        return out

    def dpll(cls, assign):
        meter.tick()
        while True:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            assign = {**assign, unit[0]: unit[1]}
            cls = simplify(cls, *unit)
            if cls is None:
                return None
        if not cls:
            return assign
        var = next(v for v in order if v not in assign and any(l[0] == v for c in cls for l in c))
        for val in (True, False):
            nxt = simplify(cls, var, val)
            if nxt is not None:
                r = dpll(nxt, {**assign, var: val})
                if r is not None:
                    return r
        return None

    r = dpll(clauses, {})
    if r is None:
        return None
    return {v: r.get(v, True) for v in order}


def satisfies(formula, assignment: Mapping) -> bool:
    return all(any(assignment[v] == pol for v, pol in c) for c in formula.clauses)


# -- independent set ------------------------------------------------------------

class _Fold:
    __slots__ = ("n",)
    _count = itertools.count()

    def __init__(self):
        self.n = next(_Fold._count)

    def __repr__(self):
        return "<fold %d>" % self.n


def _components(adj: Mapping) -> list[set]:
    seen, out = set(), []
    for s in adj:
        if s in seen:
            continue
        comp, stack = {s}, [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        out.append(comp)
    return out


def _remove(adj: dict, vs: Iterable) -> None:
    for v in list(vs):
        if v in adj:
            for u in adj.pop(v):
                if u in adj:
                    adj[u].discard(v)


def _clique_cover_bound(adj: Mapping) -> int:
    cliques: list[list] = []
    for v in sorted(adj, key=lambda x: -len(adj[x])):
        for c in cliques:
            if all(u in adj[v] for u in c):
                c.append(v)
                break
        else:
            cliques.append([v])
    return len(cliques)


def _reduce(adj: dict, taken: list, folds: list) -> None:
    """Degree 0/1/2 reductions applied to exhaustion (in place)."""
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if v not in adj:
                continue
            d = len(adj[v])
            if d == 0:
                taken.append(v)
                del adj[v]
                changed = True
            elif d == 1:
                taken.append(v)
                _remove(adj, [v, *adj[v]])
                changed = True
            elif d == 2:
                u, w = adj[v]
                if w in adj[u]:
                    taken.append(v)
                    _remove(adj, [v, u, w])
                else:
                    nv = _Fold()
                    nb = (adj[u] | adj[w]) - {v, u, w}
                    _remove(adj, [v, u, w])
                    adj[nv] = set(nb)
                    for x in nb:
                        adj[x].add(nv)
                    folds.append((nv, v, u, w))
                changed = True


def _unfold(sol: set, taken: list, folds: list) -> set:
    sol = set(sol) | set(taken)
    for nv, v, u, w in reversed(folds):
        if nv in sol:
            sol.discard(nv)
            sol |= {u, w}
        else:
            sol.add(v)
    return sol


def _mis(adj: dict, lb: int, meter: _Meter):
    """A maximum independent set of size > lb, or None if none exists."""
    meter.tick()
    adj = {v: set(n) for v, n in adj.items()}
    taken: list = []
    folds: list = []
    _reduce(adj, taken, folds)
    base = len(taken) + len(folds)
    if not adj:
        return _unfold(set(), taken, folds) if base > lb else None
    if base + _clique_cover_bound(adj) <= lb:
        return None
    comps = _components(adj)
    if len(comps) > 1:
        comps.sort(key=len)
        acc: set = set()
        for comp in comps[:-1]:
            acc |= _mis({v: adj[v] & comp for v in comp}, -1, meter)
        last = comps[-1]
        rest = _mis({v: adj[v] & last for v in last}, lb - base - len(acc), meter)
        if rest is None:
            return None
        return _unfold(acc | rest, taken, folds)
    v = max(adj, key=lambda x: (len(adj[x]), repr(x)))
    need = lb - base
    best = None
    a = {x: n - adj[v] - {v} for x, n in adj.items() if x != v and x not in adj[v]}
    r = _mis(a, need - 1, meter)
    if r is not None:
        best = r | {v}
        need = len(best)
    b = {x: n - {v} for x, n in adj.items() if x != v}
    r = _mis(b, need, meter)
    if r is not None:
        best = r
    if best is None:
        return None
    return _unfold(best, taken, folds)


def max_independent_set_adj(adj: Mapping[Hashable, Iterable], node_limit: int | None = None,
                            budget: SearchBudget | None = None) -> set:
    meter = _Meter(budget, node_limit)
    work = {v: set(n) for v, n in adj.items()}
    return _mis(work, -1, meter)


def _check_independent(g: LabeledGraph, s: Iterable[str]) -> None:
    s = list(s)
    for u, v in itertools.combinations(s, 2):
        if g.has_edge(u, v):
            raise AssertionError("witness is not independent")


def max_independent_set(g: LabeledGraph, budget: SearchBudget | None = None) -> tuple[int, list[str]]:
    s = max_independent_set_adj(g.adjacency(), budget=budget)
    _check_independent(g, s)
    return len(s), sorted(s)


def min_vertex_cover(g: LabeledGraph, budget: SearchBudget | None = None) -> tuple[int, list[str]]:
    a, s = max_independent_set(g, budget)
    cover = sorted(set(g.vertices) - set(s))
    if a + len(cover) != len(g):
        raise AssertionError("alpha + beta != |V|")
    for u, v in g.edges:
        if u not in cover and v not in cover:
            raise AssertionError("witness is not a cover")
    return len(cover), cover


def is_independent_set(g: LabeledGraph, s: Iterable[str]) -> bool:
    s = list(s)
    return all(not g.has_edge(u, v) for u, v in itertools.combinations(s, 2))


# -- clique cover -----------------------------------------------------------------

def maximal_cliques(g: LabeledGraph) -> list[frozenset]:
    adj = g.adjacency()
    out: list[frozenset] = []

    def bk(r, p, x):
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(g.vertices), set())
    return sorted(out, key=lambda c: (-len(c), sorted(c)))


def min_clique_cover(g: LabeledGraph, budget: SearchBudget | None = None) -> tuple[int, list[list[str]]]:
    """Exact minimum cover of V by cliques, searched over maximal cliques.
    The returned witness is a partition (overlaps trimmed)."""
    meter = _Meter(budget)
    cliques = maximal_cliques(g)
    adj = g.adjacency()
    covering = {v: [c for c in cliques if v in c] for v in g.vertices}
    best: list = [list(cliques) if cliques else []]

    def lower(unc: set) -> int:
        # pairwise non-adjacent uncovered vertices each need their own clique
        indep = []
        for v in sorted(unc, key=lambda x: len(covering[x])):
            if all(u not in adj[v] for u in indep):
                indep.append(v)
        return len(indep)

    memo: dict = {}

    def split(unc: frozenset) -> list[frozenset]:
        left, parts = set(unc), []
        while left:
            stack = [left.pop()]
            comp = set(stack)
            while stack:
                for u in adj[stack.pop()]:
                    if u in left:
                        left.discard(u)
                        comp.add(u)
                        stack.append(u)
            parts.append(frozenset(comp))
        return parts

    def solve(unc: frozenset, ub: int):
        # cheapest cover of unc using fewer than ub cliques, or None
        if not unc:
            return []
        if unc in memo:
            got = memo[unc]
            return got if got is not None and len(got) < ub else None
        meter.tick()
        parts = split(unc)
        if len(parts) > 1:
            out: list = []
            parts.sort(key=len)
            need = [lower(set(p)) for p in parts]
            for i, part in enumerate(parts):
                sub = solve(part, ub - len(out) - sum(need[i + 1:]))
                if sub is None:
                    return None
                out += sub
            if len(out) >= ub:
                return None
            memo[unc] = out
            return out
        # an option that contains every other option of some vertex is safe
        for x in sorted(unc):
            opts = [c & unc for c in covering[x]]
            top = max(opts, key=len)
            if all(o <= top for o in opts):
                sub = solve(unc - top, ub - 1)
                if sub is None:
                    return None
                out = [next(c for c in covering[x] if c & unc == top)] + sub
                memo[unc] = out
                return out
        if lower(set(unc)) >= ub:
            return None
        v = min(unc, key=lambda x: (len(covering[x]), x))
        best_here = None
        for c in sorted(covering[v], key=lambda c: (-len(c & unc), sorted(c))):
            sub = solve(unc - c, ub - 1)
            if sub is not None:
                best_here = [c] + sub
                ub = len(best_here)
        if best_here is not None:
            memo[unc] = best_here
        return best_here

    got = solve(frozenset(g.vertices), len(best[0]) + 1)
    if got is not None:
        best[0] = got
    seen: set = set()
    parts = []
    for c in best[0]:
        part = sorted(set(c) - seen)
        seen |= set(c)
        if part:
            parts.append(part)
    return len(parts), parts


# -- colouring ----------------------------------------------------------------------

def is_k_colorable(g: LabeledGraph, k: int, budget: SearchBudget | None = None) -> tuple[bool, dict | None]:
    """DSatur-ordered backtracking.  The uncoloured part is split into
    components that are solved independently; failed (component, boundary
    colouring) pairs are cached."""
    meter = _Meter(budget)
    adj = g.adjacency()
    color: dict[str, int] = {}
    failed: set = set()

    def components(left: set) -> list[frozenset]:
        left, out = set(left), []
        while left:
            stack = [min(left)]
            left.discard(stack[0])
            comp = set(stack)
            while stack:
                for u in adj[stack.pop()]:
                    if u in left:
                        left.discard(u)
                        comp.add(u)
                        stack.append(u)
            out.append(frozenset(comp))
        return sorted(out, key=lambda c: (len(c), min(c)))

    def solve(comp: frozenset) -> bool:
        meter.tick()
        boundary = tuple(sorted((u, color[u]) for v in comp for u in adj[v] if u in color))
        key = (comp, boundary)
        if key in failed:
            return False
        v = max(sorted(comp), key=lambda x: (len({color[u] for u in adj[x] if u in color}), len(adj[x])))
        banned = {color[u] for u in adj[v] if u in color}
        choices = [c for c in range(k) if c not in banned]
        if not boundary:
            choices = choices[:1]
        for c in choices:
            color[v] = c
            rest = comp - {v}
            done = []
            ok = True
            for part in components(rest):
                if solve(part):
                    done.append(part)
                else:
                    ok = False
                    break
            if ok:
                return True
            for part in done:
                for u in part:
                    color.pop(u, None)
            del color[v]
        failed.add(key)
        return False

    if k <= 0:
        return (len(g) == 0, {} if len(g) == 0 else None)
    for part in components(set(g.vertices)):
        if not solve(part):
            return False, None
    return True, dict(color)


def all_colorings(g: LabeledGraph, k: int) -> Iterable[dict]:
    """Every proper k-colouring (no symmetry breaking); tiny graphs only."""
    vs = g.vertices
    for combo in itertools.product(range(k), repeat=len(vs)):
        col = dict(zip(vs, combo))
        if all(col[u] != col[v] for u, v in g.edges):
            yield col


# -- triangle packing ---------------------------------------------------------------

def max_edge_disjoint_triangles(g: LabeledGraph, budget: SearchBudget | None = None) -> tuple[int, list]:
    tri = triangles(g)
    conflict: dict[int, set[int]] = {i: set() for i in range(len(tri))}
    by_edge: dict[tuple, list[int]] = {}
    for i, t in enumerate(tri):
        for e in itertools.combinations(t, 2):
            by_edge.setdefault(e, []).append(i)
    for ids in by_edge.values():
        for i, j in itertools.combinations(ids, 2):
            conflict[i].add(j)
            conflict[j].add(i)
    s = max_independent_set_adj(conflict, budget=budget)
    return len(s), sorted(tri[i] for i in s)


# -- bounded-box representation search ------------------------------------------------

class NotFoundInBox(Exception):
    pass


def _paths_through(side: int, k: int, anchor: tuple[int, int] | None):
    """All paths with at most k bends inside [0, side)^2, optionally through anchor."""
    from .grid_geom import GridPath, GeometryError

    out = []
    pts = [(x, y) for x in range(side) for y in range(side)]
    seen = set()

    def extend(seq, horiz, bends_left):
        x, y = seq[-1]
        for d in (-1, 1):
            for step in range(1, side):
                nx, ny = (x + d * step, y) if horiz else (x, y + d * step)
                if not (0 <= nx < side and 0 <= ny < side):
                    break
                nseq = seq + [(nx, ny)]
                try:
                    p = GridPath(nseq)
                except GeometryError:
                    continue
                key = p.seq if p.seq <= p.seq[::-1] else p.seq[::-1]
                if key not in seen:
                    seen.add(key)
                    if anchor is None or p.contains(anchor):
                        out.append(p)
                if bends_left > 0:
                    extend(nseq, not horiz, bends_left - 1)

    for s in pts:
        for horiz in (True, False):
            extend([s], horiz, k)
    return out


def search_cpg_rep(g: LabeledGraph, k: int, grid_side: int, budget: SearchBudget | None = None):
    """Backtracking placement of one <=k-bend path per vertex in a
    grid_side x grid_side box.  Returns a Representation; raises
    NotFoundInBox or BudgetExceeded.

    Boxes are tried from small to large: a witness in a smaller box is a
    witness in the requested one, and small boxes are far cheaper."""
    from .representation import Representation

    if grid_side <= 0:
        raise ValueError("grid_side must be positive")
    meter = _Meter(budget)
    if len(g) == 0:
        return Representation({})
    for side in range(1, grid_side + 1):
        rep = _search_box(g, k, side, meter)
        if rep is not None:
            return rep
    raise NotFoundInBox("no %d-bend CPG representation in a %dx%d box" % (k, grid_side, grid_side))


def _search_box(g: LabeledGraph, k: int, grid_side: int, meter: _Meter):
    from .grid_geom import OVERLAP, SYMMETRIES, apply_symmetry, path_intersection
    from .representation import Representation, derive_graph

    allp = _paths_through(grid_side, k, None)
    allp.sort(key=lambda p: (p.bends(), p.length(), p.seq))
    by_point: dict = {}
    for p in allp:
        for q in p.lattice_points():
            by_point.setdefault(q, []).append(p)

    def canon(p):
        # images under the symmetries of the box itself (centred, doubled)
        c = grid_side - 1
        imgs = []
        for m in SYMMETRIES:
            q = tuple(apply_symmetry(m, (2 * s.x - c, 2 * s.y - c)) for s in p.seq)
            imgs.append(min(q, q[::-1]))
        return min(imgs)

    # vertex order: BFS from a max-degree vertex so that every later vertex
    # has a placed neighbour whenever possible
    adj = g.adjacency()
    order: list[str] = []
    for comp_start in sorted(g.vertices, key=lambda v: (-len(adj[v]), v)):
        if comp_start in order:
            continue
        queue = [comp_start]
        order.append(comp_start)
        while queue:
            x = queue.pop(0)
            for y in sorted(adj[x], key=lambda v: (-len(adj[v]), v)):
                if y not in order:
                    order.append(y)
                    queue.append(y)

    placed: dict[str, object] = {}

    def compatible(v, p) -> bool:
        for u, q in placed.items():
            r = path_intersection(p, q)
            if r is OVERLAP:
                return False
            if u in adj[v]:
                if not r:
                    return False
                if any(t not in p.endpoints and t not in q.endpoints for t in r):
                    return False
            elif r:
                return False
        return True

    def candidates(v):
        nbrs = [u for u in adj[v] if u in placed]
        if not placed:
            seen = set()
            for p in allp:
                c = canon(p)
                if c not in seen:
                    seen.add(c)
                    yield p
            return
        if not nbrs:
            yield from allp
            return
        q = placed[nbrs[0]]
        seen = set()
        for t in q.lattice_points():
            for p in by_point.get(t, ()):
                if p not in seen:
                    seen.add(p)
                    yield p

    def rec(i: int) -> bool:
        meter.tick()
        if i == len(order):
            return True
        v = order[i]
        for p in candidates(v):
            meter.tick()
            if compatible(v, p):
                placed[v] = p
                if rec(i + 1):
                    return True
                del placed[v]
        return False

    if not rec(0):
        return None
    rep = Representation(placed)
    if derive_graph(rep) != g:
        raise AssertionError("search produced a representation of a different graph")
    return rep
