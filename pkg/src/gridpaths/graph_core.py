"""Labeled simple graphs and the graph transformations used by the reductions.

Vertices are strings.  Iteration is always label-lexicographic so that every
construction built on top of this module is reproducible byte for byte.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping


class GraphError(ValueError):
    pass


class CountOutOfRange(GraphError):
    pass


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def edge_label(u: str, v: str) -> str:
    a, b = edge_key(u, v)
    return "%s|%s" % (a, b)


class LabeledGraph:
    """Finite simple undirected graph over string labels.

    ``tags`` maps a label to a set of role strings (``"anchor"``,
    ``"terminal:positive"``...).  Tags ride along but are not part of equality.
    """

    __slots__ = ("name", "_adj", "tags")

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple[str, str]] = (),
                 name: str = "g", tags: Mapping[str, Iterable[str]] | None = None):
        adj: dict[str, set[str]] = {}
        for v in vertices:
            _check_label(v)
            adj.setdefault(v, set())
        for u, v in edges:
            if u == v:
                raise GraphError("loop at %r" % u)
            if u not in adj or v not in adj:
                raise GraphError("edge %r-%r has an endpoint that is not a vertex" % (u, v))
            adj[u].add(v)
            adj[v].add(u)
        self.name = name
        self._adj = {v: frozenset(adj[v]) for v in sorted(adj)}
        self.tags = {k: frozenset(t) for k, t in (tags or {}).items() if k in self._adj}

    # -- basic queries ------------------------------------------------------

    @property
    def vertices(self) -> list[str]:
        return list(self._adj)

    @property
    def edges(self) -> list[tuple[str, str]]:
        out = []
        for u in self._adj:
            for v in sorted(self._adj[u]):
                if u < v:
                    out.append((u, v))
        return out

    def neighbors(self, v: str) -> list[str]:
        return sorted(self._adj[v])

    def adjacency(self) -> dict[str, frozenset]:
        return dict(self._adj)

    def has_edge(self, u: str, v: str) -> bool:
        return u in self._adj and v in self._adj[u]

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def __eq__(self, other) -> bool:
        return isinstance(other, LabeledGraph) and self._adj == other._adj

    def __hash__(self):
        return hash(tuple(self.edges)) ^ hash(tuple(self._adj))

    def __repr__(self) -> str:
        return "LabeledGraph(%r, |V|=%d, |E|=%d)" % (self.name, len(self), self.num_edges())

    def with_tags(self, tags: Mapping[str, Iterable[str]]) -> "LabeledGraph":
        merged = {k: set(v) for k, v in self.tags.items()}
        for k, v in tags.items():
            merged.setdefault(k, set()).update(v)
        return LabeledGraph(self._adj, self.edges, name=self.name, tags=merged)

    def tagged(self, tag: str) -> list[str]:
        return [v for v in self._adj if tag in self.tags.get(v, ())]

    def subgraph(self, keep: Iterable[str]) -> "LabeledGraph":
        keep = set(keep)
        return LabeledGraph(
            [v for v in self._adj if v in keep],
            [(u, v) for u, v in self.edges if u in keep and v in keep],
            name=self.name,
            tags=self.tags,
        )

    def relabeled(self, mapping: Mapping[str, str]) -> "LabeledGraph":
        f = lambda v: mapping.get(v, v)
        return LabeledGraph(
            [f(v) for v in self._adj],
            [(f(u), f(v)) for u, v in self.edges],
            name=self.name,
            tags={f(k): t for k, t in self.tags.items()},
        )

    def diff(self, other: "LabeledGraph") -> dict[str, list]:
        """Human-readable difference, used in failure messages."""
        sv, ov = set(self._adj), set(other._adj)
        se, oe = set(self.edges), set(other.edges)
        return {
            "missing_vertices": sorted(ov - sv),
            "extra_vertices": sorted(sv - ov),
            "missing_edges": sorted(oe - se),
            "extra_edges": sorted(se - oe),
        }


def _check_label(v: str) -> None:
    if not isinstance(v, str) or not v or any(c.isspace() for c in v):
        raise GraphError("vertex labels must be non-empty strings without whitespace: %r" % (v,))


def union(*graphs: LabeledGraph, extra_edges: Iterable[tuple[str, str]] = (), name: str = "g") -> LabeledGraph:
    verts: list[str] = []
    edges: list[tuple[str, str]] = []
    tags: dict[str, set] = {}
    for g in graphs:
        verts.extend(g.vertices)
        edges.extend(g.edges)
        for k, t in g.tags.items():
            tags.setdefault(k, set()).update(t)
    edges.extend(extra_edges)
    return LabeledGraph(verts, edges, name=name, tags=tags)


def prefixed(g: LabeledGraph, prefix: str) -> LabeledGraph:
    return g.relabeled({v: prefix + v for v in g.vertices})


# -- named small graphs -----------------------------------------------------

def complete_graph(n: int, prefix: str = "") -> LabeledGraph:
    vs = ["%s%d" % (prefix, i) for i in range(1, n + 1)]
    return LabeledGraph(vs, combinations(vs, 2), name="K%d" % n)


def cycle_graph(n: int, prefix: str = "") -> LabeledGraph:
    vs = ["%s%d" % (prefix, i) for i in range(1, n + 1)]
    return LabeledGraph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)], name="C%d" % n)


def path_graph(n: int, prefix: str = "") -> LabeledGraph:
    vs = ["%s%d" % (prefix, i) for i in range(1, n + 1)]
    return LabeledGraph(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)], name="P%d" % n)


def complete_bipartite(m: int, n: int) -> LabeledGraph:
    a = ["a%d" % i for i in range(1, m + 1)]
    b = ["b%d" % i for i in range(1, n + 1)]
    return LabeledGraph(a + b, [(x, y) for x in a for y in b], name="K%d,%d" % (m, n))


def diamond(prefix: str = "") -> LabeledGraph:
    """K4 minus the edge between its two degree-2 vertices ``s`` and ``t``."""
    vs = [prefix + c for c in "swxt"]
    s, w, x, t = vs
    return LabeledGraph(vs, [(s, w), (s, x), (w, x), (w, t), (x, t)], name="diamond")


def petersen() -> LabeledGraph:
    outer = ["o%d" % i for i in range(5)]
    inner = ["i%d" % i for i in range(5)]
    edges = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
    edges += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
    edges += [(outer[i], inner[i]) for i in range(5)]
    return LabeledGraph(outer + inner, edges, name="petersen")


# -- transformations --------------------------------------------------------

def subdivision_label(u: str, v: str, i: int) -> str:
    return "%s#%d" % (edge_label(u, v), i)


def k_subdivide(g: LabeledGraph, k: int) -> LabeledGraph:
    """Replace every edge uv by a path u, uv#1, ..., uv#k, v."""
    if k < 1:
        raise GraphError("k must be positive")
    verts = list(g.vertices)
    edges = []
    for u, v in g.edges:
        chain = [u] + [subdivision_label(u, v, i) for i in range(1, k + 1)] + [v]
        verts.extend(chain[1:-1])
        edges.extend(zip(chain, chain[1:]))
    return LabeledGraph(verts, edges, name="%s-sub%d" % (g.name, k), tags=g.tags)


def line_graph(g: LabeledGraph) -> LabeledGraph:
    verts = [edge_label(u, v) for u, v in g.edges]
    edges = []
    for x in g.vertices:
        inc = [edge_label(x, y) for y in g.neighbors(x)]
        edges.extend(combinations(inc, 2))
    return LabeledGraph(verts, edges, name="L(%s)" % g.name)


def diamond_labels(u: str, v: str, j: int) -> tuple[str, str, str]:
    """Labels of the two middle vertices and the far degree-2 vertex of diamond j."""
    base = "%s|%s@%d" % (u, v, j)
    return base + "a", base + "b", base + "z"


def diamond_chain_substitute(g: LabeledGraph, bend_counts: Mapping) -> LabeledGraph:
    """Replace each edge uv by a chain of k+1 diamonds followed by one edge to v.

    ``bend_counts`` is keyed by ordered pairs ``(u, v)``; the chain starts at
    the first member.  Unordered keys (frozensets) start at the smaller label.
    """
    counts: dict[tuple[str, str], int] = {}
    for key, k in bend_counts.items():
        u, v = tuple(key) if not isinstance(key, frozenset) else sorted(key)
        if not isinstance(k, int) or not 0 <= k <= 4:
            raise CountOutOfRange("bend count %r for edge %s-%s" % (k, u, v))
        counts[edge_key(u, v)] = (u, v, k)
    verts = list(g.vertices)
    edges = []
    for a, b in g.edges:
        if (a, b) not in counts:
            raise GraphError("no bend count for edge %s-%s" % (a, b))
        u, v, k = counts[(a, b)]
        prev = u
        for j in range(1, k + 2):
            wa, wb, z = diamond_labels(u, v, j)
            verts += [wa, wb, z]
            edges += [(prev, wa), (prev, wb), (wa, wb), (wa, z), (wb, z)]
            prev = z
        edges.append((prev, v))
    return LabeledGraph(verts, edges, name="%s-diamonds" % g.name)


# -- structural queries -----------------------------------------------------

def triangles(g: LabeledGraph) -> list[tuple[str, str, str]]:
    adj = g.adjacency()
    out = []
    for u in g.vertices:
        for v in sorted(adj[u]):
            if v <= u:
                continue
            for w in sorted(adj[u] & adj[v]):
                if w > v:
                    out.append((u, v, w))
    return out


def is_triangle_free(g: LabeledGraph) -> bool:
    return not triangles(g)


def is_k4_free(g: LabeledGraph) -> bool:
    adj = g.adjacency()
    for u, v, w in triangles(g):
        if any(x > w for x in adj[u] & adj[v] & adj[w]):
            return False
    return True


def max_degree(g: LabeledGraph) -> int:
    return max((g.degree(v) for v in g.vertices), default=0)


def degree_sequence(g: LabeledGraph) -> list[int]:
    return sorted((g.degree(v) for v in g.vertices), reverse=True)


def connected_components(g: LabeledGraph) -> list[list[str]]:
    seen: set[str] = set()
    comps = []
    for s in g.vertices:
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def complement(g: LabeledGraph) -> LabeledGraph:
    vs = g.vertices
    return LabeledGraph(vs, [(u, v) for u, v in combinations(vs, 2) if not g.has_edge(u, v)], name="co-" + g.name)


def to_text(g: LabeledGraph) -> str:
    lines = ["graph %s" % g.name]
    lines += ["v %s" % v for v in g.vertices]
    lines += ["e %s %s" % e for e in g.edges]
    return "\n".join(lines) + "\n"
