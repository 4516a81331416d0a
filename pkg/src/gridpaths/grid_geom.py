"""Exact integer lattice geometry: points, axis-aligned segments and grid paths.

A grid path is stored as its endpoint/bend-point sequence.  Every coordinate is
an ``int``; there is no tolerance anywhere in this module.
"""

from __future__ import annotations

import enum
from typing import Iterable, Iterator, NamedTuple, Sequence, Union


class GridPoint(NamedTuple):
    x: int
    y: int


Segment = tuple[GridPoint, GridPoint]


class GeometryError(ValueError):
    """Base class for rejected point sequences."""


class EmptySequence(GeometryError):
    pass


class NonAxisAligned(GeometryError):
    pass


class ZeroLengthSegment(GeometryError):
    pass


class CollinearConsecutive(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


class PointClass(enum.Enum):
    ABSENT = "absent"
    ENDPOINT = "endpoint"
    INTERIOR = "interior"
    INTERIOR_BEND = "interior_bend"


class Overlap:
    """Marker value: two paths share a segment of positive length."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Overlap"


OVERLAP = Overlap()

Intersection = Union[frozenset, Overlap]


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _is_horizontal(s: Segment) -> bool:
    return s[0].y == s[1].y


def _seg_contains(s: Segment, q: tuple[int, int]) -> bool:
    (x1, y1), (x2, y2) = s
    qx, qy = q
    if y1 == y2:
        return qy == y1 and min(x1, x2) <= qx <= max(x1, x2)
    return qx == x1 and min(y1, y2) <= qy <= max(y1, y2)


def segment_intersection(s: Segment, t: Segment) -> Intersection:
    """Common lattice points of two axis-aligned segments, or OVERLAP."""
    sh, th = _is_horizontal(s), _is_horizontal(t)
    if sh == th:
        if sh:
            if s[0].y != t[0].y:
                return frozenset()
            lo = max(min(s[0].x, s[1].x), min(t[0].x, t[1].x))
            hi = min(max(s[0].x, s[1].x), max(t[0].x, t[1].x))
            if lo > hi:
                return frozenset()
            if lo < hi:
                return OVERLAP
            return frozenset({GridPoint(lo, s[0].y)})
        if s[0].x != t[0].x:
            return frozenset()
        lo = max(min(s[0].y, s[1].y), min(t[0].y, t[1].y))
        hi = min(max(s[0].y, s[1].y), max(t[0].y, t[1].y))
        if lo > hi:
            return frozenset()
        if lo < hi:
            return OVERLAP
        return frozenset({GridPoint(s[0].x, lo)})
    h, v = (s, t) if sh else (t, s)
    p = GridPoint(v[0].x, h[0].y)
    if _seg_contains(h, p) and _seg_contains(v, p):
        return frozenset({p})
    return frozenset()


class GridPath:
    """A validated rectilinear lattice path given by its sequence s(P).

    The sequence holds the two endpoints and, in between, every bend-point in
    traversal order.  Instances are immutable and hashable.
    """

    __slots__ = ("_seq", "_hash")

    def __init__(self, seq: Sequence[tuple[int, int]]):
        pts = tuple(GridPoint(int(p[0]), int(p[1])) for p in seq)
        _check_sequence(pts)
        self._seq = pts
        self._hash = hash(pts)

    @property
    def seq(self) -> tuple[GridPoint, ...]:
        return self._seq

    @property
    def endpoints(self) -> tuple[GridPoint, GridPoint]:
        return self._seq[0], self._seq[-1]

    @property
    def bend_points(self) -> tuple[GridPoint, ...]:
        return self._seq[1:-1]

    def segments(self) -> list[Segment]:
        s = self._seq
        return [(s[i], s[i + 1]) for i in range(len(s) - 1)]

    def bends(self) -> int:
        return len(self._seq) - 2

    def length(self) -> int:
        return sum(abs(a.x - b.x) + abs(a.y - b.y) for a, b in self.segments())

    def contains(self, q: tuple[int, int]) -> bool:
        return any(_seg_contains(s, q) for s in self.segments())

    def lattice_points(self) -> Iterator[GridPoint]:
        """Every lattice point on the path, in traversal order."""
        s = self._seq
        yield s[0]
        for a, b in self.segments():
            dx, dy = _sign(b.x - a.x), _sign(b.y - a.y)
            n = abs(b.x - a.x) + abs(b.y - a.y)
            for k in range(1, n + 1):
                yield GridPoint(a.x + k * dx, a.y + k * dy)

    def unit_edges(self) -> set[tuple[GridPoint, GridPoint]]:
        """Unit grid-edges covered by the path, each as a sorted point pair."""
        out = set()
        prev = None
        for p in self.lattice_points():
            if prev is not None:
                out.add((prev, p) if prev < p else (p, prev))
            prev = p
        return out

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self._seq]
        ys = [p.y for p in self._seq]
        return min(xs), min(ys), max(xs), max(ys)

    def reversed(self) -> "GridPath":
        return GridPath(self._seq[::-1])

    def scaled(self, factor: int) -> "GridPath":
        return GridPath([(p.x * factor, p.y * factor) for p in self._seq])

    def translated(self, dx: int, dy: int) -> "GridPath":
        return GridPath([(p.x + dx, p.y + dy) for p in self._seq])

    def __eq__(self, other) -> bool:
        return isinstance(other, GridPath) and self._seq == other._seq

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self._seq)

    def __repr__(self) -> str:
        return "GridPath(%s)" % [tuple(p) for p in self._seq]


def _check_sequence(pts: tuple[GridPoint, ...]) -> None:
    if len(pts) == 0:
        raise EmptySequence("empty point sequence")
    if len(pts) == 1:
        raise ZeroLengthSegment("a path needs two distinct points, got %r" % (pts[0],))
    for a, b in zip(pts, pts[1:]):
        if a.x != b.x and a.y != b.y:
            raise NonAxisAligned("segment %r-%r is not axis-aligned" % (a, b))
        if a == b:
            raise ZeroLengthSegment("repeated point %r" % (a,))
    for a, b, c in zip(pts, pts[1:], pts[2:]):
        if (a.y == b.y) == (b.y == c.y):
            raise CollinearConsecutive("collinear consecutive segments at %r" % (b,))
    segs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    for i in range(len(segs)):
        for j in range(i + 2, len(segs)):
            if segment_intersection(segs[i], segs[j]):
                raise SelfIntersecting("segments %d and %d meet" % (i, j))
    # perpendicular consecutive segments can only share their common bend


def path_from_sequence(points: Iterable[tuple[int, int]]) -> GridPath:
    return GridPath(list(points))


def bends(p: GridPath) -> int:
    return p.bends()


def classify_point(p: GridPath, q: tuple[int, int]) -> PointClass:
    q = GridPoint(*q)
    if q in p.endpoints:
        return PointClass.ENDPOINT
    if not p.contains(q):
        return PointClass.ABSENT
    if q in p.bend_points:
        return PointClass.INTERIOR_BEND
    return PointClass.INTERIOR


def path_intersection(p: GridPath, q: GridPath) -> Intersection:
    """All common lattice points of two paths, or OVERLAP."""
    bp, bq = p.bbox(), q.bbox()
    if bp[0] > bq[2] or bq[0] > bp[2] or bp[1] > bq[3] or bq[1] > bp[3]:
        return frozenset()
    pts: set[GridPoint] = set()
    for s in p.segments():
        for t in q.segments():
            r = segment_intersection(s, t)
            if r is OVERLAP:
                return OVERLAP
            pts |= r
    return frozenset(pts)


# -- dihedral symmetries of the lattice -------------------------------------

# (a, b, c, d) maps (x, y) -> (a*x + b*y, c*x + d*y)
SYMMETRIES: tuple[tuple[int, int, int, int], ...] = (
    (1, 0, 0, 1),
    (0, -1, 1, 0),
    (-1, 0, 0, -1),
    (0, 1, -1, 0),
    (-1, 0, 0, 1),
    (1, 0, 0, -1),
    (0, 1, 1, 0),
    (0, -1, -1, 0),
)


def apply_symmetry(m: tuple[int, int, int, int], p: tuple[int, int]) -> GridPoint:
    a, b, c, d = m
    return GridPoint(a * p[0] + b * p[1], c * p[0] + d * p[1])


def transform_path(p: GridPath, m: tuple[int, int, int, int], dx: int = 0, dy: int = 0) -> GridPath:
    out = []
    for q in p.seq:
        r = apply_symmetry(m, q)
        out.append((r.x + dx, r.y + dy))
    return GridPath(out)
