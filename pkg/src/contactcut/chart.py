"""Polygonal presentations of bounded surfaces and their doubles.

A surface F of genus p with b > 0 boundary circles carries a reference
system of m = 2p + b - 1 disjoint properly embedded arcs cutting it into
a single disk.  We keep that disk as the coordinate chart: a polygon with
4m boundary edges in which every arc appears twice (a "+" side and a "-"
side) and the 2m leftover edges are the boundary segments of F.  All
curve bookkeeping elsewhere in the package is phrased against this chart.

Conventions (see docs/conventions.md): the polygon boundary is read
counterclockwise; gluing the two sides of an arc identifies them with
reversed parameterization, which is what makes the glued surface
orientable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

ARC = "a"
SEG = "s"


class ChartError(ValueError):
    """Raised for boundary words that do not describe a valid surface."""


@dataclass(frozen=True)
class SurfaceSpec:
    """Genus and boundary count, with the derived arc count."""

    genus: int
    boundary_count: int

    def __post_init__(self):
        if self.genus < 0:
            raise ChartError("genus must be nonnegative")
        if self.boundary_count < 1:
            raise ChartError("a bounded surface needs at least one boundary circle")
        if self.arc_count < 1:
            raise ChartError(
                "no arc system on a disk: need 2*genus + boundaries - 1 >= 1"
            )

    @property
    def arc_count(self) -> int:
        return 2 * self.genus + self.boundary_count - 1

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count


@dataclass(frozen=True)
class Vertex:
    """A glued polygon corner, i.e. an endpoint of a reference arc on the boundary.

    ``ccw_letter`` is the signed crossing a boundary point sweeps up when it
    is dragged counterclockwise across this vertex; dragging clockwise sweeps
    the inverse.
    """

    arc: int
    ccw_letter: int


@dataclass(frozen=True)
class CircleStep:
    """One segment of a boundary circle plus the vertex at its ccw end."""

    segment: int
    vertex: Vertex


class PolygonPresentation:
    """A bounded surface as a polygon with glued arc edges.

    ``word`` is the counterclockwise boundary word: a tuple of tokens,
    ``(ARC, i, sign)`` for the two sides of arc i (1-based, sign +1/-1) and
    ``(SEG, k)`` for boundary segment k (1-based).  Arc and segment tokens
    must alternate, every arc side and segment must appear exactly once, and
    the glued-up surface must be connected with the genus and boundary count
    announced by ``spec``.
    """

    def __init__(self, spec: SurfaceSpec, word: tuple):
        self.spec = spec
        self.word = tuple(word)
        self._validate_shape()
        self._build_gluing()
        self._validate_topology()

    # -- construction ----------------------------------------------------

    @staticmethod
    def canonical(genus: int, boundary_count: int) -> "PolygonPresentation":
        """The standard chart: handle blocks a b a' b' first, then one
        hole-connecting arc per extra boundary circle, segments numbered in
        traversal order."""
        spec = SurfaceSpec(genus, boundary_count)
        word = []
        seg = 1
        arc = 1

        def emit_seg():
            nonlocal seg
            word.append((SEG, seg))
            seg += 1

        for _ in range(genus):
            i, j = arc, arc + 1
            arc += 2
            for tok in ((ARC, i, +1), (ARC, j, +1), (ARC, i, -1), (ARC, j, -1)):
                word.append(tok)
                emit_seg()
        for _ in range(boundary_count - 1):
            i = arc
            arc += 1
            word.append((ARC, i, +1))
            emit_seg()
            word.append((ARC, i, -1))
            emit_seg()
        return PolygonPresentation(spec, tuple(word))

    # -- validation ------------------------------------------------------

    def _validate_shape(self):
        m = self.spec.arc_count
        if len(self.word) != 4 * m:
            raise ChartError(f"boundary word must have {4 * m} edges")
        arcs_seen = {}
        segs_seen = set()
        for pos, tok in enumerate(self.word):
            if tok[0] == ARC:
                _, i, sign = tok
                if not (1 <= i <= m) or sign not in (+1, -1):
                    raise ChartError(f"bad arc token {tok}")
                if (i, sign) in arcs_seen:
                    raise ChartError(f"arc side {tok} repeated")
                arcs_seen[(i, sign)] = pos
            elif tok[0] == SEG:
                _, k = tok
                if not (1 <= k <= 2 * m) or k in segs_seen:
                    raise ChartError(f"bad segment token {tok}")
                segs_seen.add(k)
            else:
                raise ChartError(f"unknown token {tok}")
        if len(arcs_seen) != 2 * m or len(segs_seen) != 2 * m:
            raise ChartError("every arc side and segment must appear exactly once")
        for pos, tok in enumerate(self.word):
            nxt = self.word[(pos + 1) % len(self.word)]
            if tok[0] == nxt[0]:
                raise ChartError("arc edges and segments must alternate")
        self._arc_pos = {key: pos for key, pos in arcs_seen.items()}
        self._seg_pos = {}
        for pos, tok in enumerate(self.word):
            if tok[0] == SEG:
                self._seg_pos[tok[1]] = pos

    def _build_gluing(self):
        """Identify polygon corners under the arc gluings and walk the boundary.

        Corner q sits between edge q and edge q+1.  Arc side + at position
        q is glued to side - at position r with reversed parameterization,
        so corner q-1 (its start) meets corner r (the end of the - side) and
        corner q meets corner r-1.
        """
        n = len(self.word)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        m = self.spec.arc_count
        for i in range(1, m + 1):
            q = self._arc_pos[(i, +1)]
            r = self._arc_pos[(i, -1)]
            union((q - 1) % n, r % n)
            union(q % n, (r - 1) % n)
        self._corner_class = [find(q) for q in range(n)]
        self._vertex_ids = sorted(set(self._corner_class))

        # Boundary walk: from each segment, cross the vertex at its ccw end
        # to the next segment.  The edge after a segment is the arc side
        # (i, e) starting at that corner; its partner corner is the end of
        # side (i, -e), and the next boundary edge there is a segment.
        nxt = {}
        vert_after = {}
        for k, pos in self._seg_pos.items():
            tok = self.word[(pos + 1) % n]
            _, i, e = tok
            r = self._arc_pos[(i, -e)]
            nxt_seg_tok = self.word[(r + 1) % n]
            if nxt_seg_tok[0] != SEG:
                raise ChartError("alternation broken at gluing")
            nxt[k] = nxt_seg_tok[1]
            # Dragging a boundary point ccw out of segment k exits through
            # the corner touching side (i, e): it sweeps across arc i,
            # arriving on the e side.  Letter +i means "arrive on +".
            vert_after[k] = Vertex(arc=i, ccw_letter=i if e == +1 else -i)
        self._next_seg = nxt
        self._vertex_after_seg = vert_after

    def _validate_topology(self):
        m = self.spec.arc_count
        n = len(self.word)
        # Euler characteristic of the glued surface: one face, 3m edges
        # (m arcs + 2m segments), and the glued corner classes as vertices.
        v = len(self._vertex_ids)
        chi = v - 3 * m + 1
        if chi != self.spec.euler:
            raise ChartError(
                f"Euler characteristic {chi} does not match spec {self.spec.euler}"
            )
        if len(self.boundary_circles) != self.spec.boundary_count:
            raise ChartError(
                f"boundary walk found {len(self.boundary_circles)} circles, "
                f"expected {self.spec.boundary_count}"
            )
        # Connectivity: arcs plus segments must connect all corners; the
        # polygon itself is connected, so the glued surface always is.

    # -- derived structure -------------------------------------------------

    @cached_property
    def boundary_circles(self) -> tuple:
        """Boundary circles as tuples of CircleStep, ccw along the boundary."""
        seen = set()
        circles = []
        for k in sorted(self._seg_pos):
            if k in seen:
                continue
            steps = []
            cur = k
            while True:
                seen.add(cur)
                steps.append(CircleStep(cur, self._vertex_after_seg[cur]))
                cur = self._next_seg[cur]
                if cur == k:
                    break
            circles.append(tuple(steps))
        return tuple(circles)

    @cached_property
    def circle_of_segment(self) -> dict:
        out = {}
        for ci, circle in enumerate(self.boundary_circles):
            for step in circle:
                out[step.segment] = ci
        return out

    @cached_property
    def face_slots(self) -> tuple:
        """The polygon boundary as slot descriptors, ccw.

        Each entry is ``("arc", i, sign)`` or ``("seg", k)``; the index into
        this tuple is the slot id used by the realization machinery.
        """
        return self.word

    @cached_property
    def slot_of_arc_side(self) -> dict:
        return dict(self._arc_pos)

    @cached_property
    def slot_of_segment(self) -> dict:
        return dict(self._seg_pos)

    def arcs(self) -> range:
        return range(1, self.spec.arc_count + 1)

    def segments(self) -> range:
        return range(1, 2 * self.spec.arc_count + 1)

    def segments_between(
        self, seg_from: int, seg_to: int, direction: int
    ) -> tuple:
        """Walk the boundary circle from seg_from to seg_to.

        ``direction`` +1 walks ccw, -1 cw.  Returns the tuple of signed
        crossing letters swept by a point dragged along that walk (one per
        vertex passed).  Raises if the segments sit on different circles.
        """
        if self.circle_of_segment[seg_from] != self.circle_of_segment[seg_to]:
            raise ChartError("segments lie on different boundary circles")
        circle = self.boundary_circles[self.circle_of_segment[seg_from]]
        idx = {step.segment: j for j, step in enumerate(circle)}
        j = idx[seg_from]
        target = idx[seg_to]
        letters = []
        while j != target or (not letters and seg_from != seg_to):
            if direction == +1:
                letters.append(circle[j].vertex.ccw_letter)
                j = (j + 1) % len(circle)
            else:
                j = (j - 1) % len(circle)
                letters.append(-circle[j].vertex.ccw_letter)
            if len(letters) > len(circle):
                raise ChartError("boundary walk failed to terminate")
        return tuple(letters)

    def boundary_parallel_letters(self, circle_index: int) -> tuple:
        """Crossing word of a parallel push-in of a whole boundary circle."""
        circle = self.boundary_circles[circle_index]
        return tuple(step.vertex.ccw_letter for step in circle)

    def __repr__(self):
        return (
            f"PolygonPresentation(genus={self.spec.genus}, "
            f"boundaries={self.spec.boundary_count})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, PolygonPresentation)
            and self.spec == other.spec
            and self.word == other.word
        )

    def __hash__(self):
        return hash((self.spec, self.word))


class DoubledSurface:
    """The closed double of a bounded surface along its boundary.

    The two sides are mirror copies of the half chart; the dividing set is
    the image of the boundary circles.  Curve data on the minus side is
    always stored pulled back through the tautological mirror map, so both
    sides speak the half chart's coordinates.  The mirror map reverses
    orientation: a right-handed twist on the minus side acts on pulled-back
    words as a left-handed one.
    """

    def __init__(self, half: PolygonPresentation):
        self.half = half

    @property
    def genus(self) -> int:
        return self.half.spec.arc_count

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus

    @property
    def dividing_circle_count(self) -> int:
        return self.half.spec.boundary_count

    def __repr__(self):
        return f"DoubledSurface(genus={self.genus}, divides={self.dividing_circle_count})"

    def __eq__(self, other):
        return isinstance(other, DoubledSurface) and self.half == other.half

    def __hash__(self):
        return hash(("double", self.half))


def make_bounded_surface(genus: int, boundary_count: int) -> PolygonPresentation:
    """Canonical chart for the (genus, boundary_count) surface."""
    return PolygonPresentation.canonical(genus, boundary_count)


def double(half: PolygonPresentation) -> DoubledSurface:
    return DoubledSurface(half)
