"""Curve operations: intersections, twists, arc systems and arc slides."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from fractions import Fraction

from . import geometry, systems
from .chart import ARC, SEG, PolygonPresentation
from .geometry import Realization
from .words import (
    ARCKIND,
    CLOSED,
    Anchor,
    CurveWord,
    WordError,
    arc_word,
    closed_word,
    reduce_free,
)


class CurveError(ValueError):
    pass


def reduce(c: CurveWord) -> CurveWord:
    """Minimal-crossing representative; empty closed output is inessential."""
    return c.reduced()


def geometric_intersection(c1: CurveWord, c2: CurveWord) -> int:
    if c1.surface != c2.surface:
        raise CurveError("curves live on different surfaces")
    return geometry.intersection_number(c1, c2)


def algebraic_class(c: CurveWord) -> Tuple[int, ...]:
    if c.kind != CLOSED:
        raise CurveError("homology classes are computed for closed curves")
    return c.reduced().algebraic_class()


def algebraic_intersection(c1: CurveWord, c2: CurveWord) -> int:
    if c1.surface != c2.surface:
        raise CurveError("curves live on different surfaces")
    return geometry.algebraic_intersection(c1, c2)


def is_embedded(c: CurveWord) -> bool:
    return geometry.is_embedded(c)


def dehn_twist(t: CurveWord, c: CurveWord, sign: int = +1) -> CurveWord:
    """Apply the twist along t to c.

    ``sign`` +1 is the right-handed twist with respect to the orientation
    of the surface the words are drawn on.  For curves tagged to the
    mirror side of a double the same geometric twist acts on pulled-back
    words with the opposite hand, so the effective sign flips; this is
    the only place the side tag changes a computation.
    """
    if t.surface != c.surface:
        raise CurveError("curves live on different surfaces")
    t = t.reduced()
    if t.kind != CLOSED or not t.letters:
        raise CurveError("twists need an essential closed core curve")
    if t.side != c.side:
        return c.reduced()
    effective = sign if t.side == +1 else -sign
    return geometry.dehn_twist(t, c, effective)


def dual_curves(surface: PolygonPresentation) -> List[CurveWord]:
    """Duals of the reference arcs: curve i meets arc i once and no other."""
    return [closed_word(surface, (i,)) for i in surface.arcs()]


# -- arc systems -----------------------------------------------------------


@dataclass(frozen=True)
class ArcSystemData:
    """An ordered maximal system of disjoint arcs cutting F to a disk."""

    surface: PolygonPresentation
    arcs: Tuple[CurveWord, ...]

    def __post_init__(self):
        for a in self.arcs:
            if a.kind != ARCKIND:
                raise CurveError("arc systems consist of arc words")
            if a.surface != self.surface:
                raise CurveError("arc on the wrong surface")

    def to_layered(self) -> systems.LayeredSystem:
        return systems.LayeredSystem(
            self.surface,
            [systems.LayeredArc((a.letters,), a.start, a.end) for a in self.arcs],
        )

    def canonical_key(self):
        """Invariant of the system up to isotopy (endpoints may slide)."""
        return systems.canonical_form(self.to_layered())

    def isotopic(self, other: "ArcSystemData") -> bool:
        return (
            self.surface == other.surface
            and self.canonical_key() == other.canonical_key()
        )


def normalize_anchor_indices(arcs: Sequence[CurveWord]) -> List[CurveWord]:
    """Compact anchor indices to 0..k-1 per segment, preserving order."""
    used: Dict[int, List[int]] = {}
    for a in arcs:
        for anc in (a.start, a.end):
            used.setdefault(anc.segment, []).append(anc.index)
    remap = {}
    for seg, idxs in used.items():
        if len(set(idxs)) != len(idxs):
            raise CurveError(f"duplicate anchor index on segment {seg}")
        for rank, idx in enumerate(sorted(idxs)):
            remap[(seg, idx)] = rank
    out = []
    for a in arcs:
        out.append(
            CurveWord(
                a.surface,
                ARCKIND,
                a.letters,
                start=Anchor(a.start.segment, remap[(a.start.segment, a.start.index)]),
                end=Anchor(a.end.segment, remap[(a.end.segment, a.end.index)]),
                side=a.side,
            )
        )
    return out


def reference_arc_system(surface: PolygonPresentation) -> ArcSystemData:
    """Parallel push-offs of the reference arcs, anchored beside them.

    The push-off of arc i runs just in front of its "+" side, from the
    tail of the segment before that slot to the head of the segment
    after it; its crossing word is empty.
    """
    raw = []
    n = len(surface.face_slots)
    for i in surface.arcs():
        slot = surface.slot_of_arc_side[(i, +1)]
        prev_tok = surface.face_slots[(slot - 1) % n]
        next_tok = surface.face_slots[(slot + 1) % n]
        assert prev_tok[0] == SEG and next_tok[0] == SEG
        start = Anchor(prev_tok[1], 10_000 + i)
        end = Anchor(next_tok[1], -10_000 + i)
        raw.append(CurveWord(surface, ARCKIND, (), start=start, end=end))
    return ArcSystemData(surface, tuple(normalize_anchor_indices(raw)))


def _cells_of_cut_polygon(surface: PolygonPresentation, real: Realization):
    """Cell structure of the polygon cut along all realized chords.

    Chords must be pairwise noncrossing.  Returns (cell_count,
    gap_cells, chord_sides) where gap_cells maps each boundary gap
    (between consecutive endpoint positions, cyclically) to its cell and
    chord_sides maps each chord to its (outer, inner) cells.
    """
    events = []
    for s in real.strands:
        for k in range(s.n_chords):
            p0, p1 = real.chord_endpoints(s.cid, k)
            events.append((p0, s.cid, k))
            events.append((p1, s.cid, k))
    events.sort()
    cell_count = 1
    stack = [0]
    opener = {}
    chord_sides = {}
    gap_cells = []
    for pos, cid, k in events:
        gap_cells.append((pos, stack[-1]))
        if (cid, k) not in opener:
            new = cell_count
            cell_count += 1
            chord_sides[(cid, k)] = (stack[-1], new)
            opener[(cid, k)] = new
            stack.append(new)
        else:
            if stack[-1] != opener[(cid, k)]:
                raise CurveError("chords cross; arcs are not disjoint")
            stack.pop()
    if stack != [0]:
        raise CurveError("unbalanced chord scan")
    return cell_count, gap_cells, chord_sides


def _cell_at(gap_cells, pos):
    """Cell of the boundary point at ``pos`` (not an endpoint position)."""
    cur = 0
    for p, cell_before in gap_cells:
        if pos < p:
            return cell_before
        cur = None
    # after the last event the scan has returned to the outer cell
    return 0


def _arc_interval_cells(surface, real, gap_cells):
    """For each reference arc: the cells along its two slots, in point order.

    Entry j of the returned list for arc i is a list of cells of the
    intervals between crossing points, aligned so that interval k on the
    "+" slot is glued to interval (n-k) on the "-" slot.
    """
    out = {}
    for i in surface.arcs():
        plus = surface.slot_of_arc_side[(i, +1)]
        minus = surface.slot_of_arc_side[(i, -1)]
        cells = {}
        for slot in (plus, minus):
            pts = sorted(
                pos
                for key, pos in real.positions.items()
                if slot <= pos < slot + 1
            )
            bounds = [Fraction(slot)] + pts + [Fraction(slot + 1)]
            mids = [
                (bounds[j] + bounds[j + 1]) / 2 for j in range(len(bounds) - 1)
            ]
            cells[slot] = [_cell_at(gap_cells, m) for m in mids]
        n = len(cells[plus]) - 1
        glued = []
        for k in range(n + 1):
            glued.append((cells[plus][k], cells[minus][n - k], i))
        out[i] = glued
    return out


def is_arc_system(surface: PolygonPresentation, arcs: Sequence[CurveWord]):
    """Check the defining properties; returns (ok, reason)."""
    m = surface.spec.arc_count
    if len(arcs) != m:
        return False, f"expected {m} arcs, got {len(arcs)}"
    arcs = [a.reduced() for a in arcs]
    for a in arcs:
        if a.kind != ARCKIND:
            return False, "not an arc"
        if a.surface != surface:
            return False, "arc on the wrong surface"
    try:
        real = Realization(surface, arcs)
    except WordError as e:
        return False, str(e)
    for x in range(m):
        for y in range(x, m):
            if real.crossings(x, y):
                if x == y:
                    return False, f"arc {x} is not embedded"
                return False, f"arcs {x} and {y} intersect"
    try:
        _, gap_cells, _ = _cells_of_cut_polygon(surface, real)
    except CurveError as e:
        return False, str(e)
    # glue cells across the reference arcs and check connectivity
    count, gap_cells, _ = _cells_of_cut_polygon(surface, real)
    parent = list(range(count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, glued in _arc_interval_cells(surface, real, gap_cells).items():
        for ca, cb, _ in glued:
            parent[find(ca)] = find(cb)
    roots = {find(c) for c in range(count)}
    if len(roots) != 1:
        return False, "complement is not a single disk"
    return True, "ok"


def dual_curves_of_system(system: ArcSystemData) -> List[CurveWord]:
    """Closed curves meeting each system arc once and the others not at all.

    Built by cutting the polygon along the system and walking cells: the
    dual of arc k crosses one of its chords and closes up through the
    complement, picking up reference-arc letters on the way.
    """
    surface = system.surface
    arcs = [a.reduced() for a in system.arcs]
    real = Realization(surface, arcs)
    count, gap_cells, chord_sides = _cells_of_cut_polygon(surface, real)
    glued = _arc_interval_cells(surface, real, gap_cells)

    # adjacency through reference arcs: neighbors[cell] = [(cell', letter)]
    neighbors: Dict[int, List[Tuple[int, int]]] = {c: [] for c in range(count)}
    for i, intervals in glued.items():
        for plus_cell, minus_cell, arc in intervals:
            neighbors[plus_cell].append((minus_cell, +arc))
            neighbors[minus_cell].append((plus_cell, -arc))

    def path_letters(src: int, dst: int) -> Tuple[int, ...]:
        if src == dst:
            return ()
        seen = {src: ()}
        frontier = [src]
        while frontier:
            nxt = []
            for cell in frontier:
                for other, letter in neighbors[cell]:
                    if other not in seen:
                        seen[other] = seen[cell] + (letter,)
                        nxt.append(other)
                        if other == dst:
                            return seen[dst]
            frontier = nxt
        raise CurveError("cut complement is disconnected")

    duals = []
    for cid, arc in enumerate(arcs):
        s = real.strands[cid]
        k = s.n_chords // 2
        before, inside = chord_sides[(cid, k)]
        letters = path_letters(inside, before)
        duals.append(closed_word(surface, letters))
    return duals


# -- arc slides ------------------------------------------------------------

SlideMove = systems.SlideMove


def arc_slide(system: ArcSystemData, move: SlideMove) -> ArcSystemData:
    """Band-sum one arc over another along a boundary interval."""
    try:
        layered = systems.apply_slide(system.to_layered(), move)
    except systems.SystemError_ as e:
        raise CurveError(str(e)) from e
    new_arcs = [
        CurveWord(
            system.surface, ARCKIND, c.words[0], start=c.start, end=c.end
        )
        for c in layered.curves
    ]
    ok, reason = is_arc_system(system.surface, new_arcs)
    if not ok:
        raise CurveError(f"slide produced an invalid system: {reason}")
    return ArcSystemData(system.surface, tuple(new_arcs))
