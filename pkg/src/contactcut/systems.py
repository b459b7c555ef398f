"""Layered arc systems: shared machinery for arc systems and cut systems.

A layered system is a family of disjoint curves, each recorded as one or
more parallel words (layers) running between two shared boundary
anchors.  Plain arc systems on F use one layer; contact cut systems on
the double use two (the half-surface piece and the mirror piece, both in
half-chart coordinates).

Two kinds of moves act on a system:

* gauge moves: an endpoint slides along the boundary across a
  reference-arc endpoint.  This is an isotopy; every layer picks up the
  same crossing letter.  Endpoints of disjoint curves can never pass
  one another, so a move is legal only for the endpoint nearest the
  vertex it crosses.

* slides: one curve is replaced by its band sum over another along a
  boundary interval; this changes the system (a handleslide), and on a
  double it is exactly a contact handleslide when performed on both
  layers at once, which is what sharing the anchors encodes.

Isotopy classes of systems are gauge orbits.  Canonical forms search
the orbit for the length-minimal states, allowing a small detour slack
above the minimum, and pick the lexicographically smallest
serialization.  See docs/conventions.md for the sweep-letter rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .chart import PolygonPresentation
from .geometry import boundary_strand_compare
from .words import Anchor, CurveWord, WordError, reduce_free


class SystemError_(ValueError):
    pass


def _invrev(w: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(-l for l in reversed(w))


@dataclass(frozen=True)
class LayeredArc:
    """Parallel words through the surface layers, from start to end anchor."""

    words: Tuple[Tuple[int, ...], ...]
    start: Anchor
    end: Anchor

    def reversed(self) -> "LayeredArc":
        return LayeredArc(
            tuple(_invrev(w) for w in self.words), self.end, self.start
        )

    def reduced(self) -> "LayeredArc":
        return LayeredArc(
            tuple(reduce_free(w) for w in self.words), self.start, self.end
        )

    def length(self) -> int:
        return sum(len(w) for w in self.words)

    def oriented_min(self):
        a = (self.words, self.start, self.end)
        r = self.reversed()
        b = (r.words, r.start, r.end)
        return min(a, b)


class LayeredSystem:
    """Immutable snapshot of a layered system with normalized anchors."""

    def __init__(self, surface: PolygonPresentation, curves: Sequence[LayeredArc]):
        self.surface = surface
        self.curves = tuple(normalize_layered(curves))
        lens = {len(c.words) for c in self.curves}
        if len(lens) > 1:
            raise SystemError_("curves disagree on layer count")
        self.layers = lens.pop() if lens else 1

    def state_key(self):
        return tuple((c.words, c.start, c.end) for c in self.curves)

    def total_length(self) -> int:
        return sum(c.length() for c in self.curves)

    def canonical_serialization(self):
        keyed = sorted(
            (c.oriented_min(), i) for i, c in enumerate(self.curves)
        )
        return tuple(k for k, _ in keyed)

    def __eq__(self, other):
        return (
            isinstance(other, LayeredSystem)
            and self.surface == other.surface
            and self.state_key() == other.state_key()
        )

    def __hash__(self):
        return hash((self.surface, self.state_key()))


def normalize_layered(curves: Sequence[LayeredArc]) -> List[LayeredArc]:
    """Reduce all words and compact anchor indices to 0..k-1 per segment."""
    curves = [c.reduced() for c in curves]
    per_seg: Dict[int, List[int]] = {}
    for c in curves:
        for a in (c.start, c.end):
            per_seg.setdefault(a.segment, []).append(a.index)
    remap = {}
    for seg, idxs in per_seg.items():
        if len(set(idxs)) != len(idxs):
            raise SystemError_(f"two endpoints share index on segment {seg}")
        for rank, idx in enumerate(sorted(idxs)):
            remap[(seg, idx)] = rank
    out = []
    for c in curves:
        out.append(
            LayeredArc(
                c.words,
                Anchor(c.start.segment, remap[(c.start.segment, c.start.index)]),
                Anchor(c.end.segment, remap[(c.end.segment, c.end.index)]),
            )
        )
    return out


# -- gauge moves -----------------------------------------------------------


def _segment_load(system: LayeredSystem) -> Dict[int, int]:
    load: Dict[int, int] = {}
    for c in system.curves:
        for a in (c.start, c.end):
            load[a.segment] = load.get(a.segment, 0) + 1
    return load


def _circle_context(surface, segment):
    ci = surface.circle_of_segment[segment]
    circle = surface.boundary_circles[ci]
    pos = {step.segment: j for j, step in enumerate(circle)}
    return circle, pos[segment]


def gauge_moves(system: LayeredSystem):
    """All legal single-vertex endpoint moves, as (curve, end, direction)."""
    load = _segment_load(system)
    out = []
    for ci, c in enumerate(system.curves):
        for end, a in ((0, c.start), (1, c.end)):
            k = load[a.segment]
            if a.index == k - 1:
                out.append((ci, end, +1))
            if a.index == 0:
                out.append((ci, end, -1))
    return out


def apply_gauge(system: LayeredSystem, ci: int, end: int, direction: int) -> LayeredSystem:
    """Slide one endpoint across the adjacent reference-arc endpoint.

    Moving with the boundary orientation sweeps the vertex's ccw letter
    onto every layer at the moving end; moving against it sweeps the
    inverse.  The endpoint lands at the far extreme of the next segment.
    """
    surface = system.surface
    c = system.curves[ci]
    a = (c.start, c.end)[end]
    load = _segment_load(system)
    circle, j = _circle_context(surface, a.segment)
    if direction == +1:
        if a.index != load[a.segment] - 1:
            raise SystemError_("endpoint is not nearest the vertex ahead")
        letter = circle[j].vertex.ccw_letter
        nxt = circle[(j + 1) % len(circle)].segment
        new_anchor = Anchor(nxt, -1)  # cw extreme; normalization compacts
    else:
        if a.index != 0:
            raise SystemError_("endpoint is not nearest the vertex behind")
        jprev = (j - 1) % len(circle)
        letter = -circle[jprev].vertex.ccw_letter
        nxt = circle[jprev].segment
        new_anchor = Anchor(nxt, load.get(nxt, 0) + 1)  # ccw extreme
    curves = list(system.curves)
    if end == 1:
        words = tuple(reduce_free(w + (letter,)) for w in c.words)
        moved = LayeredArc(words, c.start, new_anchor)
    else:
        words = tuple(reduce_free((-letter,) + w) for w in c.words)
        moved = LayeredArc(words, new_anchor, c.end)
    curves[ci] = moved
    return LayeredSystem(surface, curves)


# -- canonical forms -------------------------------------------------------

_CANON_CACHE: Dict[tuple, tuple] = {}
_CANON_LIMIT = 200_000
_CIRCLE_TABLES: Dict[PolygonPresentation, tuple] = {}


def _circle_tables(surface):
    """Per-segment crossing tables: (ccw_next, ccw_letter, cw_next, cw_letter)."""
    if surface in _CIRCLE_TABLES:
        return _CIRCLE_TABLES[surface]
    ccw_next, ccw_letter, cw_next, cw_letter = {}, {}, {}, {}
    for circle in surface.boundary_circles:
        n = len(circle)
        for j, step in enumerate(circle):
            nxt = circle[(j + 1) % n]
            ccw_next[step.segment] = nxt.segment
            ccw_letter[step.segment] = step.vertex.ccw_letter
            cw_next[nxt.segment] = step.segment
            cw_letter[nxt.segment] = -step.vertex.ccw_letter
    tables = (ccw_next, ccw_letter, cw_next, cw_letter)
    _CIRCLE_TABLES[surface] = tables
    return tables


def _fast_orbit(surface, state, slack):
    """Explore the gauge orbit of a raw state tuple.

    A raw state is a tuple of (words, (seg, rank), (seg, rank)) triples
    with ranks compacted per segment.  Returns the set of states within
    ``slack`` of the minimal total length discovered.
    """
    ccw_next, ccw_letter, cw_next, cw_letter = _circle_tables(surface)

    def length(st):
        return sum(len(w) for c in st for w in c[0])

    def renumber(curves):
        per_seg: Dict[int, List[int]] = {}
        for words, s, e in curves:
            per_seg.setdefault(s[0], []).append(s[1])
            per_seg.setdefault(e[0], []).append(e[1])
        rank = {
            (seg, idx): r
            for seg, idxs in per_seg.items()
            for r, idx in enumerate(sorted(idxs))
        }
        return tuple(
            (words, (s[0], rank[(s[0], s[1])]), (e[0], rank[(e[0], e[1])]))
            for words, s, e in curves
        )

    def moves(st):
        load: Dict[int, int] = {}
        for words, s, e in st:
            load[s[0]] = load.get(s[0], 0) + 1
            load[e[0]] = load.get(e[0], 0) + 1
        out = []
        for ci, (words, s, e) in enumerate(st):
            for end, a in ((0, s), (1, e)):
                if a[1] == load[a[0]] - 1:
                    out.append((ci, end, +1, a))
                if a[1] == 0:
                    out.append((ci, end, -1, a))
        return out

    def apply(st, ci, end, direction, a):
        seg = a[0]
        if direction == +1:
            letter = ccw_letter[seg]
            new = (ccw_next[seg], -1)
        else:
            letter = cw_letter[seg]
            new = (cw_next[seg], 10**6)
        words, s, e = st[ci]
        if end == 1:
            ws = tuple(
                w[:-1] if w and w[-1] == -letter else w + (letter,) for w in words
            )
            cur = (ws, s, new)
        else:
            ws = tuple(
                w[1:] if w and w[0] == letter else (-letter,) + w for w in words
            )
            cur = (ws, new, e)
        return renumber(st[:ci] + (cur,) + st[ci + 1 :])

    state = renumber(state)
    best = length(state)
    seen = {state}
    frontier = [state]
    while frontier:
        nxt = []
        for st in frontier:
            for ci, end, direction, a in moves(st):
                st2 = apply(st, ci, end, direction, a)
                if st2 in seen:
                    continue
                l2 = length(st2)
                if l2 > best + slack:
                    continue
                if l2 < best:
                    best = l2
                seen.add(st2)
                nxt.append(st2)
        frontier = nxt
        if len(seen) > _CANON_LIMIT:
            raise SystemError_("gauge orbit exceeded the canonicalization cap")
    return seen, best


def _serialize_raw(st):
    out = []
    for words, s, e in st:
        fwd = (words, Anchor(*s), Anchor(*e))
        rwords = tuple(_invrev(w) for w in words)
        rev = (rwords, Anchor(*e), Anchor(*s))
        out.append(min(fwd, rev))
    return tuple(sorted(out))


def canonical_form(system: LayeredSystem, slack: int = 4):
    """Gauge-orbit canonical form: lex-min serialization at minimal length.

    Explores the orbit breadth-first, discarding states longer than the
    best seen plus ``slack``; the slack lets the search walk over small
    length barriers between minimal states.  All states discovered share
    the answer, which is memoized for them all.
    """
    raw = tuple(
        (c.words, (c.start.segment, c.start.index), (c.end.segment, c.end.index))
        for c in system.curves
    )
    root_key = (system.surface, raw)
    if root_key in _CANON_CACHE:
        return _CANON_CACHE[root_key]
    seen, best = _fast_orbit(system.surface, raw, slack)
    answer = min(
        _serialize_raw(st)
        for st in seen
        if sum(len(w) for c in st for w in c[0]) == best
    )
    for st in seen:
        _CANON_CACHE[(system.surface, st)] = answer
    return answer


def gauge_equivalent(a: LayeredSystem, b: LayeredSystem, slack: int = 4) -> bool:
    if a.surface != b.surface:
        return False
    return canonical_form(a, slack) == canonical_form(b, slack)


# -- slides ----------------------------------------------------------------


@dataclass(frozen=True)
class SlideMove:
    """Slide curve ``slid`` over curve ``over`` along a boundary interval.

    The interval runs from the chosen end of the slid curve, along the
    boundary in ``direction`` (+1 with the orientation), to the chosen
    end of the target curve; its interior may pass reference-arc
    endpoints but no system endpoint.
    """

    slid: int
    slid_end: int
    over: int
    over_end: int
    direction: int


def _interval_letters(surface, system: LayeredSystem, move: SlideMove):
    slid = system.curves[move.slid]
    over = system.curves[move.over]
    a = (slid.start, slid.end)[move.slid_end]
    b = (over.start, over.end)[move.over_end]
    if surface.circle_of_segment[a.segment] != surface.circle_of_segment[b.segment]:
        raise SystemError_("slide interval endpoints on different circles")
    occupied: Dict[int, List[Tuple[int, int, int]]] = {}
    for cj, c in enumerate(system.curves):
        for w, anc in ((0, c.start), (1, c.end)):
            occupied.setdefault(anc.segment, []).append((anc.index, cj, w))
    for lst in occupied.values():
        lst.sort()
    circle, j = _circle_context(surface, a.segment)
    letters: List[int] = []
    seg, idx = a.segment, a.index
    for _ in range(2 * len(circle) + len(system.curves) * 2 + 4):
        if move.direction == +1:
            ahead = [x for x in occupied.get(seg, []) if x[0] > idx]
            ahead.sort()
        else:
            ahead = [x for x in occupied.get(seg, []) if x[0] < idx]
            ahead.sort(reverse=True)
        if ahead:
            _, cj, w = ahead[0]
            if cj == move.over and w == move.over_end:
                return tuple(letters)
            raise SystemError_("slide interval obstructed by another endpoint")
        if move.direction == +1:
            letters.append(circle[j].vertex.ccw_letter)
            j = (j + 1) % len(circle)
            seg = circle[j].segment
            idx = -1
        else:
            j = (j - 1) % len(circle)
            letters.append(-circle[j].vertex.ccw_letter)
            seg = circle[j].segment
            idx = max((x[0] for x in occupied.get(seg, [])), default=-1) + 1
    raise SystemError_("slide interval walk failed to terminate")


def apply_slide(system: LayeredSystem, move: SlideMove) -> LayeredSystem:
    """Band-sum the slid curve over the target along the interval.

    The slid curve keeps its far endpoint; its free end lands beside the
    far end of the target, on the side the parallel copy approaches
    from, which is decided by comparing the two strands' routes.
    """
    if move.slid == move.over:
        raise SystemError_("cannot slide a curve over itself")
    surface = system.surface
    hug = _interval_letters(surface, system, move)
    slid = system.curves[move.slid]
    over = system.curves[move.over]

    s_or = slid if move.slid_end == 1 else slid.reversed()
    # s_or runs far -> chosen end
    o_or = over if move.over_end == 0 else over.reversed()
    # o_or runs chosen end -> far
    new_words = tuple(
        reduce_free(ws + hug + wo) for ws, wo in zip(s_or.words, o_or.words)
    )
    far_i = s_or.start
    far_j = o_or.end

    new_ray = (_invrev(new_words[0]), far_i)
    over_ray = (_invrev(o_or.words[0]), o_or.start)
    side = boundary_strand_compare(surface, far_j.segment, new_ray, over_ray)
    offset = 0 if side < 0 else 1

    def bump(anc: Anchor) -> Anchor:
        if anc.segment == far_j.segment and anc.index >= far_j.index + offset:
            return Anchor(anc.segment, anc.index + 1)
        return anc

    curves = []
    for cj, c in enumerate(system.curves):
        if cj == move.slid:
            continue
        curves.append((cj, LayeredArc(c.words, bump(c.start), bump(c.end))))
    new_end = Anchor(far_j.segment, far_j.index + offset)
    new_arc = LayeredArc(new_words, bump(far_i), new_end)
    rebuilt: List[Optional[LayeredArc]] = [None] * len(system.curves)
    for cj, c in curves:
        rebuilt[cj] = c
    rebuilt[move.slid] = new_arc
    return LayeredSystem(surface, [c for c in rebuilt if c is not None])


def all_slide_moves(system: LayeredSystem):
    """Enumerate the legal slides, deterministically ordered."""
    out = []
    for si in range(len(system.curves)):
        for se in (0, 1):
            for oi in range(len(system.curves)):
                if oi == si:
                    continue
                for oe in (0, 1):
                    for d in (+1, -1):
                        mv = SlideMove(si, se, oi, oe, d)
                        try:
                            _interval_letters(system.surface, system, mv)
                        except SystemError_:
                            continue
                        out.append(mv)
    return out
