"""Chord realizations of curve families in the polygon chart.

Reduced words already pin down isotopy classes; to intersect curves,
twist along them, or place arc endpoints we need an actual transverse
picture.  Every curve is drawn as a family of chords of the polygon.
The only freedom is the order of crossing points along each reference
arc, and that order is resolved the way geodesics would resolve it: two
strands through the same arc are compared by walking their itineraries
away from the arc on both sides until they split apart, and nesting
then dictates who sits where.  When the two one-sided verdicts disagree
the strands are forced to cross once; we break the tie on the "+" side,
which plants the crossing in the "-" face.

Coordinates are exact: boundary positions are Fractions and chord
endpoints live on the parabola (p, p^2), which is convex, so two chords
cross iff their endpoints interleave and all intersection parameters
come out rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Tuple

from .chart import ARC, SEG, PolygonPresentation
from .words import (
    ARCKIND,
    CLOSED,
    Anchor,
    CurveWord,
    WordError,
    reduce_cyclic,
    reduce_free,
)

SLOT_TOKEN = "slot"
ANCHOR_TOKEN = "anchor"


def in_slot(surface, letter: int) -> int:
    i, e = abs(letter), (1 if letter > 0 else -1)
    return surface.slot_of_arc_side[(i, e)]


def out_slot(surface, letter: int) -> int:
    i, e = abs(letter), (1 if letter > 0 else -1)
    return surface.slot_of_arc_side[(i, -e)]


def partner_slot(surface, slot: int) -> int:
    tok = surface.face_slots[slot]
    assert tok[0] == ARC
    _, i, e = tok
    return surface.slot_of_arc_side[(i, -e)]


class Strand:
    """One reduced curve prepared for realization.

    Chords are indexed so that chord k of a closed word runs from
    out(letter k) to in(letter k+1); chord k of an arc word sits before
    letter k, with chord 0 leaving the start anchor and chord n entering
    the end anchor.
    """

    def __init__(self, cid: int, word: CurveWord):
        if word.kind == CLOSED:
            word = word.reduced()
            if not word.letters:
                raise WordError("cannot realize an inessential closed curve")
        else:
            word = word.reduced()
        self.cid = cid
        self.word = word
        self.letters = word.letters
        self.closed = word.kind == CLOSED
        self.n_chords = len(self.letters) if self.closed else len(self.letters) + 1

    def chord_end_slot(self, surface, k: int, which: int):
        """Slot (or anchor) holding end ``which`` (0=start, 1=end) of chord k."""
        if self.closed:
            if which == 0:
                return (SLOT_TOKEN, out_slot(surface, self.letters[k]))
            return (SLOT_TOKEN, in_slot(surface, self.letters[(k + 1) % len(self.letters)]))
        if which == 0:
            if k == 0:
                a = self.word.start
                return (ANCHOR_TOKEN, surface.slot_of_segment[a.segment], a.index)
            return (SLOT_TOKEN, out_slot(surface, self.letters[k - 1]))
        if k == self.n_chords - 1:
            a = self.word.end
            return (ANCHOR_TOKEN, surface.slot_of_segment[a.segment], a.index)
        return (SLOT_TOKEN, in_slot(surface, self.letters[k]))

    def ray(self, surface, k: int, which: int):
        """Tokens seen walking away from end ``which`` of chord k.

        which=1 walks backward along the curve, which=0 forward; either
        way the first token is the far end of chord k itself.
        """
        step = -1 if which == 1 else +1
        j = k
        while True:
            tok = self.chord_end_slot(surface, j, 1 - which)
            yield tok
            if tok[0] == ANCHOR_TOKEN:
                return
            j += step
            if self.closed:
                j %= len(self.letters)
            elif not (0 <= j < self.n_chords):
                raise WordError("ray walked off an arc without hitting its anchor")

    def crossing_points(self) -> List[Tuple[int, int]]:
        """(letter index, arc) for each reference-arc crossing."""
        return [(j, abs(l)) for j, l in enumerate(self.letters)]

    def plus_visit(self, j: int) -> Tuple[int, int]:
        """Chord end sitting on slot (arc,+) for the crossing at letter j."""
        l = self.letters[j]
        if self.closed:
            n = len(self.letters)
            return ((j - 1) % n, 1) if l > 0 else (j, 0)
        return (j, 1) if l > 0 else (j + 1, 0)

    def minus_visit(self, j: int) -> Tuple[int, int]:
        l = self.letters[j]
        if self.closed:
            n = len(self.letters)
            return (j, 0) if l > 0 else ((j - 1) % n, 1)
        return (j + 1, 0) if l > 0 else (j, 1)


def _ray_compare(surface, sa: Strand, va, sb: Strand, vb, start_slot: int) -> int:
    """-1 when strand a's visit precedes strand b's ccw within start_slot.

    Nesting rule at the first divergence: the strand whose next stop is
    ccw-nearer after the current slot tucks in later along it.  Shared
    anchors on one segment compare by index, reversed once for the chord
    between.
    """
    ra = sa.ray(surface, *va)
    rb = sb.ray(surface, *vb)
    limit = 2 * (len(sa.letters) + len(sb.letters)) + 8
    cur = start_slot
    n_slots = len(surface.face_slots)
    for _ in range(limit):
        ta = next(ra)
        tb = next(rb)
        if ta == tb:
            cur = partner_slot(surface, ta[1])
            continue
        slot_a, slot_b = ta[1], tb[1]
        if slot_a == slot_b:
            # both rays terminate on the same segment: order by anchor
            # index there, reversed across the connecting chords
            ia, ib = ta[2], tb[2]
            return -1 if ia > ib else 1
        for d in range(1, n_slots + 1):
            probe = (cur + d) % n_slots
            if probe == slot_a:
                return 1
            if probe == slot_b:
                return -1
        raise WordError("divergence targets not on the face")
    raise WordError(
        "strands do not diverge; curves are parallel (compare classes first)"
    )


@dataclass(frozen=True)
class Crossing:
    cid_a: int
    chord_a: int
    t_a: Fraction
    cid_b: int
    chord_b: int
    t_b: Fraction
    sign: int


class Realization:
    """Exact chord picture of a family of reduced words on one face."""

    def __init__(self, surface: PolygonPresentation, words: Sequence[CurveWord]):
        self.surface = surface
        self.strands = [Strand(cid, w) for cid, w in enumerate(words)]
        for salt in range(32):
            try:
                self._place(salt)
                return
            except _DegenerateChords:
                continue
        raise WordError("could not find a nondegenerate chord placement")

    # -- placement -------------------------------------------------------

    def _order_arc_points(self, arc: int):
        """Order all crossing points along one reference arc.

        The "+"-side rays alone decide: when two strands are disjoint the
        plus-side nesting is their true order, and when they are forced
        to cross once either order realizes the minimum, with the plus
        verdict planting the crossing in the minus-side face.  The minus
        slot is then mirrored from this order rather than sorted on its
        own, which keeps the two sides of the arc consistent.
        """
        surface = self.surface
        plus = surface.slot_of_arc_side[(arc, +1)]
        points = []
        for s in self.strands:
            for j, a in s.crossing_points():
                if a == arc:
                    points.append((s, j))

        def cmp(pa, pb):
            (sa, ja), (sb, jb) = pa, pb
            return _ray_compare(
                surface, sa, sa.plus_visit(ja), sb, sb.plus_visit(jb), plus
            )

        points.sort(key=cmp_to_key(cmp))
        return points

    def _place(self, salt: int):
        surface = self.surface
        positions: Dict[Tuple[int, int, int], Fraction] = {}

        def put(cid, chord, which, slot, rank, count):
            base = Fraction(rank + 1, count + 1)
            wiggle = Fraction(1, (count + 3) * (1009 + 97 * slot + 13 * rank + salt))
            positions[(cid, chord, which)] = slot + base + wiggle

        for arc in surface.arcs():
            plus = surface.slot_of_arc_side[(arc, +1)]
            minus = surface.slot_of_arc_side[(arc, -1)]
            points = self._order_arc_points(arc)
            n = len(points)
            for rank, (s, j) in enumerate(points):
                pv = s.plus_visit(j)
                mv = s.minus_visit(j)
                put(s.cid, pv[0], pv[1], plus, rank, n)
                put(s.cid, mv[0], mv[1], minus, n - 1 - rank, n)

        # anchors: order along each segment is part of the data
        by_segment: Dict[int, list] = {}
        for s in self.strands:
            if s.closed:
                continue
            for k, which in ((0, 0), (s.n_chords - 1, 1)):
                tok = s.chord_end_slot(surface, k, which)
                if tok[0] == ANCHOR_TOKEN:
                    _, slot, idx = tok
                    by_segment.setdefault(slot, []).append((idx, s.cid, k, which))
        for slot, items in by_segment.items():
            items.sort()
            for rank in range(len(items) - 1):
                if items[rank][0] == items[rank + 1][0]:
                    raise WordError(
                        f"two anchors share index {items[rank][0]} on one segment"
                    )
            for rank, (_idx, cid, k, which) in enumerate(items):
                put(cid, k, which, slot, rank, len(items))

        self.positions = positions
        self._crossing_cache: Dict[Tuple[int, int], List[Crossing]] = {}
        # force all pairs now so a degenerate placement is caught while
        # the salt retry loop can still fix it
        for ca in range(len(self.strands)):
            for cb in range(ca, len(self.strands)):
                self.crossings(ca, cb)

    # -- geometry --------------------------------------------------------

    def chord_endpoints(self, cid: int, k: int) -> Tuple[Fraction, Fraction]:
        return (
            self.positions[(cid, k, 0)],
            self.positions[(cid, k, 1)],
        )

    @staticmethod
    def _point(p: Fraction) -> Tuple[Fraction, Fraction]:
        return (p, p * p)

    def _chord_crossings(self, ca: int, cb: int) -> List[Crossing]:
        sa, sb = self.strands[ca], self.strands[cb]
        out = []
        for ka in range(sa.n_chords):
            a1, a2 = self.chord_endpoints(ca, ka)
            kb_range = range(sb.n_chords)
            for kb in kb_range:
                if ca == cb and kb <= ka:
                    continue
                b1, b2 = self.chord_endpoints(cb, kb)
                lo, hi = min(a1, a2), max(a1, a2)
                inside = (lo < b1 < hi) != (lo < b2 < hi)
                if not inside:
                    continue
                p1, p2 = self._point(a1), self._point(a2)
                q1, q2 = self._point(b1), self._point(b2)
                d = (p2[0] - p1[0], p2[1] - p1[1])
                e = (q2[0] - q1[0], q2[1] - q1[1])
                denom = d[0] * e[1] - d[1] * e[0]
                if denom == 0:
                    raise _DegenerateChords()
                w = (q1[0] - p1[0], q1[1] - p1[1])
                t = (w[0] * e[1] - w[1] * e[0]) / denom
                u = (w[0] * d[1] - w[1] * d[0]) / denom
                sign = 1 if denom > 0 else -1
                out.append(Crossing(ca, ka, t, cb, kb, u, sign))
        # ties along one chord signal a triple point: re-place with new salt
        for key_fn in (lambda c: (c.chord_a, c.t_a), lambda c: (c.chord_b, c.t_b)):
            seen = {}
            for c in out:
                k = key_fn(c)
                if k in seen:
                    raise _DegenerateChords()
                seen[k] = c
        return out

    def crossings(self, ca: int, cb: int) -> List[Crossing]:
        key = (ca, cb)
        if key not in self._crossing_cache:
            self._crossing_cache[key] = self._chord_crossings(ca, cb)
        return self._crossing_cache[key]

    def self_crossings(self, cid: int) -> int:
        return len(self.crossings(cid, cid))


class _DegenerateChords(Exception):
    pass


# -- minimal position and intersection numbers ----------------------------


def _walk_forward(word: CurveWord, ca: int, ta, cb: int, tb) -> Tuple[int, ...]:
    """Letters crossed walking forward from crossing (ca,ta) to (cb,tb).

    Closed chords sit after their letter, arc chords before it; walking
    off the end of an arc is a caller error.
    """
    letters = word.letters
    if word.kind == CLOSED:
        n = len(letters)
        if ca == cb and ta < tb:
            return ()
        out = []
        j = ca
        while True:
            j = (j + 1) % n
            out.append(letters[j])
            if j == cb % n:
                break
        return tuple(out)
    if (ca, ta) > (cb, tb):
        raise WordError("forward walk on an arc must not reverse")
    return tuple(letters[ca:cb])


def _path_between(word, x_chord, x_t, y_chord, y_t, forward: bool) -> Tuple[int, ...]:
    if forward:
        return _walk_forward(word, x_chord, x_t, y_chord, y_t)
    back = _walk_forward(word, y_chord, y_t, x_chord, x_t)
    return tuple(-l for l in reversed(back))


def _find_bigon(w1: CurveWord, w2: CurveWord, xs: List[Crossing]):
    """Locate a pair of crossings cobounding an empty disk, if any.

    Candidates are pairs adjacent along both curves; the disk test is
    that the loop around the candidate is trivial in the free groupoid
    of the cut-open surface.  Returns (x, y, path) where the path traces
    w2 from x to y; rerouting w1 along it removes the bigon.
    """
    n = len(xs)
    if n < 2:
        return None
    along1 = sorted(xs, key=lambda c: (c.chord_a, c.t_a))
    along2 = sorted(xs, key=lambda c: (c.chord_b, c.t_b))
    pos2 = {id(c): i for i, c in enumerate(along2)}
    pairs1 = [(along1[i], along1[(i + 1) % n]) for i in range(n)]
    if w1.kind == ARCKIND:
        pairs1 = pairs1[: n - 1]
    for x, y in pairs1:
        i2, j2 = pos2[id(x)], pos2[id(y)]
        if w2.kind == ARCKIND:
            adj_fwd = j2 == i2 + 1
            adj_bwd = i2 == j2 + 1
        else:
            adj_fwd = j2 == (i2 + 1) % n
            adj_bwd = i2 == (j2 + 1) % n
        if not (adj_fwd or adj_bwd):
            continue
        path1 = _path_between(w1, x.chord_a, x.t_a, y.chord_a, y.t_a, True)
        options = []
        if adj_fwd:
            options.append(True)
        if adj_bwd:
            options.append(False)
        for forward2 in options:
            path2 = _path_between(w2, x.chord_b, x.t_b, y.chord_b, y.t_b, forward2)
            loop = reduce_free(tuple(path1) + tuple(-l for l in reversed(path2)))
            if not loop:
                return (x, y, path2)
    return None


def _reroute(w1: CurveWord, x: Crossing, y: Crossing, path2) -> CurveWord:
    if w1.kind == CLOSED:
        keep = _walk_forward(w1, y.chord_a, y.t_a, x.chord_a, x.t_a)
        return CurveWord(
            w1.surface,
            CLOSED,
            reduce_cyclic(tuple(keep) + tuple(path2)),
            side=w1.side,
        )
    head = w1.letters[: x.chord_a]
    tail = w1.letters[y.chord_a :]
    return CurveWord(
        w1.surface,
        ARCKIND,
        reduce_free(tuple(head) + tuple(path2) + tuple(tail)),
        start=w1.start,
        end=w1.end,
        side=w1.side,
    )


def minimal_position(w1: CurveWord, w2: CurveWord):
    """Realize w1 and w2 with no bigons between them.

    Returns (w1', realization, crossings) where w1' is isotopic to w1.
    The second curve is never rewritten, so twisting code can keep exact
    chord references into it.
    """
    w1 = w1.reduced()
    w2 = w2.reduced()
    for _ in range(1 + len(w1.letters) * len(w2.letters) + len(w1.letters) + 4):
        r = Realization(w1.surface, [w1, w2])
        xs = r.crossings(0, 1)
        found = _find_bigon(w1, w2, xs)
        if found is None:
            return w1, r, xs
        x, y, path2 = found
        w1 = _reroute(w1, x, y, path2)
        if w1.kind == CLOSED and not w1.letters:
            r = Realization(w1.surface, [w2])
            return w1, None, []
    raise WordError("bigon removal failed to terminate")


def intersection_number(w1: CurveWord, w2: CurveWord) -> int:
    """Geometric intersection number of two embedded curve/arc classes."""
    w1 = w1.reduced()
    w2 = w2.reduced()
    if w1.kind == CLOSED and w1.is_inessential:
        return 0
    if w2.kind == CLOSED and w2.is_inessential:
        return 0
    if w1.side != w2.side:
        return 0
    if (
        w1.kind == CLOSED
        and w2.kind == CLOSED
        and w1.canonical_key() == w2.canonical_key()
    ):
        return 0
    _, _, xs = minimal_position(w1, w2)
    return len(xs)


def is_embedded(w: CurveWord) -> bool:
    """Whether the class has an embedded representative."""
    w = w.reduced()
    if w.kind == CLOSED:
        if not w.letters:
            return True
        if not w.is_primitive():
            return False
    r = Realization(w.surface, [w])
    return r.self_crossings(0) == 0


# -- Dehn twists -----------------------------------------------------------


def dehn_twist(t: CurveWord, c: CurveWord, sign: int = +1) -> CurveWord:
    """Image of c under the twist along t (sign +1 right-handed).

    Both curves must live on the same side of the same chart; the caller
    is responsible for flipping ``sign`` when words sit on the mirror
    side of a double.  Each crossing splices in a rotated copy of t, with
    orientation s * (sign of the crossing); see docs/conventions.md.
    """
    if sign not in (+1, -1):
        raise WordError("twist sign must be +1 or -1")
    t = t.reduced()
    if t.kind != CLOSED or not t.letters:
        raise WordError("can only twist along an essential closed curve")
    c = c.reduced()
    if c.kind == CLOSED and (
        not c.letters or c.canonical_key() == t.canonical_key()
    ):
        return c
    c1, r, xs = minimal_position(c, t)
    if not xs:
        return c1
    by_chord: Dict[int, List[Crossing]] = {}
    for x in xs:
        by_chord.setdefault(x.chord_a, []).append(x)
    for lst in by_chord.values():
        lst.sort(key=lambda x: x.t_a)

    def insertion(x: Crossing) -> Tuple[int, ...]:
        k = x.chord_b
        rotated = t.letters[k + 1 :] + t.letters[: k + 1]
        if sign * x.sign == 1:
            return rotated
        return tuple(-l for l in reversed(rotated))

    out: List[int] = []
    if c1.kind == CLOSED:
        for j, l in enumerate(c1.letters):
            out.append(l)
            for x in by_chord.get(j, ()):
                out.extend(insertion(x))
        return CurveWord(c1.surface, CLOSED, reduce_cyclic(out), side=c1.side)
    n = len(c1.letters)
    for k in range(n + 1):
        for x in by_chord.get(k, ()):
            out.extend(insertion(x))
        if k < n:
            out.append(c1.letters[k])
    return CurveWord(
        c1.surface,
        ARCKIND,
        reduce_free(out),
        start=c1.start,
        end=c1.end,
        side=c1.side,
    )


def algebraic_intersection(c1: CurveWord, c2: CurveWord) -> int:
    """Signed crossing count; orientation-dependent but position-free."""
    if c1.side != c2.side:
        return 0
    w1 = c1.reduced()
    w2 = c2.reduced()
    if (w1.kind == CLOSED and w1.is_inessential) or (
        w2.kind == CLOSED and w2.is_inessential
    ):
        return 0
    if (
        w1.kind == CLOSED
        and w2.kind == CLOSED
        and w1.canonical_key() == w2.canonical_key()
    ):
        return 0
    _, _, xs = minimal_position(w1, w2)
    return sum(x.sign for x in xs)


# -- boundary strand placement --------------------------------------------


def boundary_strand_compare(
    surface,
    seg: int,
    ray_a: Tuple[Tuple[int, ...], Anchor],
    ray_b: Tuple[Tuple[int, ...], Anchor],
) -> int:
    """Order two arc ends sitting on one segment by their routes.

    Each ray is (letters read from this end, far anchor).  Returns -1
    when a precedes b along the boundary orientation.  Only valid for
    disjoint strands; a forced crossing raises.
    """
    slot = surface.slot_of_segment[seg]

    def tokens(ray):
        letters, far = ray
        for l in letters:
            yield (SLOT_TOKEN, in_slot(surface, l))
        yield (ANCHOR_TOKEN, surface.slot_of_segment[far.segment], far.index)

    ta = tokens(ray_a)
    tb = tokens(ray_b)
    cur = slot
    n_slots = len(surface.face_slots)
    for _ in range(len(ray_a[0]) + len(ray_b[0]) + 2):
        a = next(ta)
        b = next(tb)
        if a == b:
            cur = partner_slot(surface, a[1])
            continue
        if a[1] == b[1]:
            return -1 if a[2] > b[2] else 1
        for d in range(1, n_slots + 1):
            probe = (cur + d) % n_slots
            if probe == a[1]:
                return 1
            if probe == b[1]:
                return -1
    raise WordError("boundary strands do not diverge")
