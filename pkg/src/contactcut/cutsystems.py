"""Contact cut systems on a doubled surface.

A contact cut system is a maximal family of disjoint curves on the
double that cuts it to a sphere, each curve crossing the dividing set
exactly twice so that the two side restrictions are arc systems.  Such
a curve is stored as a two-layer arc: its half-surface piece and its
mirror piece, both written in half-chart coordinates (the mirror map is
the tautological one), sharing their two endpoints on the dividing set.

Twists along curves disjoint from the dividing set act layer-locally;
a right-handed twist on the mirror side acts on pulled-back words as a
left-handed one because the mirror map reverses orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import curves as curves_mod
from . import geometry, systems
from .chart import DoubledSurface, PolygonPresentation
from .curves import ArcSystemData, is_arc_system
from .systems import LayeredArc, LayeredSystem, SlideMove
from .words import ARCKIND, CLOSED, Anchor, CurveWord, WordError, reduce_free


class CutSystemError(ValueError):
    pass


class ContactCutSystem:
    """Vertex data of the contact cut graph: curves plus endpoint order."""

    def __init__(self, sigma: DoubledSurface, layered: LayeredSystem):
        if layered.surface != sigma.half:
            raise CutSystemError("system chart does not match the double")
        if layered.curves and layered.layers != 2:
            raise CutSystemError("cut system curves need a half and a mirror word")
        self.sigma = sigma
        self.layered = layered

    @property
    def half(self) -> PolygonPresentation:
        return self.sigma.half

    @property
    def curves(self) -> Tuple[LayeredArc, ...]:
        return self.layered.curves

    def side_arcs(self, side: int) -> List[CurveWord]:
        layer = 0 if side == +1 else 1
        return [
            CurveWord(
                self.half,
                ARCKIND,
                c.words[layer],
                start=c.start,
                end=c.end,
                side=side,
            )
            for c in self.curves
        ]

    def side_system(self, side: int) -> ArcSystemData:
        return ArcSystemData(self.half, tuple(self.side_arcs(side)))

    def canonical_key(self):
        key = getattr(self, "_canon", None)
        if key is None:
            key = ("ccs", self.sigma.genus, systems.canonical_form(self.layered))
            self._canon = key
        return key

    def isotopic(self, other: "ContactCutSystem") -> bool:
        return (
            self.sigma == other.sigma
            and self.canonical_key() == other.canonical_key()
        )

    def state_key(self):
        return self.layered.state_key()

    def __repr__(self):
        return f"ContactCutSystem({len(self.curves)} curves on {self.sigma})"


def double_arc_system(system: ArcSystemData) -> ContactCutSystem:
    """Double every arc across the dividing set: mirror word equals word."""
    sigma = DoubledSurface(system.surface)
    arcs = [
        LayeredArc((a.letters, a.letters), a.start, a.end) for a in system.arcs
    ]
    return ContactCutSystem(sigma, LayeredSystem(system.surface, arcs))


def validate_ccs(C: ContactCutSystem):
    """All defining invariants, with the first failure named."""
    half = C.half
    m = half.spec.arc_count
    if len(C.curves) != m:
        return False, f"expected {m} curves, got {len(C.curves)}"
    for side in (+1, -1):
        ok, reason = is_arc_system(half, C.side_arcs(side))
        if not ok:
            name = "half" if side == +1 else "mirror"
            return False, f"{name} restriction is not an arc system: {reason}"
    return True, "ok"


# -- curves on the double given as raw crossing sequences -------------------


@dataclass(frozen=True)
class DoubleCurveInput:
    """A closed curve on the double, given piece by piece.

    ``pieces`` alternate sides starting on +1; piece k runs from anchor
    k to anchor k+1 (cyclically).  Curves with more than two dividing-set
    crossings can be written down, but only two-crossing ones can join a
    contact cut system.
    """

    pieces: Tuple[Tuple[int, Tuple[int, ...]], ...]
    anchors: Tuple[Anchor, ...]

    def crossing_count(self) -> int:
        return len(self.anchors)


def _parallel_interval(half, anchors, k, w) -> Optional[Tuple[int, ...]]:
    """Sweep word of a boundary interval matching piece k, if one exists.

    The interval runs between the piece's two anchors; it must avoid the
    curve's other crossing points, or the push across the divides would
    drag the piece through them.
    """
    n = len(anchors)
    a, b = anchors[k], anchors[(k + 1) % n]
    ca = half.circle_of_segment[a.segment]
    if ca != half.circle_of_segment[b.segment]:
        return None
    circle = half.boundary_circles[ca]
    events: List[Tuple[str, object]] = []
    for step in circle:
        on_seg = sorted(
            (x for x in anchors if x.segment == step.segment),
            key=lambda y: y.index,
        )
        for x in on_seg:
            events.append(("anchor", x))
        events.append(("vertex", step.vertex.ccw_letter))
    ia = events.index(("anchor", a))
    N = len(events)
    for direction in (+1, -1):
        letters: List[int] = []
        j = ia
        ok = True
        for _ in range(N):
            j = (j + direction) % N
            kind, val = events[j]
            if kind == "anchor":
                ok = val == b
                break
            letters.append(val if direction == +1 else -val)
        if ok and tuple(letters) == tuple(w):
            return tuple(letters)
    return None


def double_curve_crossings(half: PolygonPresentation, cur: DoubleCurveInput) -> int:
    """Minimal dividing-set crossing count of the curve up to isotopy.

    Reduces each piece freely, then repeatedly pushes across the
    dividing set any piece that is parallel to a boundary interval;
    each push merges its two neighbors through the mirror copy of the
    swept interval and removes two crossings.
    """
    pieces = [(side, reduce_free(w)) for side, w in cur.pieces]
    anchors = list(cur.anchors)
    changed = True
    while changed and len(pieces) >= 2:
        changed = False
        n = len(pieces)
        for k in range(n):
            side, w = pieces[k]
            hug = _parallel_interval(half, anchors, k, w)
            if hug is None:
                continue
            if n == 2:
                # the whole curve slides off the dividing set
                return 0
            prev, nxt = (k - 1) % n, (k + 1) % n
            ps, pw = pieces[prev]
            _, nw = pieces[nxt]
            merged = reduce_free(tuple(pw) + hug + tuple(nw))
            new_pieces = []
            new_anchors = []
            for j in range(n):
                if j in (k, nxt):
                    continue
                if j == prev:
                    new_pieces.append((ps, merged))
                else:
                    new_pieces.append(pieces[j])
                new_anchors.append(anchors[j])
            pieces = new_pieces
            anchors = new_anchors
            changed = True
            break
    return len(anchors)


def contact_system_from_inputs(
    sigma: DoubledSurface, inputs: Sequence[DoubleCurveInput]
):
    """Build a ContactCutSystem when every curve crosses d exactly twice.

    Returns (system, None) or (None, reason).
    """
    arcs = []
    for ci, cur in enumerate(inputs):
        if cur.crossing_count() != 2 or len(cur.pieces) != 2:
            return None, f"curve {ci} crosses the dividing set {cur.crossing_count()} times"
        (s0, w0), (s1, w1) = cur.pieces
        if {s0, s1} != {+1, -1}:
            return None, f"curve {ci} pieces must alternate sides"
        if s0 == -1:
            (s0, w0), (s1, w1) = (s1, w1), (s0, w0)
            a0, a1 = cur.anchors[1], cur.anchors[0]
        else:
            a0, a1 = cur.anchors
        # plus piece runs a0 -> a1; mirror piece a1 -> a0, stored a0 -> a1
        arcs.append(
            LayeredArc(
                (reduce_free(w0), tuple(-l for l in reversed(reduce_free(w1)))),
                a0,
                a1,
            )
        )
    try:
        return ContactCutSystem(sigma, LayeredSystem(sigma.half, arcs)), None
    except (systems.SystemError_, CutSystemError) as e:
        return None, str(e)


# -- moves -----------------------------------------------------------------


def twist_curve(half: PolygonPresentation, letters, side: int) -> CurveWord:
    return CurveWord(half, CLOSED, tuple(letters), side=side).reduced()


def intersection_with_system(C: ContactCutSystem, T: CurveWord) -> int:
    """Total geometric intersection of a dividing-set-disjoint curve."""
    plain = CurveWord(C.half, CLOSED, T.letters).reduced()
    total = 0
    for piece in C.side_arcs(T.side):
        plain_piece = CurveWord(
            C.half, ARCKIND, piece.letters, start=piece.start, end=piece.end
        )
        total += geometry.intersection_number(plain, plain_piece)
    return total


def apply_twist(C: ContactCutSystem, T: CurveWord, sign: int) -> ContactCutSystem:
    """Twist the whole system along a curve disjoint from the divides.

    ``sign`` is the handedness on the double; on the mirror layer the
    pulled-back action has the opposite hand.
    """
    t_plain = CurveWord(C.half, CLOSED, T.letters).reduced()
    if not t_plain.letters:
        raise CutSystemError("twist curve is inessential")
    layer = 0 if T.side == +1 else 1
    effective = sign if T.side == +1 else -sign
    new = []
    for c in C.curves:
        piece = CurveWord(
            C.half, ARCKIND, c.words[layer], start=c.start, end=c.end
        )
        tw = geometry.dehn_twist(t_plain, piece, effective)
        words = list(c.words)
        words[layer] = tw.letters
        new.append(LayeredArc(tuple(words), c.start, c.end))
    return ContactCutSystem(C.sigma, LayeredSystem(C.half, new))


def apply_slides(C: ContactCutSystem, moves: Sequence[SlideMove]) -> ContactCutSystem:
    layered = C.layered
    for mv in moves:
        layered = systems.apply_slide(layered, mv)
    return ContactCutSystem(C.sigma, layered)


def dual_candidates(C: ContactCutSystem, side: int) -> List[CurveWord]:
    """Duals of one side restriction, tagged with that side.

    These are the only essential curves disjoint from the divides that
    meet the system in a single point, so they are the complete
    candidate list for a single twist relating two systems.
    """
    duals = curves_mod.dual_curves_of_system(C.side_system(side))
    return [CurveWord(C.half, CLOSED, d.letters, side=side) for d in duals]
