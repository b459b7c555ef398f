"""Lefschetz fibration data and its translations to and from paths.

A fibration over the disk is recorded by its bounded fiber and the
ordered, signed list of vanishing cycles (sign +1 for a standard
critical point, -1 for an achiral one).  Oriented path edges twist on
either side of the double; cycles extracted from the mirror side are
conjugated forward through the twists already performed, so the whole
fibration lives on the half-surface fiber.  See docs/conventions.md for
the handedness bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import curves as curves_mod
from . import geometry
from .chart import ARC, SEG, DoubledSurface, PolygonPresentation, SurfaceSpec
from .curves import ArcSystemData, reference_arc_system
from .cutgraph import (
    BudgetExceeded,
    CCPath,
    PathError,
    Type0Edge,
    Type1Edge,
    bridge_to_dual,
    detect_type0,
    replay_edge,
    slides_to_edges,
    validate_path,
)
from .cutsystems import ContactCutSystem, double_arc_system
from .systems import SlideMove
from .words import ARCKIND, CLOSED, Anchor, CurveWord, reduce_free


class LefschetzError(ValueError):
    pass


@dataclass(frozen=True)
class LefschetzFibration:
    """Fiber plus ordered signed vanishing cycles.

    ``visible`` records which cycles came from half-side twists when the
    fibration was read off a path; it is optional bookkeeping needed
    only by the normalization of twist-only paths.
    """

    fiber: PolygonPresentation
    cycles: Tuple[Tuple[CurveWord, int], ...]
    visible: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        for c, sign in self.cycles:
            if c.kind != CLOSED or c.surface != self.fiber:
                raise LefschetzError("cycles must be closed curves on the fiber")
            if sign not in (+1, -1):
                raise LefschetzError("cycle signs are +1 or -1")

    def check_allowable(self):
        for k, (c, _) in enumerate(self.cycles):
            if all(x == 0 for x in c.algebraic_class()):
                raise LefschetzError(
                    f"cycle {k} is trivial in homology; fibration not allowable"
                )
        return self


class MonodromyWord:
    """An ordered composition of signed twists on the fiber.

    Two words are equal as mapping classes exactly when they act the
    same way on the reference arc system, which fills the surface.
    The first listed twist acts first.
    """

    def __init__(self, fiber: PolygonPresentation, factors):
        self.fiber = fiber
        self.factors = tuple(factors)

    def act_on_arc(self, arc: CurveWord) -> CurveWord:
        out = arc
        for c, sign in self.factors:
            out = geometry.dehn_twist(c.reduced(), out, sign)
        return out

    def action_key(self):
        ref = reference_arc_system(self.fiber)
        images = []
        for a in ref.arcs:
            img = self.act_on_arc(a)
            images.append((img.letters, img.start, img.end))
        return tuple(images)

    def same_action(self, other: "MonodromyWord") -> bool:
        return self.fiber == other.fiber and self.action_key() == other.action_key()


def boundary_open_book(L: LefschetzFibration):
    return L.fiber, MonodromyWord(L.fiber, L.cycles)


# -- path -> fibration -------------------------------------------------------


def _forward_transport(cycles, letters) -> CurveWord:
    """Apply the twists recorded so far, first cycle first."""
    fiber = cycles[0][0].surface if cycles else None
    cur = letters
    for V, sign in cycles:
        cur = geometry.dehn_twist(V.reduced(), cur, sign)
    return cur


def path_to_lf(path: CCPath) -> LefschetzFibration:
    """Read the vanishing cycles off an oriented path.

    Half-side twist curves are the cycles themselves; mirror-side twist
    curves are carried forward through all twists already collected.
    """
    report = validate_path(path, loop_budget=0)
    if not report.valid:
        raise PathError(f"cannot translate an invalid path: {report.reason}")
    fiber = path.start.half
    cycles: List[Tuple[CurveWord, int]] = []
    visible: List[int] = []
    for e in path.edges:
        if not isinstance(e, Type1Edge):
            continue
        raw = CurveWord(fiber, CLOSED, e.letters).reduced()
        if e.side == +1:
            V = raw
            visible.append(len(cycles))
        else:
            V = raw
            for W, s in cycles:
                V = geometry.dehn_twist(W.reduced(), V, s)
        cycles.append((V, e.sign))
    return LefschetzFibration(fiber, tuple(cycles), tuple(visible)).check_allowable()


# -- fibration -> diagram ----------------------------------------------------


@dataclass(frozen=True)
class DiagramTransition:
    pre_slides: Tuple[SlideMove, ...]
    twist: Type1Edge
    post_slides: Tuple[SlideMove, ...] = ()


class MultisectionDiagram:
    """A sequence of contact cut systems with replayable witnesses.

    Consecutive systems differ by handleslides and one twist along a
    curve disjoint from the divides; replaying the witnesses re-derives
    every system from the first.
    """

    def __init__(
        self,
        sigma: DoubledSurface,
        systems_: Sequence[ContactCutSystem],
        transitions: Sequence[DiagramTransition],
    ):
        if len(systems_) != len(transitions) + 1:
            raise LefschetzError("need one transition between consecutive systems")
        self.sigma = sigma
        self.systems = tuple(systems_)
        self.transitions = tuple(transitions)

    def verify(self):
        """Check every system and replay every witness.

        Unlike a path edge, a diagram transition may twist along a curve
        meeting the system several times; the divide-disjointness is
        structural, so only the replay itself is checked.
        """
        from .cutsystems import apply_slides, apply_twist, twist_curve, validate_ccs

        for k, C in enumerate(self.systems):
            ok, reason = validate_ccs(C)
            if not ok:
                return False, f"system {k} invalid: {reason}"
        for k, tr in enumerate(self.transitions):
            cur = self.systems[k]
            if tr.pre_slides:
                cur = apply_slides(cur, tr.pre_slides)
            T = twist_curve(cur.half, tr.twist.letters, tr.twist.side)
            cur = apply_twist(cur, T, tr.twist.sign)
            if tr.post_slides:
                cur = apply_slides(cur, tr.post_slides)
            if not cur.isotopic(self.systems[k + 1]):
                return False, f"transition {k} does not reach system {k + 1}"
        return True, "ok"


def diagram_of_path(path: CCPath) -> MultisectionDiagram:
    """Collapse handleslide runs: one system per contact handlebody."""
    from .cutsystems import apply_slides

    sigma = path.start.sigma
    transitions: List[DiagramTransition] = []
    pending: List[SlideMove] = []
    for e in path.edges:
        if isinstance(e, Type0Edge):
            pending.extend(e.slides)
        else:
            transitions.append(DiagramTransition(tuple(pending), e))
            pending = []
    if pending and transitions:
        last = transitions[-1]
        transitions[-1] = DiagramTransition(
            last.pre_slides, last.twist, tuple(pending)
        )
    reps = [path.start]
    cur = path.start
    for tr in transitions:
        if tr.pre_slides:
            cur = apply_slides(cur, tr.pre_slides)
        cur = replay_edge(cur, tr.twist)
        if tr.post_slides:
            cur = apply_slides(cur, tr.post_slides)
        reps.append(cur)
    return MultisectionDiagram(sigma, reps, transitions)


def option2_curve(cycles, i: int) -> CurveWord:
    """Mirror-side twist curve for cycle i: the cycle pulled back through
    the earlier twists (inverse transport, latest twist first)."""
    V = cycles[i][0].reduced()
    for W, s in reversed(cycles[:i]):
        V = geometry.dehn_twist(W.reduced(), V, -s)
    return V


def option2_curve_conjugated(cycles, i: int) -> CurveWord:
    """The same curve via the conjugated product of earlier mirror curves.

    Writing U_k for the mirror-side curve of cycle k, the inverse
    transport equals twisting along U_1, then U_2, .., U_{i-1} with
    inverted signs; twist conjugation makes the two formulas agree.
    """
    V = cycles[i][0].reduced()
    for k in range(i):
        U = option2_curve(cycles, k)
        V = geometry.dehn_twist(U.reduced(), V, -cycles[k][1])
    return V


def lf_to_diagram(L: LefschetzFibration, side_bits: Sequence[int]) -> MultisectionDiagram:
    """Diagram for the multisection compatible with the fibration.

    ``side_bits[i]`` 0 twists cycle i on the half side as itself, 1 on
    the mirror side as its inverse transport.
    """
    if len(side_bits) != len(L.cycles):
        raise LefschetzError("need one side choice per cycle")
    C = double_arc_system(reference_arc_system(L.fiber))
    reps = [C]
    transitions = []
    for i, ((V, sign), bit) in enumerate(zip(L.cycles, side_bits)):
        if bit == 0:
            T = V.reduced()
            edge = Type1Edge(+1, T.letters, sign)
        else:
            T = option2_curve(L.cycles, i)
            edge = Type1Edge(-1, T.letters, sign)
        from .cutsystems import apply_twist, twist_curve

        # diagrams allow the twist curve to meet the system repeatedly,
        # so apply the twist directly rather than through replay_edge
        tw = twist_curve(C.half, edge.letters, edge.side)
        C = apply_twist(C, tw, edge.sign)
        reps.append(C)
        transitions.append(DiagramTransition((), edge))
    return MultisectionDiagram(DoubledSurface(L.fiber), reps, transitions)


# -- fibration -> path -------------------------------------------------------


def lf_to_path(L: LefschetzFibration, budget: int = 100_000) -> CCPath:
    """Some path whose fibration is the given one (never unique).

    All twists are performed on the half side; before each one a
    handleslide bridge makes the current system dual to the cycle.
    """
    L.check_allowable()
    start = double_arc_system(reference_arc_system(L.fiber))
    cur = start
    edges = []
    for V, sign in L.cycles:
        T = CurveWord(L.fiber, CLOSED, V.reduced().letters, side=+1)
        slides, cur = bridge_to_dual(cur, T, budget=budget)
        edges.extend(slides_to_edges(slides))
        edge = Type1Edge(+1, T.letters, sign)
        cur = replay_edge(cur, edge)
        edges.append(edge)
    return CCPath(start, edges)


# -- Hurwitz moves -----------------------------------------------------------


def hurwitz_move(L: LefschetzFibration, i: int, direction: str) -> LefschetzFibration:
    """Exchange cycles i and i+1, conjugating to preserve the monodromy.

    Moving left pulls cycle i+1 through the inverse of twist i; moving
    right is the inverse operation.
    """
    n = len(L.cycles)
    if not (0 <= i < n - 1):
        raise LefschetzError(f"no adjacent pair at index {i}")
    cycles = list(L.cycles)
    (A, sa), (B, sb) = cycles[i], cycles[i + 1]
    if direction == "left":
        B2 = geometry.dehn_twist(A.reduced(), B, -sa)
        cycles[i], cycles[i + 1] = (B2, sb), (A, sa)
    elif direction == "right":
        A2 = geometry.dehn_twist(B.reduced(), A, sb)
        cycles[i], cycles[i + 1] = (B, sb), (A2, sa)
    else:
        raise LefschetzError("direction must be 'left' or 'right'")
    return LefschetzFibration(L.fiber, tuple(cycles))


def hurwitz_equivalent(
    a: LefschetzFibration, b: LefschetzFibration, depth: int = 6
) -> bool:
    """Bounded search for a Hurwitz chain; False means none found within
    the budget, not that the fibrations differ."""

    def key(L):
        return tuple((c.canonical_key(), s) for c, s in L.cycles)

    target = key(b)
    seen = {key(a)}
    frontier = [a]
    for _ in range(depth):
        nxt = []
        for L in frontier:
            for i in range(len(L.cycles) - 1):
                for d in ("left", "right"):
                    L2 = hurwitz_move(L, i, d)
                    k = key(L2)
                    if k in seen:
                        continue
                    if k == target:
                        return True
                    seen.add(k)
                    nxt.append(L2)
        frontier = nxt
    return key(a) == target


# -- stabilization -----------------------------------------------------------


@dataclass(frozen=True)
class Stabilization:
    """Result of enlarging the fiber by a handle along an arc."""

    fibration: LefschetzFibration
    new_arc: int
    new_cycle: CurveWord

    @property
    def fiber(self):
        return self.fibration.fiber


def _split_segments(fiber: PolygonPresentation, cuts: Sequence[Tuple[int, int, int]]):
    """New boundary word with handle slots inserted at the cut gaps.

    Each cut is (segment, gap, slot_sign): the handle foot sits in gap
    ``gap`` of that segment, between old anchor indices gap-1 and gap.
    Returns (word, anchor_map) where anchor_map carries old anchor
    coordinates into the renumbered, split chart.
    """
    splits: Dict[int, List[Tuple[int, int, int]]] = {}
    for order, (seg, gap, side) in enumerate(cuts):
        splits.setdefault(seg, []).append((gap, order, side))
    for seg in splits:
        splits[seg].sort()
    word = []
    counter = [0]
    piece_of: Dict[Tuple[int, int], int] = {}

    def fresh():
        counter[0] += 1
        return counter[0]

    new_arc = fiber.spec.arc_count + 1
    for tok in fiber.word:
        if tok[0] == ARC:
            word.append(tok)
            continue
        seg = tok[1]
        piece_of[(seg, 0)] = fresh()
        word.append((SEG, piece_of[(seg, 0)]))
        for k, (_gap, _order, side) in enumerate(splits.get(seg, ())):
            word.append((ARC, new_arc, side))
            piece_of[(seg, k + 1)] = fresh()
            word.append((SEG, piece_of[(seg, k + 1)]))

    def anchor_map(segment: int, index: int) -> Tuple[int, int]:
        cut_gaps = [g for g, _o, _s in splits.get(segment, ())]
        passed = sum(1 for g in cut_gaps if g <= index)
        new_seg = piece_of[(segment, passed)]
        offset = index - (cut_gaps[passed - 1] if passed else 0)
        return new_seg, offset

    return tuple(word), new_arc, anchor_map


def stabilize(L: LefschetzFibration, a: CurveWord, sign: int = +1) -> Stabilization:
    """Attach a handle at the arc's endpoints and add the closing cycle.

    Feet on one boundary circle split it in two; feet on two circles
    merge them and raise the genus.  The new cycle runs along the arc
    and once over the handle; old cycle words carry over verbatim since
    the old reference arcs survive into the enlarged chart.
    """
    if a.kind != ARCKIND or a.surface != L.fiber:
        raise LefschetzError("stabilization needs a properly embedded arc on the fiber")
    a = a.reduced()
    spec_old = L.fiber.spec
    same_circle = (
        L.fiber.circle_of_segment[a.start.segment]
        == L.fiber.circle_of_segment[a.end.segment]
    )
    if same_circle:
        new_spec = SurfaceSpec(spec_old.genus, spec_old.boundary_count + 1)
    else:
        new_spec = SurfaceSpec(spec_old.genus + 1, spec_old.boundary_count - 1)
    cuts = [
        (a.start.segment, max(a.start.index, 0), +1),
        (a.end.segment, max(a.end.index, 0), -1),
    ]
    word, new_arc, _ = _split_segments(L.fiber, cuts)
    fiber2 = PolygonPresentation(new_spec, word)
    cycles2 = [(CurveWord(fiber2, CLOSED, c.letters), s) for c, s in L.cycles]
    new_cycle = CurveWord(fiber2, CLOSED, a.letters + (-new_arc,)).reduced()
    cycles2.append((new_cycle, sign))
    fib = LefschetzFibration(fiber2, tuple(cycles2)).check_allowable()
    return Stabilization(fib, new_arc, new_cycle)


def _transport_gaps_back(path: CCPath, markers):
    """Carry static boundary points from the final vertex back to the first.

    Markers are (segment, gap) pairs, the gap counted among that
    vertex's endpoints on the segment.  Twists never move endpoints;
    each slide relocates exactly one, so its inverse is two gap
    adjustments.  A marker sitting against the moved endpoint resolves
    to its lower gap, which is one of the two valid placements.
    """
    from .cutsystems import apply_slides

    markers = list(markers)
    vs = path.vertices

    def anchor_of(vertex, ci, end):
        c = vertex.curves[ci]
        return (c.start, c.end)[end]

    def remove_bead(seg, idx):
        for k, (ms, mg) in enumerate(markers):
            if ms == seg and mg > idx:
                markers[k] = (ms, mg - 1)

    def insert_bead(seg, idx):
        for k, (ms, mg) in enumerate(markers):
            if ms == seg and mg > idx:
                markers[k] = (ms, mg + 1)

    for ei in range(len(path.edges) - 1, -1, -1):
        e = path.edges[ei]
        if isinstance(e, Type1Edge):
            continue
        states = [vs[ei]]
        for mv in e.slides:
            states.append(apply_slides(states[-1], (mv,)))
        for k in range(len(e.slides) - 1, -1, -1):
            mv = e.slides[k]
            before, after = states[k], states[k + 1]
            b = anchor_of(before, mv.slid, mv.slid_end)
            aft = anchor_of(after, mv.slid, mv.slid_end)
            remove_bead(aft.segment, aft.index)
            insert_bead(b.segment, b.index)
    return markers


def _lift_vertex(C: ContactCutSystem, fiber2, anchor_map, new_arc: int):
    from .systems import LayeredArc, LayeredSystem

    arcs = []
    for c in C.curves:
        s2 = Anchor(*anchor_map(c.start.segment, c.start.index))
        e2 = Anchor(*anchor_map(c.end.segment, c.end.index))
        arcs.append(LayeredArc(c.words, s2, e2))
    # doubled co-core push-off beside the + slot of the new arc
    n = len(fiber2.face_slots)
    slot = fiber2.slot_of_arc_side[(new_arc, +1)]
    prev_seg = fiber2.face_slots[(slot - 1) % n][1]
    next_seg = fiber2.face_slots[(slot + 1) % n][1]
    arcs.append(LayeredArc(((), ()), Anchor(prev_seg, 10**6), Anchor(next_seg, -1)))
    return ContactCutSystem(DoubledSurface(fiber2), LayeredSystem(fiber2, arcs))


def stabilize_path(path: CCPath, a: CurveWord, sign: int = +1):
    """Stabilized path: old edges lifted, crossings removed, one new twist.

    The stabilizing arc is anchored relative to the final vertex: its
    anchor indices live in the merged order where the vertex's endpoints
    sit at odd positions 2r+1 and the arc may take even ones.  Returns
    (new_path, stabilization, removal_count); the vertex count grows by
    removal_count + 1, one handleslide per crossing of the arc with the
    final system plus the closing twist.

    Lifted slides may detour over the new handle when their interval
    runs through an attachment region; the detours join the same
    handleslide edge, so the edge count is preserved.
    """
    from .cutsystems import apply_slides, intersection_with_system
    from .systems import SystemError_

    lf0 = path_to_lf(path)
    stab_probe = stabilize(lf0, a, sign)

    markers_end = [
        (a.start.segment, (a.start.index + 1) // 2, +1),
        (a.end.segment, (a.end.index + 1) // 2, -1),
    ]
    moved = _transport_gaps_back(path, [(s, g) for s, g, _ in markers_end])
    cuts = [
        (seg, gap, side)
        for (seg, gap), (_s0, _g0, side) in zip(moved, markers_end)
    ]
    word, new_arc, anchor_map = _split_segments(path.start.half, cuts)
    fiber2 = stab_probe.fiber
    if fiber2.word != word:
        fiber2 = PolygonPresentation(fiber2.spec, word)

    def lift_slides(vertex, slides):
        out = []
        cur = vertex
        cocore = len(cur.curves) - 1
        for mv in slides:
            for _ in range(8):
                try:
                    cur2 = apply_slides(cur, (mv,))
                except SystemError_ as e:
                    if "obstructed" not in str(e):
                        raise
                    detour = _detour_slide(cur, mv, cocore)
                    if detour is None:
                        raise
                    cur = apply_slides(cur, (detour,))
                    out.append(detour)
                    continue
                out.append(mv)
                cur = cur2
                break
            else:
                raise PathError("slide lift kept hitting the handle")
        return tuple(out), cur

    start2 = _lift_vertex(path.start, fiber2, anchor_map, new_arc)
    cur = start2
    edges2: List[object] = []
    for e in path.edges:
        if isinstance(e, Type1Edge):
            cur = replay_edge(cur, e)
            edges2.append(e)
        else:
            lifted, cur = lift_slides(cur, e.slides)
            edges2.append(Type0Edge(lifted))

    c_curve = CurveWord(fiber2, CLOSED, a.letters + (-new_arc,), side=+1).reduced()
    cocore_index = len(cur.curves) - 1
    removals = 0
    while True:
        total = intersection_with_system(cur, c_curve)
        if total == 1:
            break
        found = None
        for strict in (True, False):
            for ci in range(len(cur.curves)):
                if ci == cocore_index or found:
                    continue
                for se in (0, 1):
                    for oe in (0, 1):
                        for d in (+1, -1):
                            mv = SlideMove(ci, se, cocore_index, oe, d)
                            try:
                                nxt = apply_slides(cur, (mv,))
                            except SystemError_:
                                continue
                            got = intersection_with_system(nxt, c_curve)
                            want_ok = got == total - 1 if strict else got < total
                            if want_ok:
                                found = (mv, nxt)
                                break
                        if found:
                            break
                    if found:
                        break
            if found:
                break
        if found is None:
            raise PathError("could not remove a crossing of the stabilizing cycle")
        mv, cur = found
        edges2.append(Type0Edge((mv,)))
        removals += 1
        if removals > 4 * (len(c_curve.letters) + 2):
            raise PathError("crossing removal failed to terminate")
    final_edge = Type1Edge(+1, c_curve.letters, sign)
    cur = replay_edge(cur, final_edge)
    edges2.append(final_edge)
    stab = Stabilization(
        LefschetzFibration(
            fiber2,
            tuple(
                [(CurveWord(fiber2, CLOSED, c.letters), s) for c, s in lf0.cycles]
                + [(c_curve, sign)]
            ),
        ).check_allowable(),
        new_arc,
        c_curve,
    )
    return CCPath(start2, edges2), stab, removals


def _detour_slide(vertex, mv: SlideMove, cocore_index: int):
    """Hop the blocked endpoint over the doubled co-core, if that is the
    obstruction."""
    from .cutsystems import apply_slides

    if mv.over == cocore_index:
        return None
    for oe in (0, 1):
        probe = SlideMove(mv.slid, mv.slid_end, cocore_index, oe, mv.direction)
        try:
            apply_slides(vertex, (probe,))
            return probe
        except Exception:
            continue
    return None


# -- twist-only path normalization -------------------------------------------


def normalize_L0(
    L: LefschetzFibration, duals: Sequence[CurveWord], visible: Sequence[int]
) -> LefschetzFibration:
    """Hurwitz-rewrite a twist-only fibration so every cycle is a dual.

    Invisible cycles are pulled to the front (earliest first), then the
    visible block is drained from its right end; both passes only use
    leftward moves, so the total monodromy never changes.  Inputs whose
    cycles do not lie in the twisted dual orbits fail the membership
    check at the end.
    """
    if any(s != +1 for _, s in L.cycles):
        raise LefschetzError("normalization requires all twists right-handed")
    dual_keys = {d.reduced().canonical_key() for d in duals}
    visible = set(visible)
    n = len(L.cycles)
    tags = ["v" if i in visible else "u" for i in range(n)]
    work = LefschetzFibration(L.fiber, L.cycles)

    def pull_left(fib, tag_list, src, dst):
        for pos in range(src, dst, -1):
            fib = hurwitz_move(fib, pos - 1, "left")
            tag_list[pos - 1], tag_list[pos] = tag_list[pos], tag_list[pos - 1]
        return fib

    # pass 1: invisible cycles to the front, in their original order
    front = 0
    for _ in range(tags.count("u")):
        src = tags.index("u", front)
        work = pull_left(work, tags, src, front)
        tags[front] = "U"
        front += 1
    # pass 2: drain the visible block by pulling its last element to the
    # front of the block; the remaining visibles shift right each time
    while front < n:
        work = pull_left(work, tags, n - 1, front)
        tags[front] = "U"
        front += 1
    for k, (c, s) in enumerate(work.cycles):
        if c.canonical_key() not in dual_keys:
            raise LefschetzError(
                f"normalized cycle {k} is not a dual curve; input outside the "
                "twisted dual orbit"
            )
    return work
