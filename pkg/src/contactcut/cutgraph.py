"""Edges and paths in the contact cut graph, with certified moves.

Vertices are contact cut systems up to isotopy.  A type 0 edge is a
contact handleslide: one curve band-sums over others along ribbons on
the dividing set, both sides at once.  A type 1 edge twists the system
along a curve disjoint from the divides that meets it in one point,
oriented by the handedness of the twist.  Edge certificates are plain
data and can always be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import systems
from .cutsystems import (
    ContactCutSystem,
    CutSystemError,
    apply_slides,
    apply_twist,
    dual_candidates,
    intersection_with_system,
    twist_curve,
    validate_ccs,
)
from .systems import SlideMove
from .words import CLOSED, CurveWord


class PathError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Type0Edge:
    """Certified handleslides; each move is one elementary slide."""

    slides: Tuple[SlideMove, ...]

    @property
    def slide_count(self) -> int:
        return len(self.slides)


@dataclass(frozen=True)
class Type1Edge:
    """A single twist along a divides-disjoint curve meeting the system once.

    ``side`` +1 puts the twist curve on the half surface, -1 on the
    mirror; ``letters`` are its half-chart crossing word and ``sign``
    the handedness of the twist on the double.
    """

    side: int
    letters: Tuple[int, ...]
    sign: int

    def curve(self, half) -> CurveWord:
        return twist_curve(half, self.letters, self.side)


Edge = object  # Type0Edge | Type1Edge


def replay_edge(v: ContactCutSystem, edge) -> ContactCutSystem:
    if isinstance(edge, Type0Edge):
        if not edge.slides:
            return v
        slid = {mv.slid for mv in edge.slides}
        if len(slid) != 1:
            # a single handleslide move slides one curve over a sequence
            raise PathError("type 0 edge must slide a single curve")
        return apply_slides(v, edge.slides)
    if isinstance(edge, Type1Edge):
        T = edge.curve(v.half)
        if not T.letters:
            raise PathError("type 1 twist curve is inessential")
        hits = intersection_with_system(v, T)
        if hits != 1:
            raise PathError(
                f"type 1 twist curve meets the system {hits} times, not once"
            )
        return apply_twist(v, T, edge.sign)
    raise PathError(f"unknown edge {edge!r}")


class CCPath:
    """A walk in the contact cut graph: a start vertex plus edges."""

    def __init__(self, start: ContactCutSystem, edges: Sequence[Edge]):
        self.start = start
        self.edges = tuple(edges)
        self._vertices: Optional[Tuple[ContactCutSystem, ...]] = None

    @property
    def vertices(self) -> Tuple[ContactCutSystem, ...]:
        if self._vertices is None:
            vs = [self.start]
            for e in self.edges:
                vs.append(replay_edge(vs[-1], e))
            self._vertices = tuple(vs)
        return self._vertices

    @property
    def end(self) -> ContactCutSystem:
        return self.vertices[-1]

    def count_type0_moves(self) -> int:
        """Number of elementary handleslides along the path."""
        return sum(
            e.slide_count for e in self.edges if isinstance(e, Type0Edge)
        )

    def type1_edges(self) -> List[Type1Edge]:
        return [e for e in self.edges if isinstance(e, Type1Edge)]

    def extended(self, edge) -> "CCPath":
        p = CCPath(self.start, self.edges + (edge,))
        if self._vertices is not None:
            p._vertices = self._vertices + (replay_edge(self.end, edge),)
        return p


@dataclass
class PathReport:
    valid: bool
    reason: str
    n0: int
    edge_count: int
    is_loop: bool
    loop_closure_slides: Optional[Tuple[SlideMove, ...]] = None


def validate_path(path: CCPath, loop_budget: int = 200) -> PathReport:
    """Re-verify every vertex and edge; report move counts and loop status."""
    ok, reason = validate_ccs(path.start)
    if not ok:
        return PathReport(False, f"start vertex invalid: {reason}", 0, 0, False)
    try:
        vs = path.vertices
    except (PathError, CutSystemError, systems.SystemError_) as e:
        return PathReport(False, f"edge replay failed: {e}", 0, 0, False)
    for i, v in enumerate(vs[1:], start=1):
        ok, reason = validate_ccs(v)
        if not ok:
            return PathReport(
                False, f"vertex {i} invalid: {reason}", 0, 0, False
            )
    n0 = path.count_type0_moves()
    is_loop = vs[0].isotopic(vs[-1])
    closure = None
    if not is_loop:
        try:
            closure = detect_type0(vs[-1], vs[0], budget=loop_budget)
        except BudgetExceeded:
            closure = None
        if closure is not None:
            is_loop = True
    return PathReport(True, "ok", n0, len(path.edges), is_loop, closure)


# -- edge detection ---------------------------------------------------------


def detect_type1(v: ContactCutSystem, w: ContactCutSystem):
    """Find a single twist taking v to w, if one exists.

    The candidates are exactly the duals of the two side restrictions,
    in both handednesses; nothing else disjoint from the divides can
    meet the system in one point.
    """
    target = w.canonical_key()
    for side in (+1, -1):
        for D in dual_candidates(v, side):
            for sign in (+1, -1):
                image = apply_twist(v, D, sign)
                if image.canonical_key() == target:
                    return Type1Edge(side, D.letters, sign)
    return None


def _slide_neighbors(v: ContactCutSystem):
    for mv in systems.all_slide_moves(v.layered):
        try:
            yield mv, apply_slides(v, (mv,))
        except (systems.SystemError_, CutSystemError):
            continue


def detect_type0(
    v: ContactCutSystem, w: ContactCutSystem, budget: int = 100_000
) -> Optional[Tuple[SlideMove, ...]]:
    """Search for a handleslide sequence from v to w.

    Breadth-first over elementary slides with canonical-form
    deduplication.  Absence of a certificate within the budget is
    inconclusive; the search raises rather than answering "no" when the
    budget runs out with frontier remaining.
    """
    target = w.canonical_key()
    if v.canonical_key() == target:
        return ()
    seen = {v.canonical_key()}
    frontier: List[Tuple[ContactCutSystem, Tuple[SlideMove, ...]]] = [(v, ())]
    explored = 0
    while frontier:
        nxt = []
        for u, trail in frontier:
            for mv, u2 in _slide_neighbors(u):
                key = u2.canonical_key()
                if key in seen:
                    continue
                seen.add(key)
                if key == target:
                    return trail + (mv,)
                nxt.append((u2, trail + (mv,)))
                explored += 1
                if explored > budget:
                    raise BudgetExceeded(
                        f"type 0 search exhausted its budget of {budget}"
                    )
        frontier = nxt
    return None


def slides_to_edges(slides: Sequence[SlideMove]) -> List[Type0Edge]:
    """Group a slide chain into edges, one run of each slid curve per edge."""
    edges: List[Type0Edge] = []
    run: List[SlideMove] = []
    for mv in slides:
        if run and mv.slid != run[-1].slid:
            edges.append(Type0Edge(tuple(run)))
            run = []
        run.append(mv)
    if run:
        edges.append(Type0Edge(tuple(run)))
    return edges


def bridge_to_dual(
    v: ContactCutSystem, T: CurveWord, budget: int = 100_000
) -> Tuple[Tuple[SlideMove, ...], ContactCutSystem]:
    """Slide v until the twist curve T meets it exactly once."""
    if intersection_with_system(v, T) == 1:
        return (), v
    seen = {v.canonical_key()}
    frontier: List[Tuple[ContactCutSystem, Tuple[SlideMove, ...]]] = [(v, ())]
    explored = 0
    while frontier:
        nxt = []
        for u, trail in frontier:
            for mv, u2 in _slide_neighbors(u):
                key = u2.canonical_key()
                if key in seen:
                    continue
                seen.add(key)
                if intersection_with_system(u2, T) == 1:
                    return trail + (mv,), u2
                nxt.append((u2, trail + (mv,)))
                explored += 1
                if explored > budget:
                    raise BudgetExceeded(
                        f"bridge search exhausted its budget of {budget}"
                    )
        frontier = nxt
    raise PathError("no vertex dual to the twist curve is reachable")


def connect(
    v: ContactCutSystem,
    w: ContactCutSystem,
    monodromy: Sequence[Tuple[CurveWord, int]],
    budget: int = 100_000,
) -> CCPath:
    """Path from v to w realizing a supplied twist factorization.

    Each factor is twisted in as a type 1 edge after a type 0 bridge
    makes the current system dual to it; a final type 0 chain closes up
    with w.  The factorization is the caller's claim that the twists
    compose to the mapping class taking v to w; if the final bridge
    fails the claim was wrong.
    """
    cur = v
    edges: List[Edge] = []
    for T, sign in monodromy:
        T = T.reduced()
        if T.kind != CLOSED or not T.letters:
            raise PathError("monodromy factors must be essential closed curves")
        slides, cur = bridge_to_dual(cur, T, budget=budget)
        edges.extend(slides_to_edges(slides))
        edge = Type1Edge(T.side, T.letters, sign)
        cur = replay_edge(cur, edge)
        edges.append(edge)
    closing = detect_type0(cur, w, budget=budget)
    if closing is None:
        raise PathError(
            "factorization does not carry the start system to the target"
        )
    edges.extend(slides_to_edges(closing))
    return CCPath(v, edges)
