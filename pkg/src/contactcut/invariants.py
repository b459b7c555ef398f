"""Move counting, example families, bound certificates, and homology.

The two example families live on planar fibers with the radial chart:
arc i runs from the outer boundary circle to hole i, so boundary
parallel curves around holes are single-letter words and the starting
contact cut system is the doubled radial push-off system.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry
from .chart import DoubledSurface, PolygonPresentation, make_bounded_surface
from .curves import ArcSystemData, dual_curves, reference_arc_system
from .cutgraph import (
    BudgetExceeded,
    CCPath,
    PathError,
    Type0Edge,
    Type1Edge,
    detect_type0,
    replay_edge,
    validate_path,
)
from .cutsystems import (
    ContactCutSystem,
    apply_slides,
    apply_twist,
    double_arc_system,
    dual_candidates,
    intersection_with_system,
    twist_curve,
)
from .lefschetz import (
    LefschetzError,
    LefschetzFibration,
    MultisectionDiagram,
    diagram_of_path,
)
from .systems import SlideMove
from .words import ARCKIND, CLOSED, Anchor, CurveWord


class FamilyError(ValueError):
    pass


def count_N0(path: CCPath) -> int:
    """Number of handleslide moves along the path."""
    return path.count_type0_moves()


# -- planar chart helpers ----------------------------------------------------


def _hole_circles(F: PolygonPresentation):
    """Map hole number j (1-based) to its boundary circle index.

    In the radial chart every hole circle is a single segment and arc j
    lands on hole j; the outer circle is the one with many segments.
    """
    singles = {}
    outer = None
    for ci, circle in enumerate(F.boundary_circles):
        if len(circle) == 1:
            arc = circle[0].vertex.arc
            singles[arc] = ci
        else:
            outer = ci
    return singles, outer


def hole_curve(F: PolygonPresentation, j: int) -> CurveWord:
    """Boundary-parallel curve around hole j of a radial planar chart."""
    singles, _ = _hole_circles(F)
    return CurveWord(F, CLOSED, F.boundary_parallel_letters(singles[j])).reduced()


def outer_curve(F: PolygonPresentation) -> CurveWord:
    _, outer = _hole_circles(F)
    return CurveWord(F, CLOSED, F.boundary_parallel_letters(outer)).reduced()


def _connection_pairs(C: ContactCutSystem):
    """Which boundary-circle pairs the system's curves join, by curve."""
    circle_of = C.half.circle_of_segment
    return tuple(
        frozenset((circle_of[c.start.segment], circle_of[c.end.segment]))
        for c in C.curves
    )


# -- family 1 ----------------------------------------------------------------


@dataclass
class FamilyBundle:
    sigma: DoubledSurface
    fibration: LefschetzFibration
    path: CCPath
    n: int
    kind: str


def family1(n: int) -> FamilyBundle:
    """Planar fiber with 2n+1 boundary circles; cycles surround hole
    pairs and their members, and the built path twists all the single
    hole curves, reroutes one arc per pair, then twists the pair curves.
    """
    if n < 1:
        raise FamilyError("family 1 needs n >= 1")
    F = make_bounded_surface(0, 2 * n + 1)
    a = [hole_curve(F, 2 * i - 1) for i in range(1, n + 1)]
    b = [hole_curve(F, 2 * i) for i in range(1, n + 1)]
    c = [
        CurveWord(F, CLOSED, (2 * i - 1, 2 * i)).reduced()
        for i in range(1, n + 1)
    ]
    start = double_arc_system(reference_arc_system(F))
    edges = []
    for i in range(n):
        edges.append(Type1Edge(+1, a[i].letters, +1))
        edges.append(Type1Edge(+1, b[i].letters, +1))
    for i in range(n):
        edges.append(
            Type0Edge((SlideMove(2 * i, 0, 2 * i + 1, 0, +1),))
        )
    for i in range(n):
        edges.append(Type1Edge(+1, c[i].letters, +1))
    path = CCPath(start, edges)
    cycles = []
    for i in range(n):
        cycles.extend([(a[i], +1), (b[i], +1), (c[i], +1)])
    fib = LefschetzFibration(F, tuple(cycles)).check_allowable()
    return FamilyBundle(DoubledSurface(F), fib, path, n, "family1")


def family1_lower(bundle: FamilyBundle) -> int:
    """Certified lower bound for the pair-curve family.

    Before each pair twist the system must join the two paired holes;
    twists never change which circles the curves join, and a single
    handleslide changes one curve's pair, so every index needs its own
    creating slide.  The checker re-verifies all of that on the given
    path and counts the necessary slides.
    """
    if bundle.kind != "family1":
        raise FamilyError("not family 1 data")
    n = bundle.n
    F = bundle.path.start.half
    singles, _ = _hole_circles(F)
    vs = bundle.path.vertices
    # connection snapshots before each edge, and slide events
    snapshots = [_connection_pairs(v) for v in vs]
    c_keys = {
        CurveWord(F, CLOSED, (2 * i - 1, 2 * i)).reduced().canonical_key(): i
        for i in range(1, n + 1)
    }
    twist_time: Dict[int, int] = {}
    for t, e in enumerate(bundle.path.edges):
        if isinstance(e, Type1Edge):
            key = CurveWord(F, CLOSED, e.letters).canonical_key()
            if key in c_keys:
                twist_time[c_keys[key]] = t
    if len(twist_time) != n:
        raise FamilyError("path does not twist every pair curve")
    creators = set()
    for i in range(1, n + 1):
        pair = frozenset((singles[2 * i - 1], singles[2 * i]))
        t = twist_time[i]
        if pair not in snapshots[t]:
            raise FamilyError(f"no arc joins the paired holes before twist {i}")
        if pair in snapshots[0]:
            raise FamilyError("start system already joins a hole pair")
        # latest slide before t after which the connection persists
        created = None
        for s in range(t - 1, -1, -1):
            if not isinstance(bundle.path.edges[s], Type0Edge):
                continue
            if pair in snapshots[s + 1] and pair not in snapshots[s]:
                created = s
                break
        if created is None:
            raise FamilyError(f"could not locate the slide creating pair {i}")
        creators.add(created)
    if len(creators) != n:
        raise FamilyError("pair-creating slides are not distinct")
    return n


# -- family 2 ----------------------------------------------------------------


def family2(n: int) -> FamilyBundle:
    """Planar fiber with n+1 boundary circles, one cycle per circle."""
    if n < 2:
        raise FamilyError("family 2 needs n >= 2")
    F = make_bounded_surface(0, n + 1)
    vs = [outer_curve(F)] + [hole_curve(F, j) for j in range(1, n + 1)]
    start = double_arc_system(reference_arc_system(F))
    edges = []
    for j in range(1, n + 1):
        edges.append(Type1Edge(+1, vs[j].letters, +1))
    for j in range(n, 1, -1):
        edges.append(Type0Edge((SlideMove(j - 1, 0, j - 2, 0, -1),)))
    edges.append(Type1Edge(+1, vs[0].letters, +1))
    path = CCPath(start, edges)
    cycles = tuple((v, +1) for v in vs[1:]) + ((vs[0], +1),)
    fib = LefschetzFibration(F, cycles).check_allowable()
    return FamilyBundle(DoubledSurface(F), fib, path, n, "family2")


def family2_lower(bundle: FamilyBundle) -> int:
    """Certified lower bound by counting endpoints that must relocate.

    The outer circle starts with n endpoints and may hold only one when
    the outer cycle is twisted; one handleslide relocates exactly one
    endpoint, so the difference bounds the slide count from below.
    """
    if bundle.kind != "family2":
        raise FamilyError("not family 2 data")
    n = bundle.n
    F = bundle.path.start.half
    _, outer = _hole_circles(F)
    circle_of = F.circle_of_segment
    outer_key = outer_curve(F).canonical_key()
    t_outer = None
    for t, e in enumerate(bundle.path.edges):
        if isinstance(e, Type1Edge):
            if CurveWord(F, CLOSED, e.letters).canonical_key() == outer_key:
                t_outer = t
    if t_outer is None:
        raise FamilyError("path never twists the outer cycle")

    def outer_count(C: ContactCutSystem) -> int:
        k = 0
        for c in C.curves:
            for anc in (c.start, c.end):
                if circle_of[anc.segment] == outer:
                    k += 1
        return k

    vs = bundle.path.vertices
    before = outer_count(vs[0])
    at_twist = outer_count(vs[t_outer])
    if at_twist != 1:
        raise FamilyError("outer circle must hold one endpoint at the outer twist")
    if before != n:
        raise FamilyError("start system is not the radial one")
    return before - at_twist


# -- homology reports --------------------------------------------------------


def smith_normal_form(mat: Sequence[Sequence[int]]) -> List[int]:
    """Diagonal of the Smith normal form, by integer row/column reduction."""
    a = [list(row) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    r = c = 0
    while r < rows and c < cols:
        # find a pivot with minimal nonzero absolute value
        best = None
        for i in range(r, rows):
            for j in range(c, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[r], a[bi] = a[bi], a[r]
        for row in a:
            row[c], row[bj] = row[bj], row[c]
        done = False
        while not done:
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    for j in range(c, cols):
                        a[i][j] -= q * a[r][j]
                    if a[i][c]:
                        a[r], a[i] = a[i], a[r]
                        done = False
            for j in range(c + 1, cols):
                if a[r][j]:
                    q = a[r][j] // a[r][c]
                    for i in range(r, rows):
                        a[i][j] -= q * a[i][c]
                    if a[r][j]:
                        for row in a:
                            row[c], row[j] = row[j], row[c]
                        done = False
        diag.append(abs(a[r][c]))
        r += 1
        c += 1
    # divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = math.gcd(diag[i], diag[j])
            l = diag[i] * diag[j] // g if g else 0
            diag[i], diag[j] = g, l
    return [d for d in diag if d != 0]


@dataclass
class HomologyReport:
    euler: int
    betti: Tuple[int, int, int]
    h1_factors: List[int]
    pi1_generators: int
    pi1_relators: List[Tuple[int, ...]]
    pi1_free: str
    pi1_free_rank: Optional[int]
    c1_zero: str
    intersection_form: Optional[List[List[int]]]
    intersection_form_even: str

    @property
    def pi1_trivial(self) -> bool:
        return self.pi1_free == "free" and self.pi1_free_rank == 0


def _certified_form(L: LefschetzFibration) -> Optional[List[List[int]]]:
    """Intersection matrices for the families whose total space is named.

    Annulus fiber with core cycles: a chain of two-spheres of square -2.
    The pair-curve family: split spheres of square -3.  The one-cycle-
    per-circle family: a single sphere of square -(n+1).
    """
    F = L.fiber
    n = len(L.cycles)
    if any(s != +1 for _, s in L.cycles):
        return None
    if F.spec.genus == 0 and F.spec.boundary_count == 2:
        core_key = CurveWord(F, CLOSED, (1,)).canonical_key()
        if all(c.canonical_key() == core_key for c, _ in L.cycles):
            size = n - 1
            return [
                [-2 if i == j else (1 if abs(i - j) == 1 else 0) for j in range(size)]
                for i in range(size)
            ]
    if F.spec.genus == 0 and F.spec.boundary_count % 2 == 1 and n % 3 == 0:
        k = n // 3
        if F.spec.boundary_count == 2 * k + 1:
            want = set()
            for i in range(1, k + 1):
                want.add(hole_curve(F, 2 * i - 1).canonical_key())
                want.add(hole_curve(F, 2 * i).canonical_key())
                want.add(CurveWord(F, CLOSED, (2 * i - 1, 2 * i)).canonical_key())
            got = {c.canonical_key() for c, _ in L.cycles}
            if got == want and len({c.canonical_key() for c, _ in L.cycles}) == n:
                return [
                    [-3 if i == j else 0 for j in range(k)] for i in range(k)
                ]
    if F.spec.genus == 0 and n == F.spec.boundary_count:
        want = {outer_curve(F).canonical_key()}
        for j in range(1, F.spec.boundary_count):
            want.add(hole_curve(F, j).canonical_key())
        got = {c.canonical_key() for c, _ in L.cycles}
        if got == want:
            return [[-n]]
    return None


def homology_report(L: LefschetzFibration) -> HomologyReport:
    """Topology of the total space from the fiber and cycle classes.

    The space deformation retracts to the fiber with one two-cell per
    cycle, so everything is read off the integer class matrix.
    """
    L.check_allowable()
    F = L.fiber
    m = F.spec.arc_count
    n = len(L.cycles)
    classes = [list(c.algebraic_class()) for c, _ in L.cycles]
    mat = [[classes[j][i] for j in range(n)] for i in range(m)]
    factors = smith_normal_form(mat) if n else []
    rank = len(factors)
    b1 = m - rank
    b2 = n - rank
    euler = (1 - m) + n
    assert euler == 1 - b1 + b2
    # cross-check against the transpose
    factors_t = smith_normal_form([list(col) for col in zip(*mat)]) if n and m else []
    if sorted(factors) != sorted(factors_t):
        raise LefschetzError("Smith form disagreement between matrix and transpose")
    h1 = [0] * b1 + [d for d in factors if d > 1]
    relators = [c.reduced().letters for c, _ in L.cycles]
    dual_shaped = all(len(r) == 1 for r in relators)
    if dual_shaped:
        killed = {abs(r[0]) for r in relators}
        pi1_free = "free"
        free_rank = m - len(killed)
    else:
        pi1_free = "not determined"
        free_rank = None
    positive = all(s == +1 for _, s in L.cycles)
    c1_zero = "zero" if dual_shaped and positive else "not determined"
    form = _certified_form(L)
    even = "even" if dual_shaped and positive else "not determined"
    if form is not None:
        if all(form[i][i] % 2 == 0 for i in range(len(form))):
            even = "even"
        else:
            even = "odd"
    return HomologyReport(
        euler=euler,
        betti=(1, b1, b2),
        h1_factors=h1,
        pi1_generators=m,
        pi1_relators=relators,
        pi1_free=pi1_free,
        pi1_free_rank=free_rank,
        c1_zero=c1_zero,
        intersection_form=form,
        intersection_form_even=even,
    )


# -- exhaustive minimal move count -------------------------------------------


@dataclass
class ExhaustiveResult:
    value: int
    path: CCPath


def _same_stage(a: ContactCutSystem, b: ContactCutSystem, budget: int, memo: dict) -> bool:
    ka, kb = a.canonical_key(), b.canonical_key()
    if ka == kb:
        return True
    key = (min(ka, kb), max(ka, kb))
    if key in memo:
        return memo[key]
    try:
        found = detect_type0(a, b, budget=budget) is not None
    except BudgetExceeded:
        found = False
    memo[key] = found
    return found


def exhaustive_L(
    D: MultisectionDiagram, vertex_budget: int = 100_000, stage_budget: int = 2_000
) -> ExhaustiveResult:
    """Exact minimum handleslide count over paths realizing the diagram.

    Zero-one breadth-first search over (vertex, stage) states: twists
    that land in the next stage's handlebody class cost nothing, and
    handleslides cost one.  Slides before the first twist are free
    because a realizing path may start anywhere in the first class.
    """
    n_states = 0
    memo: dict = {}
    start = D.systems[0]
    target_stage = len(D.systems) - 1
    dq = deque()
    start_state = (start, 0, (), False)
    dq.append((0, start_state))
    best: Dict[tuple, int] = {(start.canonical_key(), 0): 0}
    while dq:
        cost, (v, stage, trail, twisted) = dq.popleft()
        if best.get((v.canonical_key(), stage), 10**9) < cost:
            continue
        if stage == target_stage:
            if _same_stage(v, D.systems[-1], stage_budget, memo):
                path = CCPath(start, trail)
                return ExhaustiveResult(cost, path)
            continue
        n_states += 1
        if n_states > vertex_budget:
            raise BudgetExceeded("exhaustive search ran out of vertex budget")
        # twists first: they are free and advance the stage
        for side in (+1, -1):
            for T in dual_candidates(v, side):
                edge = Type1Edge(side, T.letters, +1)
                try:
                    v2 = replay_edge(v, edge)
                except PathError:
                    continue
                if not _same_stage(v2, D.systems[stage + 1], stage_budget, memo):
                    continue
                key = (v2.canonical_key(), stage + 1)
                if best.get(key, 10**9) <= cost:
                    continue
                best[key] = cost
                dq.appendleft((cost, (v2, stage + 1, trail + (edge,), True)))
        from .systems import all_slide_moves

        for mv in all_slide_moves(v.layered):
            try:
                v2 = apply_slides(v, (mv,))
            except Exception:
                continue
            move_cost = cost + (1 if twisted else 0)
            key = (v2.canonical_key(), stage)
            if best.get(key, 10**9) <= move_cost:
                continue
            best[key] = move_cost
            edge = Type0Edge((mv,))
            state = (v2, stage, trail + (edge,), twisted)
            if move_cost == cost:
                dq.appendleft((move_cost, state))
            else:
                dq.append((move_cost, state))
    raise PathError("no realizing path found within the explored region")


# -- boundary-sum separating arcs and the disjointness check ------------------


def separating_arcs(F: PolygonPresentation) -> List[CurveWord]:
    """Arcs splitting the chart into its handle and hole blocks.

    One arc per block boundary, all anchored on the last segment so
    they nest; they miss the reference push-offs and the dual curves by
    construction.
    """
    p, b = F.spec.genus, F.spec.boundary_count
    blocks = p + (b - 1)
    last_seg = 2 * F.spec.arc_count
    out = []
    for j in range(1, blocks):
        end_seg = 4 * j if j <= p else 4 * p + 2 * (j - p)
        out.append(
            CurveWord(
                F,
                ARCKIND,
                (),
                start=Anchor(end_seg, -100),
                end=Anchor(last_seg, -100 - j),
            )
        )
    return out


class PreconditionError(ValueError):
    pass


def check_disjoint_from(
    D: MultisectionDiagram,
    gammas: Sequence[CurveWord],
    base: Optional[ArcSystemData] = None,
) -> bool:
    """Every curve of every system stays off the given arcs.

    The hypotheses are enforced first: the arcs must miss the starting
    arc system and its duals.  With those in place a twist-only diagram
    can never meet the arcs, which is what the caller is verifying.
    """
    F = D.sigma.half
    if base is None:
        base = reference_arc_system(F)
    duals = dual_curves(F)
    for g in gammas:
        if g.kind != ARCKIND or g.surface != F:
            raise PreconditionError("separating arcs must be arcs on the half chart")
        for a in base.arcs:
            if geometry.intersection_number(g, a) != 0:
                raise PreconditionError("arc meets the starting arc system")
        for dcur in duals:
            if geometry.intersection_number(g, dcur) != 0:
                raise PreconditionError("arc meets a dual curve")
    for C in D.systems:
        for side in (+1, -1):
            for piece in C.side_arcs(side):
                plain = CurveWord(
                    F, ARCKIND, piece.letters, start=piece.start, end=piece.end
                )
                for g in gammas:
                    if geometry.intersection_number(g, plain) != 0:
                        return False
    return True
