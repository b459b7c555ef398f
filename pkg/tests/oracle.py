"""Independent brute-force oracle for intersections and twists.

Everything here recomputes from first principles: a curve family is
realized by choosing orderings of the crossing points along every
reference arc outright, keeping only orderings where each curve has no
self-crossings, and minimizing pairwise crossings over all of them.
Nothing is shared with the production ray-ordering machinery beyond the
chart itself.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from contactcut.chart import PolygonPresentation
from contactcut.words import CLOSED, CurveWord, reduce_cyclic, reduce_free


def _in_slot(surface, letter):
    i, e = abs(letter), (1 if letter > 0 else -1)
    return surface.slot_of_arc_side[(i, e)]


def _out_slot(surface, letter):
    i, e = abs(letter), (1 if letter > 0 else -1)
    return surface.slot_of_arc_side[(i, -e)]


class Config:
    """A full choice of point orders along every arc for some curves."""

    def __init__(self, surface, words, orders):
        # orders: dict arc -> tuple of (curve index, letter index)
        self.surface = surface
        self.words = words
        self.orders = orders
        self.positions = {}
        for arc, pts in orders.items():
            plus = surface.slot_of_arc_side[(arc, +1)]
            minus = surface.slot_of_arc_side[(arc, -1)]
            n = len(pts)
            for rank, (ci, k) in enumerate(pts):
                self.positions[("pt", ci, k, +1)] = plus + Fraction(rank + 1, n + 1)
                self.positions[("pt", ci, k, -1)] = minus + Fraction(n - rank, n + 1)
        for ci, w in enumerate(words):
            if w.kind != CLOSED:
                for which, anc in (("s", w.start), ("e", w.end)):
                    slot = surface.slot_of_segment[anc.segment]
                    self.positions[("anchor", ci, which)] = slot + Fraction(
                        1, 2
                    ) + Fraction(anc.index, 10_000)

    def chords(self, ci):
        w = self.words[ci]
        out = []
        if w.kind == CLOSED:
            n = len(w.letters)
            for j in range(n):
                a = self.positions[("pt", ci, j, -1 if w.letters[j] > 0 else +1)]
                nxt = (j + 1) % n
                b = self.positions[("pt", ci, nxt, +1 if w.letters[nxt] > 0 else -1)]
                out.append((a, b))
            return out
        n = len(w.letters)
        prev = self.positions[("anchor", ci, "s")]
        for j in range(n):
            here = self.positions[("pt", ci, j, +1 if w.letters[j] > 0 else -1)]
            out.append((prev, here))
            prev = self.positions[("pt", ci, j, -1 if w.letters[j] > 0 else +1)]
        out.append((prev, self.positions[("anchor", ci, "e")]))
        return out

    @staticmethod
    def cross(c1, c2):
        a1, a2 = c1
        b1, b2 = c2
        lo, hi = min(a1, a2), max(a1, a2)
        return (lo < b1 < hi) != (lo < b2 < hi)

    def crossings(self, ci, cj):
        ch_i = self.chords(ci)
        ch_j = self.chords(cj)
        out = []
        for a, ca in enumerate(ch_i):
            for b, cb in enumerate(ch_j):
                if ci == cj and b <= a:
                    continue
                if self.cross(ca, cb):
                    out.append((a, b))
        return out

    def self_ok(self):
        return all(not self.crossings(ci, ci) for ci in range(len(self.words)))


def _point_lists(surface, words):
    pts = {arc: [] for arc in surface.arcs()}
    for ci, w in enumerate(words):
        for k, l in enumerate(w.letters):
            pts[abs(l)].append((ci, k))
    return {a: v for a, v in pts.items() if v}


def all_configs(surface, words, cap=None):
    pts = _point_lists(surface, words)
    arcs = sorted(pts)
    pools = [list(itertools.permutations(pts[a])) for a in arcs]
    total = 1
    for p in pools:
        total *= len(p)
    if cap is not None and total > cap:
        return None
    out = []
    for combo in itertools.product(*pools):
        out.append(Config(surface, words, dict(zip(arcs, combo))))
    return out


def min_crossings(surface, w1, w2, cap=2_000_000):
    """Exhaustive minimal crossing count between two reduced words.

    Enumerates per-curve self-consistent orders first, then all merges;
    returns (count, witness config) or None when over the cap.
    """
    w1 = w1.reduced()
    w2 = w2.reduced()
    if w1.kind == CLOSED and not w1.letters:
        return 0, None
    if w2.kind == CLOSED and not w2.letters:
        return 0, None
    self1 = all_configs(surface, [w1], cap=cap)
    self2 = all_configs(surface, [w2], cap=cap)
    if self1 is None or self2 is None:
        return None
    valid1 = [c for c in self1 if c.self_ok()]
    valid2 = [c for c in self2 if c.self_ok()]
    pts = _point_lists(surface, [w1, w2])
    arcs = sorted(pts)
    best = None
    witness = None
    budget = cap
    for c1 in valid1:
        for c2 in valid2:
            merge_pools = []
            for a in arcs:
                own1 = [p for p in pts[a] if p[0] == 0]
                own2 = [p for p in pts[a] if p[0] == 1]
                o1 = c1.orders.get(a, ())
                o2 = [(1, k) for (_, k) in c2.orders.get(a, ())]
                merges = []
                n1, n2 = len(own1), len(own2)
                for picks in itertools.combinations(range(n1 + n2), n1):
                    seq = []
                    i1 = i2 = 0
                    pick = set(picks)
                    for pos in range(n1 + n2):
                        if pos in pick:
                            seq.append(o1[i1])
                            i1 += 1
                        else:
                            seq.append(o2[i2])
                            i2 += 1
                    merges.append(tuple(seq))
                merge_pools.append(merges)
            count = 1
            for m in merge_pools:
                count *= len(m)
            budget -= count
            if budget < 0:
                return None
            for combo in itertools.product(*merge_pools):
                cfg = Config(surface, [w1, w2], dict(zip(arcs, combo)))
                if not cfg.self_ok():
                    continue
                n = len(cfg.crossings(0, 1))
                if best is None or n < best:
                    best, witness = n, cfg
                if best == 0:
                    return 0, witness
    if best is None:
        raise RuntimeError("no valid configuration found")
    return best, witness


def min_self_crossings(surface, w, cap=500_000):
    w = w.reduced()
    if w.kind == CLOSED and not w.letters:
        return 0
    configs = all_configs(surface, [w], cap=cap)
    if configs is None:
        return None
    return min(len(c.crossings(0, 0)) for c in configs)


def oracle_embedded(surface, w, cap=500_000):
    w = w.reduced()
    if w.kind == CLOSED:
        letters = reduce_cyclic(w.letters)
        if not letters:
            return True
        n = len(letters)
        for p in range(1, n):
            if n % p == 0 and letters == letters[p:] + letters[:p]:
                return False
    s = min_self_crossings(surface, w, cap=cap)
    if s is None:
        return None
    return s == 0


def oracle_twist(surface, t, c, sign, cap=2_000_000):
    """Twist via a brute-force minimal configuration.

    Splices a rotated copy of the core word at each crossing, oriented
    by the sign of the crossing frame; positions along chords come from
    exact chord intersection in the witness configuration.
    """
    t = t.reduced()
    c = c.reduced()
    res = min_crossings(surface, c, t, cap=cap)
    if res is None:
        return None
    _, cfg = res
    if cfg is None or not cfg.crossings(0, 1):
        return c
    chords_c = cfg.chords(0)
    chords_t = cfg.chords(1)

    def param_and_sign(ca, cb):
        (a1, a2), (b1, b2) = ca, cb
        p1 = (a1, a1 * a1)
        p2 = (a2, a2 * a2)
        q1 = (b1, b1 * b1)
        q2 = (b2, b2 * b2)
        d = (p2[0] - p1[0], p2[1] - p1[1])
        e = (q2[0] - q1[0], q2[1] - q1[1])
        den = d[0] * e[1] - d[1] * e[0]
        w_ = (q1[0] - p1[0], q1[1] - p1[1])
        tpar = Fraction(w_[0] * e[1] - w_[1] * e[0], den)
        return tpar, (1 if den > 0 else -1)

    by_chord = {}
    for a, b in cfg.crossings(0, 1):
        tpar, eps = param_and_sign(chords_c[a], chords_t[b])
        by_chord.setdefault(a, []).append((tpar, b, eps))
    for v in by_chord.values():
        v.sort()

    def insertion(b, eps):
        rotated = t.letters[b + 1 :] + t.letters[: b + 1]
        if sign * eps == 1:
            return rotated
        return tuple(-x for x in reversed(rotated))

    out = []
    if c.kind == CLOSED:
        for j, l in enumerate(c.letters):
            out.append(l)
            for _, b, eps in by_chord.get(j, ()):
                out.extend(insertion(b, eps))
        return CurveWord(surface, CLOSED, reduce_cyclic(out))
    n = len(c.letters)
    for k in range(n + 1):
        for _, b, eps in by_chord.get(k, ()):
            out.extend(insertion(b, eps))
        if k < n:
            out.append(c.letters[k])
    return CurveWord(
        surface, "arc", reduce_free(out), start=c.start, end=c.end
    )


def enumerate_embedded_closed(surface, max_len, cap=200_000):
    """All embedded closed classes with reduced words up to max_len."""
    m = surface.spec.arc_count
    letters = [i for a in range(1, m + 1) for i in (a, -a)]
    seen = {}
    for n in range(1, max_len + 1):
        for combo in itertools.product(letters, repeat=n):
            w = reduce_cyclic(combo)
            if len(w) != n:
                continue
            cw = CurveWord(surface, CLOSED, w)
            key = cw.canonical_key()
            if key in seen:
                continue
            emb = oracle_embedded(surface, cw, cap=cap)
            if emb:
                seen[key] = cw
    return list(seen.values())
