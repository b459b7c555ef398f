"""Curve and arc words in the polygon chart.

A closed curve is a cyclic sequence of signed arc crossings; letter +i
means the curve reaches arc i on its "+" side and re-emerges from the "-"
side, letter -i the reverse.  A properly embedded arc is a linear sequence
of crossings plus two anchors pinning its endpoints to boundary segments;
anchors carry integer order indices so that several endpoints on one
segment keep a well-defined cyclic order without real coordinates.

The complement of the reference arcs is a single disk, so free reduction
(cancelling an adjacent +i, -i pair) realizes every curve at its minimal
crossing number with the reference system, and the reduced cyclic word is
a complete isotopy invariant.  This is the workhorse fact behind every
canonical form below.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

from .chart import DoubledSurface, PolygonPresentation

CLOSED = "closed"
ARCKIND = "arc"


class WordError(ValueError):
    """Raised for malformed or non-realizable words."""


@dataclass(frozen=True, order=True)
class Anchor:
    """An arc endpoint: boundary segment plus order index along it."""

    segment: int
    index: int

    def token(self) -> str:
        return f"s{self.segment}@{self.index}"


@dataclass(frozen=True)
class CurveWord:
    """An isotopy class of an embedded closed curve or arc on the half chart.

    For curves living on a doubled surface but disjoint from the dividing
    set, ``side`` records which mirror copy carries them (+1 for the half
    itself, -1 for the mirror); their letters are still read in half-chart
    coordinates.
    """

    surface: PolygonPresentation
    kind: str
    letters: Tuple[int, ...]
    start: Optional[Anchor] = None
    end: Optional[Anchor] = None
    side: int = +1

    def __post_init__(self):
        m = self.surface.spec.arc_count
        for l in self.letters:
            if l == 0 or not (1 <= abs(l) <= m):
                raise WordError(f"letter {l} out of range for m={m}")
        if self.kind == ARCKIND:
            if self.start is None or self.end is None:
                raise WordError("arc words need both anchors")
        elif self.kind == CLOSED:
            if self.start is not None or self.end is not None:
                raise WordError("closed words carry no anchors")
        else:
            raise WordError(f"unknown kind {self.kind}")
        if self.side not in (+1, -1):
            raise WordError("side must be +1 or -1")

    # -- basic structure -------------------------------------------------

    @property
    def is_closed(self) -> bool:
        return self.kind == CLOSED

    @property
    def is_inessential(self) -> bool:
        return self.kind == CLOSED and not reduce_cyclic(self.letters)

    def reversed(self) -> "CurveWord":
        """The same unoriented curve traversed backwards."""
        letters = tuple(-l for l in reversed(self.letters))
        if self.kind == ARCKIND:
            return replace(self, letters=letters, start=self.end, end=self.start)
        return replace(self, letters=letters)

    def reduced(self) -> "CurveWord":
        if self.kind == CLOSED:
            return replace(self, letters=reduce_cyclic(self.letters))
        return replace(self, letters=reduce_free(self.letters))

    def canonical_key(self):
        """Hashable form constant on unoriented isotopy classes."""
        if self.kind == CLOSED:
            return (
                "closed",
                self.side,
                cyclic_canonical(reduce_cyclic(self.letters)),
            )
        a = self.reduced()
        b = a.reversed()
        ka = (a.letters, a.start, a.end)
        kb = (b.letters, b.start, b.end)
        return ("arc", self.side, min(ka, kb))

    def isotopic(self, other: "CurveWord") -> bool:
        return (
            self.surface == other.surface
            and self.canonical_key() == other.canonical_key()
        )

    def algebraic_class(self) -> Tuple[int, ...]:
        """Signed crossing counts with each reference arc (H1 coordinates)."""
        m = self.surface.spec.arc_count
        v = [0] * m
        for l in self.letters:
            v[abs(l) - 1] += 1 if l > 0 else -1
        return tuple(v)

    def is_primitive(self) -> bool:
        """A closed word is primitive when it is not a proper power."""
        w = reduce_cyclic(self.letters)
        n = len(w)
        if n == 0:
            return False
        for p in range(1, n):
            if n % p == 0 and w == w[p:] + w[:p]:
                return False
        return True

    def __len__(self):
        return len(self.letters)


def closed_word(surface, letters, side: int = +1) -> CurveWord:
    return CurveWord(surface, CLOSED, tuple(letters), side=side).reduced()


def arc_word(surface, letters, start: Anchor, end: Anchor, side: int = +1) -> CurveWord:
    return CurveWord(
        surface, ARCKIND, tuple(letters), start=start, end=end, side=side
    ).reduced()


# -- word reduction ------------------------------------------------------


def reduce_free(letters: Sequence[int]) -> Tuple[int, ...]:
    """Free reduction: each cancellation removes one curve/arc bigon."""
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def reduce_cyclic(letters: Sequence[int]) -> Tuple[int, ...]:
    w = list(reduce_free(letters))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
        w = list(reduce_free(w))
    return tuple(w)


def cyclic_canonical(letters: Tuple[int, ...]) -> Tuple[int, ...]:
    """Lexicographic minimum over rotations of the word and its inverse."""
    if not letters:
        return ()
    candidates = []
    for w in (letters, tuple(-l for l in reversed(letters))):
        for r in range(len(w)):
            candidates.append(w[r:] + w[:r])
    return min(candidates)


def concat_words(*parts: Sequence[int]) -> Tuple[int, ...]:
    out: Tuple[int, ...] = ()
    for p in parts:
        out = reduce_free(tuple(out) + tuple(p))
    return out
