"""Deterministic SVG pictures of contact cut systems.

Each system is drawn as the two cut-open polygons side by side, the
half surface on the left and the mirror on the right.  Reference arc
edges are grey with labels, dividing-set segments are purple, and the
system's curves are colored chords; endpoints shared across the two
panels carry matching colors.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List

from .cutsystems import ContactCutSystem
from .geometry import Realization
from .words import ARCKIND, CurveWord

PALETTE = [
    "#c0392b",
    "#2980b9",
    "#27ae60",
    "#8e44ad",
    "#d35400",
    "#16a085",
    "#7f8c8d",
    "#2c3e50",
]

ARC_COLOR = "#999999"
DIVIDE_COLOR = "#7d3c98"


def _fmt(x: float) -> str:
    return f"{x:.4f}"


class _Panel:
    """One cut-open polygon rendered on a circle."""

    def __init__(self, surface, cx: float, r: float = 100.0):
        self.surface = surface
        self.cx = cx
        self.cy = 120.0
        self.r = r
        self.n = len(surface.face_slots)

    def boundary_point(self, pos: Fraction):
        ang = 2 * math.pi * float(pos) / self.n - math.pi / 2
        return (
            self.cx + self.r * math.cos(ang),
            self.cy + self.r * math.sin(ang),
        )

    def edges(self) -> List[str]:
        out = []
        for j, tok in enumerate(self.surface.face_slots):
            a = self.boundary_point(Fraction(j))
            b = self.boundary_point(Fraction(j + 1))
            mid = self.boundary_point(Fraction(2 * j + 1, 2))
            if tok[0] == "a":
                color, width = ARC_COLOR, 1.0
                label = f"a{tok[1]}{'+' if tok[2] > 0 else '-'}"
            else:
                color, width = DIVIDE_COLOR, 2.5
                label = f"s{tok[1]}"
            out.append(
                f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                f'y2="{_fmt(b[1])}" stroke="{color}" stroke-width="{width}"/>'
            )
            lx = self.cx + (mid[0] - self.cx) * 1.12
            ly = self.cy + (mid[1] - self.cy) * 1.12
            out.append(
                f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="8" '
                f'text-anchor="middle" fill="{color}">{label}</text>'
            )
        return out

    def chords(self, words: List[CurveWord]) -> List[str]:
        out = []
        if not any(w.letters or w.kind == ARCKIND for w in words):
            return out
        real = Realization(self.surface, words)
        for s in real.strands:
            color = PALETTE[s.cid % len(PALETTE)]
            for k in range(s.n_chords):
                p0, p1 = real.chord_endpoints(s.cid, k)
                a = self.boundary_point(p0)
                b = self.boundary_point(p1)
                out.append(
                    f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                    f'y2="{_fmt(b[1])}" stroke="{color}" stroke-width="1.2"/>'
                )
            if not s.closed:
                for k, which in ((0, 0), (s.n_chords - 1, 1)):
                    pos = real.positions[(s.cid, k, which)]
                    pt = self.boundary_point(pos)
                    out.append(
                        f'<circle cx="{_fmt(pt[0])}" cy="{_fmt(pt[1])}" r="2.2" '
                        f'fill="{color}"/>'
                    )
        return out


def render_system(C: ContactCutSystem, title: str = "") -> str:
    half = C.half
    left = _Panel(half, 130.0)
    right = _Panel(half, 400.0)
    body: List[str] = []
    body.append(
        f'<text x="130" y="14" font-size="10" text-anchor="middle">half side</text>'
    )
    body.append(
        f'<text x="400" y="14" font-size="10" text-anchor="middle">mirror side</text>'
    )
    if title:
        body.append(
            f'<text x="265" y="250" font-size="10" text-anchor="middle">{title}</text>'
        )
    body.extend(left.edges())
    body.extend(right.edges())
    body.extend(left.chords(C.side_arcs(+1)))
    body.extend(right.chords(C.side_arcs(-1)))
    content = "\n".join(body)
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" width="530" height="260" '
        'viewBox="0 0 530 260">\n'
        '<rect width="530" height="260" fill="#ffffff"/>\n'
        f"{content}\n</svg>\n"
    )


def render_diagram_files(systems, base_path: str) -> List[str]:
    """One SVG per cut system; returns the file names written."""
    if base_path.endswith(".svg"):
        stem = base_path[: -len(".svg")]
    else:
        stem = base_path
    names = []
    for k, C in enumerate(systems):
        name = f"{stem}.{k}.svg"
        with open(name, "w", encoding="utf-8") as fh:
            fh.write(render_system(C, title=f"system {k}"))
        names.append(name)
    return names
