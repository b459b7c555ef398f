"""Line-oriented input language for surfaces, curves, systems and paths.

Grammar sketch (# starts a comment, identifiers [A-Za-z][A-Za-z0-9_]*):

    surface F genus 1 boundaries 1
    double S of F
    curve b1 on F = cyc(+a1)
    curve t on S side - = cyc(+a2)
    curve c on S = cyc(+a1 +d1@0 -a1 -d3@0)
    arc g on F = lin(s2@0 +a1 s4@0)
    arcsystem A on F = [g1 g2]
    ccsystem V on S = double(A)
    ccsystem W on S = [c1 c2]
    fibration L on F = [+b1 -b2]
    path P from V = [twist + b1 + ; slide 0 1 1 0 ccw ; twist - b2 -]
    diagram D of P

Crossing tokens are +a3/-a3 for reference arcs and +d2@0/-d2@0 for the
dividing set, indexed by boundary segment with the endpoint order after
the @; +d crosses from the half surface into the mirror.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .chart import DoubledSurface, PolygonPresentation, make_bounded_surface
from .curves import ArcSystemData
from .cutgraph import CCPath, Type0Edge, Type1Edge
from .cutsystems import (
    ContactCutSystem,
    DoubleCurveInput,
    contact_system_from_inputs,
    double_arc_system,
)
from .lefschetz import LefschetzFibration, MultisectionDiagram, diagram_of_path
from .systems import SlideMove
from .words import ARCKIND, CLOSED, Anchor, CurveWord

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SemanticError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class Document:
    surfaces: Dict[str, PolygonPresentation] = field(default_factory=dict)
    doubles: Dict[str, DoubledSurface] = field(default_factory=dict)
    curves: Dict[str, CurveWord] = field(default_factory=dict)
    curve_homes: Dict[str, str] = field(default_factory=dict)
    dcurves: Dict[str, DoubleCurveInput] = field(default_factory=dict)
    dcurve_homes: Dict[str, str] = field(default_factory=dict)
    arcsystems: Dict[str, ArcSystemData] = field(default_factory=dict)
    ccsystems: Dict[str, ContactCutSystem] = field(default_factory=dict)
    fibrations: Dict[str, LefschetzFibration] = field(default_factory=dict)
    paths: Dict[str, CCPath] = field(default_factory=dict)
    diagrams: Dict[str, MultisectionDiagram] = field(default_factory=dict)
    order: List[Tuple[str, str]] = field(default_factory=list)

    def sole(self, kind: str, flag: Optional[str]):
        table = getattr(self, kind)
        if flag is not None:
            if flag not in table:
                raise KeyError(f"no {kind[:-1]} named {flag}")
            return flag, table[flag]
        if len(table) != 1:
            raise KeyError(
                f"document has {len(table)} {kind}; pick one with the flag"
            )
        return next(iter(table.items()))


def _check_name(no, name, doc: Document):
    if not IDENT.match(name):
        raise ParseError(no, f"bad identifier {name!r}")
    for kind, nm in doc.order:
        if nm == name:
            raise SemanticError(no, f"name {name} already declared")


def _curve_tokens(no, text):
    toks = text.split()
    out = []
    for t in toks:
        m = re.match(r"([+-])a(\d+)$", t)
        if m:
            sign = 1 if m.group(1) == "+" else -1
            out.append(("a", sign * int(m.group(2))))
            continue
        m = re.match(r"([+-])d(\d+)@(-?\d+)$", t)
        if m:
            sign = 1 if m.group(1) == "+" else -1
            out.append(("d", int(m.group(2)), sign, int(m.group(3))))
            continue
        raise ParseError(no, f"bad crossing token {t!r}")
    return out


def _anchor_token(no, t):
    m = re.match(r"s(\d+)@(-?\d+)$", t)
    if not m:
        raise ParseError(no, f"bad anchor token {t!r}")
    return Anchor(int(m.group(1)), int(m.group(2)))


def _validate_letters(no, surface, tokens):
    m = surface.spec.arc_count
    for tok in tokens:
        if tok[0] == "a" and not (1 <= abs(tok[1]) <= m):
            raise SemanticError(no, f"arc a{abs(tok[1])} out of range (m={m})")
        if tok[0] == "d" and not (1 <= tok[1] <= 2 * m):
            raise SemanticError(no, f"segment d{tok[1]} out of range")


def parse(text: str) -> Document:
    doc = Document()
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split(None, 1)
        head = words[0]
        rest = words[1] if len(words) > 1 else ""
        handler = _HANDLERS.get(head)
        if handler is None:
            raise ParseError(no, f"unknown declaration {head!r}")
        handler(no, rest, doc)
    return doc


def _handle_surface(no, rest, doc):
    m = re.match(r"(\w+)\s+genus\s+(\d+)\s+boundaries\s+(\d+)$", rest)
    if not m:
        raise ParseError(no, "expected: surface NAME genus P boundaries B")
    name, p, b = m.group(1), int(m.group(2)), int(m.group(3))
    _check_name(no, name, doc)
    try:
        doc.surfaces[name] = make_bounded_surface(p, b)
    except ValueError as e:
        raise SemanticError(no, str(e))
    doc.order.append(("surfaces", name))


def _handle_double(no, rest, doc):
    m = re.match(r"(\w+)\s+of\s+(\w+)$", rest)
    if not m:
        raise ParseError(no, "expected: double NAME of SURFACE")
    name, half = m.groups()
    _check_name(no, name, doc)
    if half not in doc.surfaces:
        raise SemanticError(no, f"unknown surface {half}")
    doc.doubles[name] = DoubledSurface(doc.surfaces[half])
    doc.order.append(("doubles", name))


def _home_surface(no, doc, home):
    if home in doc.surfaces:
        return doc.surfaces[home], None
    if home in doc.doubles:
        return doc.doubles[home].half, doc.doubles[home]
    raise SemanticError(no, f"unknown surface {home}")


def _handle_curve(no, rest, doc):
    m = re.match(r"(\w+)\s+on\s+(\w+)(?:\s+side\s+([+-]))?\s*=\s*cyc\((.*)\)$", rest)
    if not m:
        raise ParseError(no, "expected: curve NAME on SURF [side +-] = cyc(...)")
    name, home, side_s, toks_s = m.groups()
    _check_name(no, name, doc)
    half, dbl = _home_surface(no, doc, home)
    tokens = _curve_tokens(no, toks_s)
    _validate_letters(no, half, tokens)
    d_tokens = [t for t in tokens if t[0] == "d"]
    if d_tokens:
        if dbl is None:
            raise SemanticError(no, "dividing-set crossings need a double")
        if side_s is not None:
            raise SemanticError(no, "side tags are only for curves off the divides")
        doc.dcurves[name] = _pieces_from_tokens(no, tokens)
        doc.dcurve_homes[name] = home
        doc.order.append(("dcurves", name))
        return
    side = +1 if side_s in (None, "+") else -1
    try:
        cw = CurveWord(half, CLOSED, tuple(t[1] for t in tokens), side=side).reduced()
    except ValueError as e:
        raise SemanticError(no, str(e))
    doc.curves[name] = cw
    doc.curve_homes[name] = home
    doc.order.append(("curves", name))


def _pieces_from_tokens(no, tokens) -> DoubleCurveInput:
    k = len(tokens)
    d_pos = [i for i, t in enumerate(tokens) if t[0] == "d"]
    if len(d_pos) % 2 != 0:
        raise SemanticError(no, "dividing-set crossings must come in pairs")
    rotated = tokens[d_pos[0] + 1 :] + tokens[: d_pos[0] + 1]
    pieces = []
    anchors = []
    side = -tokens[d_pos[0]][2]  # after a +d crossing we are on the mirror
    cur: List[int] = []
    # anchors listed with the piece that STARTS at them
    first_anchor = Anchor(tokens[d_pos[0]][1], tokens[d_pos[0]][3])
    pending_anchor = first_anchor
    for t in rotated:
        if t[0] == "a":
            cur.append(t[1])
            continue
        seg, sgn, idx = t[1], t[2], t[3]
        expected_side = +1 if sgn == +1 else -1
        if side != expected_side:
            raise SemanticError(
                no, "crossing direction disagrees with the current side"
            )
        pieces.append((side, tuple(cur)))
        anchors.append(pending_anchor)
        pending_anchor = Anchor(seg, idx)
        cur = []
        side = -side
    return DoubleCurveInput(tuple(pieces), tuple(anchors))


def _handle_arc(no, rest, doc):
    m = re.match(r"(\w+)\s+on\s+(\w+)\s*=\s*lin\((.*)\)$", rest)
    if not m:
        raise ParseError(no, "expected: arc NAME on SURF = lin(s1@0 ... s2@0)")
    name, home, toks_s = m.groups()
    _check_name(no, name, doc)
    half, _ = _home_surface(no, doc, home)
    toks = toks_s.split()
    if len(toks) < 2:
        raise ParseError(no, "arc needs two anchors")
    start = _anchor_token(no, toks[0])
    end = _anchor_token(no, toks[-1])
    mid = _curve_tokens(no, " ".join(toks[1:-1]))
    if any(t[0] == "d" for t in mid):
        raise SemanticError(no, "arcs stay on one side of the divides")
    _validate_letters(no, half, mid)
    for anc in (start, end):
        if not (1 <= anc.segment <= 2 * half.spec.arc_count):
            raise SemanticError(no, f"segment s{anc.segment} out of range")
    doc.curves[name] = CurveWord(
        half, ARCKIND, tuple(t[1] for t in mid), start=start, end=end
    ).reduced()
    doc.curve_homes[name] = home
    doc.order.append(("curves", name))


def _handle_arcsystem(no, rest, doc):
    m = re.match(r"(\w+)\s+on\s+(\w+)\s*=\s*\[(.*)\]$", rest)
    if not m:
        raise ParseError(no, "expected: arcsystem NAME on SURF = [a b ...]")
    name, home, items = m.groups()
    _check_name(no, name, doc)
    half, _ = _home_surface(no, doc, home)
    arcs = []
    for item in items.split():
        if item not in doc.curves or doc.curves[item].kind != ARCKIND:
            raise SemanticError(no, f"{item} is not a declared arc")
        arcs.append(doc.curves[item])
    doc.arcsystems[name] = ArcSystemData(half, tuple(arcs))
    doc.order.append(("arcsystems", name))


def _handle_ccsystem(no, rest, doc):
    m = re.match(r"(\w+)\s+on\s+(\w+)\s*=\s*double\((\w+)\)$", rest)
    if m:
        name, home, src = m.groups()
        _check_name(no, name, doc)
        if home not in doc.doubles:
            raise SemanticError(no, f"unknown double {home}")
        if src not in doc.arcsystems:
            raise SemanticError(no, f"unknown arc system {src}")
        if doc.arcsystems[src].surface != doc.doubles[home].half:
            raise SemanticError(no, "arc system lives on a different surface")
        doc.ccsystems[name] = double_arc_system(doc.arcsystems[src])
        doc.order.append(("ccsystems", name))
        return
    m = re.match(r"(\w+)\s+on\s+(\w+)\s*=\s*\[(.*)\]$", rest)
    if not m:
        raise ParseError(no, "expected: ccsystem NAME on DBL = double(A) | [c1 ...]")
    name, home, items = m.groups()
    _check_name(no, name, doc)
    if home not in doc.doubles:
        raise SemanticError(no, f"unknown double {home}")
    inputs = []
    for item in items.split():
        if item not in doc.dcurves:
            raise SemanticError(no, f"{item} is not a curve crossing the divides")
        if doc.dcurve_homes[item] != home:
            raise SemanticError(no, f"{item} lives on a different double")
        inputs.append(doc.dcurves[item])
    system, reason = contact_system_from_inputs(doc.doubles[home], inputs)
    if system is None:
        raise SemanticError(no, f"not a contact cut system: {reason}")
    doc.ccsystems[name] = system
    doc.order.append(("ccsystems", name))


def _handle_fibration(no, rest, doc):
    m = re.match(r"(\w+)\s+on\s+(\w+)\s*=\s*\[(.*)\]$", rest)
    if not m:
        raise ParseError(no, "expected: fibration NAME on SURF = [+c1 -c2 ...]")
    name, home, items = m.groups()
    _check_name(no, name, doc)
    if home not in doc.surfaces:
        raise SemanticError(no, f"unknown surface {home}")
    cycles = []
    for item in items.split():
        sign = +1
        if item[0] in "+-":
            sign = +1 if item[0] == "+" else -1
            item = item[1:]
        if item not in doc.curves:
            raise SemanticError(no, f"unknown curve {item}")
        c = doc.curves[item]
        if c.kind != CLOSED or c.surface != doc.surfaces[home] or c.side != +1:
            raise SemanticError(no, f"{item} is not a closed curve on {home}")
        cycles.append((c, sign))
    try:
        doc.fibrations[name] = LefschetzFibration(
            doc.surfaces[home], tuple(cycles)
        ).check_allowable()
    except ValueError as e:
        raise SemanticError(no, str(e))
    doc.order.append(("fibrations", name))


def _parse_edges(no, text, doc, home):
    edges = []
    for chunk in [c.strip() for c in text.split(";") if c.strip()]:
        parts = chunk.split()
        if parts[0] == "twist":
            if len(parts) != 4 or parts[1] not in "+-" or parts[3] not in "+-":
                raise ParseError(no, "expected: twist SIDE CURVE SIGN")
            side = +1 if parts[1] == "+" else -1
            cname = parts[2]
            if cname not in doc.curves or doc.curves[cname].kind != CLOSED:
                raise SemanticError(no, f"unknown closed curve {cname}")
            edges.append(
                Type1Edge(side, doc.curves[cname].letters, +1 if parts[3] == "+" else -1)
            )
        elif parts[0] == "slide":
            if len(parts) != 6 or parts[5] not in ("ccw", "cw"):
                raise ParseError(no, "expected: slide I EI J EJ ccw|cw")
            try:
                si, se, oi, oe = (int(x) for x in parts[1:5])
            except ValueError:
                raise ParseError(no, "slide indices must be integers")
            edges.append(
                Type0Edge(
                    (SlideMove(si, se, oi, oe, +1 if parts[5] == "ccw" else -1),)
                )
            )
        elif parts[0] == "slides":
            m = re.match(r"slides\s+(\d+)\s+(.*)$", chunk)
            if not m:
                raise ParseError(no, "expected: slides I (EI J EJ DIR) ...")
            si = int(m.group(1))
            moves = []
            for g in re.findall(r"\(([^)]*)\)", m.group(2)):
                p = g.split()
                if len(p) != 4 or p[3] not in ("ccw", "cw"):
                    raise ParseError(no, "expected slide group (EI J EJ DIR)")
                moves.append(
                    SlideMove(
                        si, int(p[0]), int(p[1]), int(p[2]), +1 if p[3] == "ccw" else -1
                    )
                )
            edges.append(Type0Edge(tuple(moves)))
        else:
            raise ParseError(no, f"unknown edge kind {parts[0]!r}")
    return edges


def _handle_path(no, rest, doc):
    m = re.match(r"(\w+)\s+from\s+(\w+)\s*=\s*\[(.*)\]$", rest)
    if not m:
        raise ParseError(no, "expected: path NAME from CCSYSTEM = [edges]")
    name, src, body = m.groups()
    _check_name(no, name, doc)
    if src not in doc.ccsystems:
        raise SemanticError(no, f"unknown ccsystem {src}")
    edges = _parse_edges(no, body, doc, src)
    doc.paths[name] = CCPath(doc.ccsystems[src], edges)
    doc.order.append(("paths", name))


def _handle_diagram(no, rest, doc):
    m = re.match(r"(\w+)\s+of\s+(\w+)$", rest)
    if not m:
        raise ParseError(no, "expected: diagram NAME of PATH")
    name, src = m.groups()
    _check_name(no, name, doc)
    if src not in doc.paths:
        raise SemanticError(no, f"unknown path {src}")
    try:
        doc.diagrams[name] = diagram_of_path(doc.paths[src])
    except ValueError as e:
        raise SemanticError(no, str(e))
    doc.order.append(("diagrams", name))


_HANDLERS = {
    "surface": _handle_surface,
    "double": _handle_double,
    "curve": _handle_curve,
    "arc": _handle_arc,
    "arcsystem": _handle_arcsystem,
    "ccsystem": _handle_ccsystem,
    "fibration": _handle_fibration,
    "path": _handle_path,
    "diagram": _handle_diagram,
}


# -- printing ---------------------------------------------------------------


def curve_text(c: CurveWord) -> str:
    if c.kind == CLOSED:
        body = " ".join(f"{'+' if l > 0 else '-'}a{abs(l)}" for l in c.letters)
        return f"cyc({body})"
    mid = " ".join(f"{'+' if l > 0 else '-'}a{abs(l)}" for l in c.letters)
    inner = " ".join(x for x in (c.start.token(), mid, c.end.token()) if x)
    return f"lin({inner})"


def ccsystem_text(C: ContactCutSystem, names: List[str]) -> List[str]:
    """Curve declarations plus the system line, for printing documents."""
    lines = []
    for nm, arc in zip(names, C.curves):
        plus = " ".join(f"{'+' if l > 0 else '-'}a{abs(l)}" for l in arc.words[0])
        minus_rev = [-l for l in reversed(arc.words[1])]
        minus = " ".join(f"{'+' if l > 0 else '-'}a{abs(l)}" for l in minus_rev)
        toks = [t for t in (
            plus,
            f"+d{arc.end.segment}@{arc.end.index}",
            minus,
            f"-d{arc.start.segment}@{arc.start.index}",
        ) if t]
        lines.append(f"curve {nm} on S = cyc({' '.join(toks)})")
    return lines
