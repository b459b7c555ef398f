"""Command-line front end: parse documents, run commands, report JSON.

Exit codes: 0 success, 1 validation or semantic failure, 2 usage or
parse errors.  Reports go to standard output as JSON with a schema
version; SVG files are the only other artifacts.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl
from .chart import DoubledSurface
from .curves import is_arc_system
from .cutgraph import BudgetExceeded, PathError, Type0Edge, Type1Edge, validate_path
from .cutsystems import validate_ccs
from .invariants import (
    count_N0,
    exhaustive_L,
    family1,
    family1_lower,
    family2,
    family2_lower,
    homology_report,
)
from .lefschetz import (
    LefschetzError,
    MonodromyWord,
    diagram_of_path,
    hurwitz_move,
    lf_to_diagram,
    lf_to_path,
    normalize_L0,
    path_to_lf,
    stabilize,
    stabilize_path,
)
from .words import ARCKIND, CLOSED

SCHEMA = 1


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _report(command: str, payload: dict) -> dict:
    out = {"schema": SCHEMA, "command": command}
    out.update(payload)
    return out


def _load(path: str) -> dsl.Document:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliFailure(2, f"cannot read {path}: {e}")
    try:
        return dsl.parse(text)
    except dsl.ParseError as e:
        raise CliFailure(2, f"parse error: {e}")
    except dsl.SemanticError as e:
        raise CliFailure(1, f"semantic error: {e}")


def _edge_json(e):
    if isinstance(e, Type1Edge):
        return {
            "kind": "twist",
            "side": "+" if e.side > 0 else "-",
            "letters": list(e.letters),
            "sign": e.sign,
        }
    return {
        "kind": "slides",
        "moves": [
            [mv.slid, mv.slid_end, mv.over, mv.over_end, mv.direction]
            for mv in e.slides
        ],
    }


def _cycles_json(L):
    return [
        {"letters": list(c.letters), "sign": s} for c, s in L.cycles
    ]


def cmd_validate(args) -> dict:
    doc = _load(args.file)
    objects = {}
    ok_all = True
    for kind, name in doc.order:
        if kind == "arcsystems":
            sysd = doc.arcsystems[name]
            ok, reason = is_arc_system(sysd.surface, sysd.arcs)
        elif kind == "ccsystems":
            ok, reason = validate_ccs(doc.ccsystems[name])
        elif kind == "paths":
            rep = validate_path(doc.paths[name], loop_budget=args.budget or 200)
            ok, reason = rep.valid, rep.reason
            objects[f"path:{name}"] = {
                "valid": rep.valid,
                "reason": rep.reason,
                "n0": rep.n0,
                "edges": rep.edge_count,
                "loop": rep.is_loop,
            }
            ok_all = ok_all and ok
            continue
        elif kind == "diagrams":
            ok, reason = doc.diagrams[name].verify()
        else:
            ok, reason = True, "ok"
        objects[f"{kind[:-1]}:{name}"] = {"valid": ok, "reason": reason}
        ok_all = ok_all and ok
    if not ok_all:
        raise CliFailure(1, json.dumps(_report("validate", {"ok": False, "objects": objects}), sort_keys=True))
    return _report("validate", {"ok": True, "objects": objects})


def cmd_path_to_lf(args) -> dict:
    doc = _load(args.file)
    name, path = doc.sole("paths", args.path)
    L = path_to_lf(path)
    return _report(
        "path-to-lf",
        {
            "ok": True,
            "path": name,
            "fiber": {
                "genus": L.fiber.spec.genus,
                "boundaries": L.fiber.spec.boundary_count,
            },
            "cycles": _cycles_json(L),
            "visible": list(L.visible or ()),
        },
    )


def cmd_lf_to_path(args) -> dict:
    doc = _load(args.file)
    name, L = doc.sole("fibrations", args.lf)
    path = lf_to_path(L, budget=args.budget or 100_000)
    rep = validate_path(path, loop_budget=0)
    return _report(
        "lf-to-path",
        {
            "ok": rep.valid,
            "fibration": name,
            "n0": rep.n0,
            "edges": [_edge_json(e) for e in path.edges],
        },
    )


def cmd_lf_to_diagram(args) -> dict:
    doc = _load(args.file)
    name, L = doc.sole("fibrations", args.lf)
    bits = [int(b) for b in (args.sides or "0" * len(L.cycles))]
    D = lf_to_diagram(L, bits)
    ok, reason = D.verify()
    return _report(
        "lf-to-diagram",
        {
            "ok": ok,
            "reason": reason,
            "fibration": name,
            "sides": "".join(str(b) for b in bits),
            "systems": len(D.systems),
        },
    )


def cmd_hurwitz(args) -> dict:
    doc = _load(args.file)
    name, L = doc.sole("fibrations", args.lf)
    L2 = hurwitz_move(L, args.index, args.dir)
    same = MonodromyWord(L.fiber, L.cycles).same_action(
        MonodromyWord(L2.fiber, L2.cycles)
    )
    return _report(
        "hurwitz",
        {
            "ok": True,
            "fibration": name,
            "index": args.index,
            "dir": args.dir,
            "cycles": _cycles_json(L2),
            "monodromy_preserved": same,
        },
    )


def cmd_stabilize(args) -> dict:
    doc = _load(args.file)
    arc = doc.curves.get(args.arc)
    if arc is None or arc.kind != ARCKIND:
        raise CliFailure(1, f"--arc must name a declared arc, got {args.arc!r}")
    sign = -1 if args.sign == "-" else +1
    if args.path:
        _, path = doc.sole("paths", args.path)
        new_path, stab, removals = stabilize_path(path, arc, sign)
        rep = validate_path(new_path, loop_budget=0)
        return _report(
            "stabilize",
            {
                "ok": rep.valid,
                "mode": "path",
                "removals": removals,
                "old_edges": len(path.edges),
                "new_edges": len(new_path.edges),
                "n0": rep.n0,
                "fiber": {
                    "genus": stab.fiber.spec.genus,
                    "boundaries": stab.fiber.spec.boundary_count,
                },
            },
        )
    name, L = doc.sole("fibrations", args.lf)
    stab = stabilize(L, arc, sign)
    return _report(
        "stabilize",
        {
            "ok": True,
            "mode": "fibration",
            "fibration": name,
            "fiber": {
                "genus": stab.fiber.spec.genus,
                "boundaries": stab.fiber.spec.boundary_count,
            },
            "new_cycle": list(stab.new_cycle.letters),
        },
    )


def cmd_normalize_l0(args) -> dict:
    doc = _load(args.file)
    name, L = doc.sole("fibrations", args.lf)
    from .curves import dual_curves

    visible = (
        [int(x) for x in args.visible.split(",") if x != ""]
        if args.visible
        else list(range(len(L.cycles)))
    )
    out = normalize_L0(L, dual_curves(L.fiber), visible)
    same = MonodromyWord(L.fiber, L.cycles).same_action(
        MonodromyWord(out.fiber, out.cycles)
    )
    return _report(
        "normalize-l0",
        {
            "ok": True,
            "fibration": name,
            "cycles": _cycles_json(out),
            "monodromy_preserved": same,
        },
    )


def cmd_l_bound(args) -> dict:
    if args.family:
        if args.n is None:
            raise CliFailure(2, "--family needs --n")
        bundle = family1(args.n) if args.family == "family1" else family2(args.n)
        lower = family1_lower(bundle) if args.family == "family1" else family2_lower(bundle)
        upper = count_N0(bundle.path)
        return _report(
            "l-bound",
            {
                "ok": lower == upper,
                "family": args.family,
                "n": args.n,
                "upper": upper,
                "lower": lower,
                "l_invariant": upper if lower == upper else None,
            },
        )
    if not args.file:
        raise CliFailure(2, "l-bound needs a file or --family")
    doc = _load(args.file)
    name, path = doc.sole("paths", args.path)
    D = diagram_of_path(path)
    res = exhaustive_L(D, vertex_budget=args.budget or 100_000)
    return _report(
        "l-bound",
        {
            "ok": True,
            "path": name,
            "exhaustive": res.value,
            "certificate_edges": [_edge_json(e) for e in res.path.edges],
        },
    )


def cmd_invariants(args) -> dict:
    doc = _load(args.file)
    name, L = doc.sole("fibrations", args.lf)
    r = homology_report(L)
    return _report(
        "invariants",
        {
            "ok": True,
            "fibration": name,
            "euler": r.euler,
            "betti": list(r.betti),
            "h1_invariant_factors": r.h1_factors,
            "pi1": {
                "generators": r.pi1_generators,
                "relators": [list(x) for x in r.pi1_relators],
                "free": r.pi1_free,
                "free_rank": r.pi1_free_rank,
                "trivial": r.pi1_trivial,
            },
            "c1_zero": r.c1_zero,
            "intersection_form": r.intersection_form,
            "intersection_form_even": r.intersection_form_even,
        },
    )


def cmd_example(args) -> dict:
    if args.which == "family1":
        bundle = family1(args.n)
        lower = family1_lower(bundle)
    else:
        bundle = family2(args.n)
        lower = family2_lower(bundle)
    rep = validate_path(bundle.path, loop_budget=0)
    return _report(
        "example",
        {
            "ok": rep.valid and lower == rep.n0,
            "family": args.which,
            "n": args.n,
            "n0": rep.n0,
            "lower": lower,
            "fiber": {
                "genus": bundle.fibration.fiber.spec.genus,
                "boundaries": bundle.fibration.fiber.spec.boundary_count,
            },
            "cycles": _cycles_json(bundle.fibration),
            "edges": [_edge_json(e) for e in bundle.path.edges],
        },
    )


def cmd_render(args) -> dict:
    doc = _load(args.file)
    from .svg import render_diagram_files

    if args.path:
        _, path = doc.sole("paths", args.path)
        D = diagram_of_path(path)
    else:
        _, D = doc.sole("diagrams", args.diagram)
    files = render_diagram_files(D.systems, args.svg)
    return _report("render", {"ok": True, "files": files})


def cmd_connect(args) -> dict:
    doc = _load(args.file)
    from .cutgraph import connect

    _, v = doc.sole("ccsystems", getattr(args, "from"))
    _, w = doc.sole("ccsystems", args.to)
    factors = []
    for item in args.factors.split(","):
        item = item.strip()
        sign = +1
        if item and item[0] in "+-":
            sign = +1 if item[0] == "+" else -1
            item = item[1:]
        if item not in doc.curves:
            raise CliFailure(1, f"unknown curve {item!r} in factorization")
        factors.append((doc.curves[item], sign))
    path = connect(v, w, factors, budget=args.budget or 100_000)
    rep = validate_path(path, loop_budget=0)
    return _report(
        "connect",
        {
            "ok": rep.valid,
            "n0": rep.n0,
            "edges": [_edge_json(e) for e in path.edges],
        },
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="contactcut",
        description="contact cut systems, paths, and Lefschetz translations",
    )
    ap.add_argument("--seed", type=int, default=None, help="recorded for reproducibility")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_file=True):
        p = sub.add_parser(name)
        if needs_file:
            p.add_argument("file", nargs="?" if name == "l-bound" else None)
        p.add_argument("--budget", type=int, default=None)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate)
    p = add("connect", cmd_connect)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--factors", required=True)
    p = add("path-to-lf", cmd_path_to_lf)
    p.add_argument("--path", default=None)
    p = add("lf-to-path", cmd_lf_to_path)
    p.add_argument("--lf", default=None)
    p = add("lf-to-diagram", cmd_lf_to_diagram)
    p.add_argument("--lf", default=None)
    p.add_argument("--sides", default=None)
    p = add("hurwitz", cmd_hurwitz)
    p.add_argument("--lf", default=None)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--dir", choices=("left", "right"), required=True)
    p = add("stabilize", cmd_stabilize)
    p.add_argument("--lf", default=None)
    p.add_argument("--path", default=None)
    p.add_argument("--arc", required=True)
    p.add_argument("--sign", choices=("+", "-"), default="+")
    p = add("normalize-l0", cmd_normalize_l0)
    p.add_argument("--lf", default=None)
    p.add_argument("--visible", default=None)
    p = add("l-bound", cmd_l_bound)
    p.add_argument("--family", choices=("family1", "family2"), default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--path", default=None)
    p = sub.add_parser("example")
    p.add_argument("which", choices=("family1", "family2"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=cmd_example)
    p = add("invariants", cmd_invariants)
    p.add_argument("--lf", default=None)
    p = add("render", cmd_render)
    p.add_argument("--path", default=None)
    p.add_argument("--diagram", default=None)
    p.add_argument("--svg", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        report = args.fn(args)
    except CliFailure as e:
        code = e.code
        msg = str(e)
        try:
            json.loads(msg)
            print(msg)
        except Exception:
            print(json.dumps({"schema": SCHEMA, "ok": False, "error": msg}, sort_keys=True))
        return code
    except (PathError, LefschetzError, BudgetExceeded, KeyError, ValueError) as e:
        print(
            json.dumps(
                {"schema": SCHEMA, "ok": False, "error": f"{type(e).__name__}: {e}"},
                sort_keys=True,
            )
        )
        return 1
    print(json.dumps(report, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
