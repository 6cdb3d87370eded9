"""Command line front end.

Verbs: validate, determinacy, encode, births-deaths, present, verify,
admissible, project.  Inputs are the JSON formats documented in the README;
set/lattice/box/points options accept inline JSON or a file path.  Exit codes:
0 property holds or artifact produced, 1 property fails (the report carries a
witness), 2 malformed input.  Output is deterministic byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io as dio
from .errors import ConsistencyError, InputError, NotDeterminedError
from .extgrid import Box, convex_projection, ext_box, extended_projection, \
    is_integral, join_below, meet_above, sort_points
from .determinacy import (DEFAULT_MARGIN, default_oracle_window, encode,
                          is_S_determined, is_S_determined_oracle)
from .grid_module import ExtendedView
from .linalg import validate_diagram
from .grid_module import validate_module
from .determinacy import check_encoding
from .presentation import (births_deaths, build_presentation,
                           diagram_births_deaths, is_admissible,
                           verify_presentation)

PROG = "detmod"


def _read_json_arg(value: str):
    """Inline JSON when the value looks like JSON, otherwise a file path."""
    text = value.strip()
    if not text.startswith(("[", "{")):
        with open(value, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {value!r}: {exc}") from exc


def _read_input(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _parse_window(value: str, dim: int) -> Box:
    parts = value.split("..")
    if len(parts) != 2:
        raise InputError(f"invalid window {value!r}; expected a..b with JSON points")
    a = dio.decode_point(_coerce_json(parts[0]), dim=dim)
    b = dio.decode_point(_coerce_json(parts[1]), dim=dim)
    return Box(a, b)


def _coerce_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON fragment {text!r}: {exc}") from exc


def _margin(args) -> int:
    if args.margin is not None:
        value = args.margin
    else:
        env = os.environ.get("DETMOD_MARGIN")
        if env is None:
            return DEFAULT_MARGIN
        try:
            value = int(env)
        except ValueError as exc:
            raise InputError(f"DETMOD_MARGIN={env!r} is not an integer") from exc
    if value < 1:
        raise InputError(f"margin must be a positive integer, got {value}")
    return value


def _canonical_box(module) -> Box:
    """Box whose extension is the default determining set for a stored module."""
    a, b = module.box.a, module.box.b
    shifted = tuple(x + 1 for x in a)
    if all(s <= y for s, y in zip(shifted, b)):
        return Box(shifted, b)
    return Box(a, b)


def _emit(payload, out_path: str | None) -> None:
    text = dio.canonical_dumps(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_module(path: str):
    obj = _read_input(path)
    if dio.detect_kind(obj) != "module":
        raise InputError(f"{path}: expected a module file (with a \"box\" key)")
    return dio.module_from_json(obj)


def _cmd_validate(args) -> int:
    obj = _read_input(args.input)
    kind = dio.detect_kind(obj)
    if kind == "module":
        check = validate_module(dio.module_from_json(obj))
    elif kind == "diagram":
        check = validate_diagram(dio.diagram_from_json(obj))
    else:
        raise InputError("validate expects a module or diagram file")
    payload = {"ok": check.ok}
    if not check.ok:
        payload["message"] = check.message
        payload["square"] = [dio.encode_point(p) for p in check.square] if check.square else None
    _emit(payload, args.out)
    return 0 if check.ok else 1


def _cmd_determinacy(args) -> int:
    module = _load_module(args.input)
    view = ExtendedView(module)
    s = dio.pointset_from_json(_read_json_arg(args.set), dim=module.box.dim)
    margin = _margin(args)
    support = not args.no_support
    if args.oracle:
        window = _parse_window(args.window, module.box.dim) if args.window \
            else default_oracle_window(module.box, s)
        report = is_S_determined_oracle(view, s, window, margin=margin, check_support=support)
    else:
        report = is_S_determined(view, s, check_support=support, margin=margin)
    _emit(dio.determinacy_report_to_json(report), args.out)
    return 0 if report.determined else 1


def _cmd_encode(args) -> int:
    module = _load_module(args.input)
    view = ExtendedView(module)
    s = dio.pointset_from_json(_read_json_arg(args.set), dim=module.box.dim)
    diagram = encode(view, s, margin=_margin(args))
    _emit(dio.diagram_to_json(diagram), args.out)
    return 0


def _cmd_births_deaths(args) -> int:
    obj = _read_input(args.input)
    kind = dio.detect_kind(obj)
    if kind == "diagram":
        report = diagram_births_deaths(dio.diagram_from_json(obj))
    elif kind == "module":
        module = dio.module_from_json(obj)
        view = ExtendedView(module)
        if args.set:
            s = dio.pointset_from_json(_read_json_arg(args.set), dim=module.box.dim)
        else:
            s = ext_box(_canonical_box(module)).points()
        report = births_deaths(view, s, margin=_margin(args))
    else:
        raise InputError("births-deaths expects a module or diagram file")
    _emit(dio.birth_death_to_json(report), args.out)
    return 0


def _cmd_present(args) -> int:
    module = _load_module(args.input)
    view = ExtendedView(module)
    if args.set:
        s = dio.pointset_from_json(_read_json_arg(args.set), dim=module.box.dim)
    else:
        s = ext_box(_canonical_box(module)).points()
    pres = build_presentation(view, s, margin=_margin(args))
    _emit(dio.presentation_to_json(pres), args.out)
    return 0


def _default_test_points(module) -> list:
    box = _canonical_box(module)
    pts = set(ext_box(box).points())
    lo = tuple(x - 2 for x in module.box.a)
    hi = tuple(x + 2 for x in module.box.b)
    pts.update(Box(lo, hi).integer_points())
    return sort_points(pts)


def _cmd_verify(args) -> int:
    module = _load_module(args.input)
    view = ExtendedView(module)
    if bool(args.presentation) == bool(args.encoding):
        raise InputError("verify needs exactly one of --presentation or --encoding")
    if args.presentation:
        pres = dio.presentation_from_json(_read_json_arg(args.presentation))
        pts = set(_default_test_points(module))
        if args.window:
            window = _parse_window(args.window, module.box.dim)
            pts.update(window.integer_points())
        check = verify_presentation(view, pres, pts)
        _emit(dio.presentation_check_to_json(check), args.out)
        return 0 if check.ok else 1
    if not args.set:
        raise InputError("verify --encoding also needs --set")
    diagram = dio.diagram_from_json(_read_json_arg(args.encoding))
    s = dio.pointset_from_json(_read_json_arg(args.set), dim=module.box.dim)
    ok = check_encoding(view, s, diagram, margin=_margin(args))
    _emit({"ok": ok}, args.out)
    return 0 if ok else 1


def _cmd_admissible(args) -> int:
    module = _load_module(args.input)
    lattice = dio.pointset_from_json(_read_json_arg(args.lattice), dim=module.box.dim)
    verdict = is_admissible(module, lattice, margin=_margin(args))
    _emit({"admissible": verdict}, args.out)
    return 0 if verdict else 1


def _cmd_project(args) -> int:
    box = dio.box_from_json(_read_json_arg(args.box))
    points = sort_points(dio.pointset_from_json(_read_json_arg(args.points), dim=box.dim))
    extended = ext_box(box).points()
    rows = []
    identity_holds = True
    for c in points:
        a = join_below(extended, c)
        ba = meet_above(box, a)
        row = {
            "point": dio.encode_point(c),
            "join_below": dio.encode_point(a),
            "extended_projection": dio.encode_point(ba),
        }
        if is_integral(c):
            pi = convex_projection(box, c)
            row["convex_projection"] = dio.encode_point(pi)
            if pi != ba or ba != extended_projection(box, c):
                identity_holds = False
        else:
            row["convex_projection"] = None
        rows.append(row)
    _emit({"rows": rows, "identity_holds": identity_holds}, args.out)
    return 0 if identity_holds else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        return p

    p = add("validate", _cmd_validate, help="check shapes and commutativity")
    p.add_argument("input")

    p = add("determinacy", _cmd_determinacy, help="decide whether a set determines the module")
    p.add_argument("input")
    p.add_argument("--set", required=True, help="point set, inline JSON or file")
    p.add_argument("--oracle", action="store_true", help="use the brute-force window method")
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--window", help="oracle window as a..b with JSON corner points")
    p.add_argument("--no-support", action="store_true", help="skip the support condition")

    p = add("encode", _cmd_encode, help="emit the finite encoding diagram")
    p.add_argument("input")
    p.add_argument("--set", required=True)
    p.add_argument("--margin", type=int, default=None)

    p = add("births-deaths", _cmd_births_deaths, help="locate births and deaths")
    p.add_argument("input")
    p.add_argument("--set")
    p.add_argument("--margin", type=int, default=None)

    p = add("present", _cmd_present, help="build a finite presentation")
    p.add_argument("input")
    p.add_argument("--set")
    p.add_argument("--margin", type=int, default=None)

    p = add("verify", _cmd_verify, help="verify an emitted presentation or encoding")
    p.add_argument("input")
    p.add_argument("--presentation")
    p.add_argument("--encoding")
    p.add_argument("--set")
    p.add_argument("--window", help="extra integer test window as a..b")
    p.add_argument("--margin", type=int, default=None)

    p = add("admissible", _cmd_admissible, help="test a join-closed lattice for admissibility")
    p.add_argument("input")
    p.add_argument("--lattice", required=True)
    p.add_argument("--margin", type=int, default=None)

    p = add("project", _cmd_project, help="tabulate the projection morphisms for a box")
    p.add_argument("--box", required=True)
    p.add_argument("--points", required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NotDeterminedError as exc:
        payload = {"holds": False,
                   "witness": [dio.encode_point(exc.witness[0]), dio.encode_point(exc.witness[1])]}
        _emit(payload, getattr(args, "out", None))
        return 1
    except (InputError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"{PROG}: internal consistency error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
