"""Command-line front end.

Exit codes: 0 success or validation pass, 1 validation failure (JSON report
with ``"pass": false`` on stdout), 2 malformed input (message on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import demos
from .exactla import format_scalar
from .front import DegenerateFront, FrontDiagram, build_front
from .mutation import ExceptionalSequence, SODPair, act, mutation_period
from .puiseux import FormalType, ParseError
from .schober import (
    IrregularGluing,
    StokesSchoberShadow,
    decategorify_schober,
    invariants_report,
    validate_irregular_gluing,
)
from .sheafknot import FrontSheaf, monodromy_walk, validate_front_sheaf
from .sheafline import LineSheaf, validate_line
from .svg import emit_svg


class InputError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _load_json(path: str):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if eps <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return eps


def _front_field(data: dict, base: Path) -> FrontDiagram:
    raw = data.get("front")
    if isinstance(raw, str):
        raw = _load_json(str(base / raw))
    if not isinstance(raw, dict):
        raise InputError("'front' must be an inline front or a path to one")
    return FrontDiagram.from_json(raw)


def _load_sheaf(path: str) -> FrontSheaf:
    data = _load_json(path)
    return FrontSheaf.from_json(data, _front_field(data, Path(path).parent))


def _emit(obj, out: str | None = None) -> None:
    text = dumps(obj) + "\n"
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _report(report) -> int:
    _emit(report.to_json())
    return 0 if report.passed else 1


def cmd_front_build(a) -> int:
    if a.type:
        data = _load_json(a.type)
        t = FormalType.from_json(data) if isinstance(data, dict) else FormalType.parse(data)
    elif a.cls:
        t = FormalType.parse(a.cls)
    else:
        raise InputError("give --type T.json or at least one --class expression")
    d = build_front(t, a.epsilon)
    _emit(d.to_json(), a.out)
    if a.svg:
        _write(a.svg, emit_svg(d))
    if a.out:
        _emit({"strands": d.strands, "crossings": len(d.crossings),
               "components": len(d.components)})
    return 0


def cmd_validate_line(a) -> int:
    s = LineSheaf.from_json(_load_json(a.input))
    return _report(validate_line(s.points, s))


def cmd_sheaf_validate(a) -> int:
    return _report(validate_front_sheaf(_load_sheaf(a.input)))


def cmd_sheaf_monodromy(a) -> int:
    s = _load_sheaf(a.input)
    report = validate_front_sheaf(s)
    if not report.passed:
        return _report(report)
    if a.strand is not None:
        if not 0 <= a.strand < s.front.strands:
            raise InputError(f"no strand {a.strand}")
        comp = s.front.component_of(a.strand)
    else:
        comp = a.component
        if not 0 <= comp < len(s.front.components):
            raise InputError(f"no component {comp}")
    w = monodromy_walk(s, comp)
    _emit({"component": comp, "base_segment": w.base_segment, "matrix": w.matrix.to_json(),
           "charpoly": [format_scalar(c) for c in w.charpoly]})
    return 0


def cmd_mutate_act(a) -> int:
    seq = ExceptionalSequence.from_json(_load_json(a.input))
    _emit(act(seq, a.word).to_json(), a.out)
    return 0


def cmd_mutate_period(a) -> int:
    p = SODPair.from_json(_load_json(a.input))
    _emit({"period": mutation_period(p, a.max)})
    return 0


def cmd_schober_decategorify(a) -> int:
    front = FrontDiagram.from_json(_load_json(a.front))
    shadow = StokesSchoberShadow.from_json(_load_json(a.input), front)
    s = decategorify_schober(shadow)
    report = validate_front_sheaf(s)
    if not report.passed:
        return _report(report)
    _emit(s.to_json(), a.out)
    return 0


def cmd_schober_validate(a) -> int:
    data = _load_json(a.input)
    sheaf = data.get("sheaf")
    if isinstance(sheaf, str):
        sheaf = _load_json(str(Path(a.input).parent / sheaf))
    if not isinstance(sheaf, dict):
        raise InputError("'sheaf' must be an inline front sheaf or a path to one")
    fs = FrontSheaf.from_json(sheaf, _front_field(sheaf, Path(a.input).parent))
    gd = IrregularGluing.from_json(data, fs)
    report = validate_irregular_gluing(gd)
    out = report.to_json()
    if report.passed:
        out["invariants"] = invariants_report(gd)
    _emit(out)
    return 0 if report.passed else 1


def cmd_demo_airy(a) -> int:
    d = demos.airy_front(a.epsilon)
    _write(a.svg or "airy.svg", emit_svg(d))
    _emit({"strands": d.strands, "crossings": len(d.crossings), "components": len(d.components)})
    return 0


def cmd_demo_spherical(a) -> int:
    if a.N < 1:
        raise InputError("N must be at least 1")
    shadow = demos.spherical_shadow(a.N, a.epsilon)
    d = shadow.front
    if a.svg:
        _write(a.svg, emit_svg(d))
    sheaf = decategorify_schober(shadow) if shadow.closes() else None
    _emit({"N": a.N, "strands": d.strands, "crossings": len(d.crossings),
           "components": len(d.components), "period": demos.spherical_period(),
           "closes": shadow.closes(),
           "sheaf_valid": sheaf is not None and validate_front_sheaf(sheaf).passed})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="legschober", description=__doc__.splitlines()[0])
    top = p.add_subparsers(dest="group", required=True)

    front = top.add_parser("front").add_subparsers(dest="verb", required=True)
    b = front.add_parser("build", help="front of a formal type")
    b.add_argument("--type", help="formal type JSON (object, or list of expressions)")
    b.add_argument("--class", dest="cls", action="append", help="class expression, repeatable")
    b.add_argument("--epsilon", type=_epsilon, default=Fraction(1, 10))
    b.add_argument("--out")
    b.add_argument("--svg")
    b.set_defaults(func=cmd_front_build)

    sheaf = top.add_parser("sheaf").add_subparsers(dest="verb", required=True)
    v = sheaf.add_parser("validate-line")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_validate_line)
    v = sheaf.add_parser("validate")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_sheaf_validate)
    v = sheaf.add_parser("monodromy")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--component", type=int, default=0)
    v.add_argument("--strand", type=int)
    v.set_defaults(func=cmd_sheaf_monodromy)

    mut = top.add_parser("mutate").add_subparsers(dest="verb", required=True)
    v = mut.add_parser("act")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--word", required=True)
    v.add_argument("--out")
    v.set_defaults(func=cmd_mutate_act)
    v = mut.add_parser("period")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--max", type=int, default=100)
    v.set_defaults(func=cmd_mutate_period)

    sch = top.add_parser("schober").add_subparsers(dest="verb", required=True)
    v = sch.add_parser("decategorify")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--front", required=True)
    v.add_argument("--out")
    v.set_defaults(func=cmd_schober_decategorify)
    v = sch.add_parser("validate")
    v.add_argument("--in", dest="input", required=True)
    v.set_defaults(func=cmd_schober_validate)

    demo = top.add_parser("demo").add_subparsers(dest="verb", required=True)
    v = demo.add_parser("airy")
    v.add_argument("--svg", help="output path (default airy.svg)")
    v.add_argument("--epsilon", type=_epsilon, default=demos.DEMO_EPSILON)
    v.set_defaults(func=cmd_demo_airy)
    v = demo.add_parser("spherical")
    v.add_argument("N", type=int)
    v.add_argument("--svg")
    v.add_argument("--epsilon", type=_epsilon, default=demos.DEMO_EPSILON)
    v.set_defaults(func=cmd_demo_spherical)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max", 1) is not None and getattr(args, "max", 1) < 1:
        print("error: --max must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (InputError, ParseError, DegenerateFront, ValueError, KeyError, IndexError,
            ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())

