"""Command-line front end: ``python3 -m regtrees <command> ...``.

Commands: basis, coproduct, renorm, check, wick.  Exit status is 0 on
success, 1 when a check fails and 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import casebook
from .characters import CharacterError, MinusCharacter, minus_from_values
from .coproducts import MAPS, apply_map
from .coeffs import render_coeff
from .expr import ParseError, parse_coeff, parse_rooted, parse_tree, render, render_latex_tree, render_tree, sorted_terms
from .identities import SUITES, SuiteContext, format_report, run_suites
from .renorm import M_from_character, M_from_R, R_from_character
from .rules import RuleError, RuleTable, load_rules

USAGE_ERRORS = (ParseError, RuleError, CharacterError, ValueError, OSError)

_CHAR_LINE = re.compile(r'^\s*"([^"]*)"\s*=\s*(.+?)\s*$')


def parse_character(text: str, rule: RuleTable, name: str = "l") -> MinusCharacter:
    """Character file: one ``"<tree>" = <coefficient>`` per line; ``#`` comments."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        m = _CHAR_LINE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected '\"<tree>\" = <coefficient>'")
        tree = parse_tree(m.group(1), rule)
        if tree in values:
            raise ParseError(f"line {lineno}: {m.group(1)} listed twice")
        values[tree] = parse_coeff(m.group(2))
    return minus_from_values(rule, values, name=name)


def load_character(source: str, rule: RuleTable) -> MinusCharacter:
    if source in casebook.CHARACTERS:
        if source == "gkpz":
            return casebook.gkpz_character(rule=rule)
        if source == "wick":
            return casebook.wick_character(5)
        return casebook.CHARACTERS[source](rule)
    with open(source, encoding="utf-8") as fh:
        return parse_character(fh.read(), rule, name=source)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _poly_cap(text: str):
    parts = [int(p) for p in re.split(r"[,\s]+", text.strip("()[] ")) if p]
    return parts[0] if len(parts) == 1 else tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regtrees", description="Exact algebra of decorated trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="enumerate conforming trees with their degrees")
    p.add_argument("--rule", required=True)
    p.add_argument("--max-degree", type=_fraction, default=None)
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--poly-cap", type=_poly_cap, default=0)

    p = sub.add_parser("coproduct", help="apply a coproduct to an expression")
    p.add_argument("--map", required=True, choices=sorted(MAPS))
    p.add_argument("--rule", required=True)
    p.add_argument("--cap", type=_fraction, default=None)
    p.add_argument("--format", choices=("structured", "text"), default="structured")
    p.add_argument("expr")

    p = sub.add_parser("renorm", help="apply the renormalisation map of a character")
    p.add_argument("--rule", required=True)
    p.add_argument("--char", required=True, help="wick, kpz, gkpz, qua or a character file")
    p.add_argument("--via", choices=("character", "recursive"), default="character")
    p.add_argument("--format", choices=("text", "structured", "latex"), default="text")
    p.add_argument("expr")

    p = sub.add_parser("check", help="run identity suites")
    p.add_argument("--rule", required=True)
    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=_fraction, default=None)

    p = sub.add_parser("wick", help="compare the Wick renormalised power with the Hermite polynomial")
    p.add_argument("--n", type=int, required=True)
    return parser


def cmd_basis(args, out) -> int:
    rule = load_rules(args.rule)
    for t in rule.generate_basis(args.max_degree, args.max_edges, args.poly_cap):
        d = rule.degree(t)
        out.write(f"{render_tree(t, rule)}\t{d.numerator if d.denominator == 1 else d}\n")
    return 0


def cmd_coproduct(args, out) -> int:
    rule = load_rules(args.rule)
    if args.map == "delta-hat-1":
        x = parse_rooted(args.expr, rule)
    else:
        x = parse_tree(args.expr, rule)
        if args.map != "delta-plus" and not rule.conforms(x):
            raise ValueError(f"{args.expr} does not conform to rule {rule.name}")
    result = apply_map(args.map, x, rule, args.cap)
    _emit(result, rule, args.format, out)
    return 0


def cmd_renorm(args, out) -> int:
    rule = load_rules(args.rule)
    l = load_character(args.char, rule)
    tau = parse_tree(args.expr, rule)
    if not rule.conforms(tau):
        raise ValueError(f"{args.expr} does not conform to rule {rule.name}")
    M = M_from_character(l) if args.via == "character" else M_from_R(R_from_character(l), rule)[0]
    result = M(tau)
    if args.format == "latex":
        for term, coeff in sorted_terms(result):
            out.write(f"{render_coeff(coeff)}\t{render_latex_tree(term, rule)}\n")
        return 0
    _emit(result, rule, args.format, out)
    return 0


def cmd_check(args, out) -> int:
    rule = load_rules(args.rule)
    ctx = SuiteContext(rule, args.max_edges, args.seed, degree_cap=args.max_degree)
    outcomes = run_suites(ctx, [args.suite])
    header = [
        f"rule {rule.name}, suite {args.suite}, max edges {args.max_edges}, seed {args.seed}",
        f"{len(ctx.basis)} basis trees, {len(ctx.plus_basis)} elements of T_+",
    ]
    if args.suite in ("deltaM", "all"):
        header.append("model identity checked through its algebraic form: upper triangularity and hat M")
    out.write(format_report(outcomes, header) + "\n")
    return 0 if all(o.ok for o in outcomes) else 1


def cmd_wick(args, out) -> int:
    if args.n < 0:
        raise ValueError("--n must be non-negative")
    report = casebook.wick_check(args.n)
    out.write(f"M Xi^{args.n}\t{casebook.render_in_x(report.image)}\n")
    out.write(f"H_{args.n}\t{casebook.render_in_x(report.hermite)}\n")
    out.write(f"exp(-R) Xi^{args.n}\t{casebook.render_in_x(report.exp_image)}\n")
    return 0 if report.ok else 1


def _emit(result, rule, fmt, out):
    if fmt == "structured":
        text = render("structured", result, rule)
        out.write(text + "\n" if text else "")
    else:
        out.write(render("text", result, rule) + "\n")


COMMANDS = {
    "basis": cmd_basis,
    "coproduct": cmd_coproduct,
    "renorm": cmd_renorm,
    "check": cmd_check,
    "wick": cmd_wick,
}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return COMMANDS[args.command](args, out)
    except USAGE_ERRORS as exc:
        err.write(f"regtrees {args.command}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
