"""Text syntax for trees and coefficients, and deterministic rendering.

Tree grammar::

    expr   := factor { ['*'] factor }
    factor := 'One' | 'Xi' ['_' name] | 'X' ['^' midx | '_' digit]
            | name [midx] '(' expr ')' | 'C' '(' expr ')'
    midx   := '[' int {',' int} ']'

``I1(...)`` is shorthand for the kernel ``I`` with decoration e_1, and
likewise for any kernel name followed by a coordinate digit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .coeffs import Poly, needs_parens, render_coeff
from .lincomb import LinComb
from .rules import RuleTable
from .trees import Forest, RootedForest, Tree, graft, unit, unit_index


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(.))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, kind=None, value=None):
        if self.i >= len(self.toks):
            return None
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            return None
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, kind=None, value=None):
        tok = self.peek(kind, value)
        if tok is None:
            where = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
            want = value or kind or "token"
            raise ParseError(f"expected {want!r} at position {where} in {self.text!r}")
        self.i += 1
        return tok

    def done(self):
        if self.i != len(self.toks):
            raise ParseError(f"unexpected {self.toks[self.i][1]!r} at position {self.toks[self.i][2]}")


class TreeParser(_Parser):
    def __init__(self, text: str, rule: RuleTable):
        super().__init__(text)
        self.rule = rule

    def parse(self) -> RootedForest:
        if not self.toks:
            raise ParseError("empty expression")
        out = self.expr()
        self.done()
        return out

    def expr(self) -> RootedForest:
        out = self.factor()
        while True:
            if self.peek("op", "*"):
                self.i += 1
                out = out.star(self.factor())
            elif self.peek("name"):
                out = out.star(self.factor())
            else:
                return out

    def midx(self):
        self.take("op", "[")
        vals = [int(self.take("int")[1])]
        while self.peek("op", ","):
            self.i += 1
            vals.append(int(self.take("int")[1]))
        self.take("op", "]")
        if len(vals) != self.rule.dim + 1:
            raise ParseError(f"multi-index {vals} needs {self.rule.dim + 1} entries")
        return tuple(vals)

    def factor(self) -> RootedForest:
        rule = self.rule
        _, name, pos = self.take("name")
        if name == "One":
            return RootedForest(unit(rule.dim))
        if name == "X":
            if self.peek("op", "^"):
                self.i += 1
                return RootedForest(Tree(self.midx()))
            if self.peek("op", "_"):
                self.i += 1
                i = int(self.take("int")[1])
                if i > rule.dim:
                    raise ParseError(f"X_{i} out of range for dim {rule.dim}")
                return RootedForest(Tree(unit_index(rule.dim, i)))
            raise ParseError(f"X needs ^[..] or _i at position {pos}")
        if name == "C" and self.peek("op", "("):
            self.take("op", "(")
            inner = self.expr()
            self.take("op", ")")
            return inner.cover()
        if name.startswith("Xi") and not self.peek("op", "("):
            noise = name
            if self.peek("op", "_"):
                self.i += 1
                tok = self.take()
                noise = f"{name}_{tok[1]}"
            if noise not in rule.noises:
                raise ParseError(f"unknown noise {noise!r}")
            return RootedForest(graft(noise, rule.zero(), unit(rule.dim)))
        kernel, k = self._kernel_name(name, pos)
        if self.peek("op", "["):
            if k != rule.zero():
                raise ParseError(f"{name} already carries a derivative")
            k = self.midx()
        self.take("op", "(")
        inner = self.expr()
        self.take("op", ")")
        return inner.graft(kernel, k)

    def _kernel_name(self, name, pos):
        rule = self.rule
        if name in rule.kernels:
            return name, rule.zero()
        m = re.match(r"^(.*?)(\d)$", name)
        if m and m.group(1) in rule.kernels and int(m.group(2)) <= rule.dim:
            return m.group(1), unit_index(rule.dim, int(m.group(2)))
        raise ParseError(f"unknown symbol {name!r} at position {pos}")


def parse_rooted(text: str, rule: RuleTable) -> RootedForest:
    return TreeParser(text, rule).parse()


def parse_tree(text: str, rule: RuleTable) -> Tree:
    rf = parse_rooted(text, rule)
    if rf.rest.trees:
        raise ParseError("C(...) is only meaningful for forests with a distinguished tree")
    return rf.main


class CoeffParser(_Parser):
    """Coefficients: sums of products of rationals, names and powers, e.g. ``-3/2*c^2 + C1``."""

    def parse(self):
        out = self.sum()
        self.done()
        return out

    def sum(self):
        sign = 1
        if self.peek("op", "-"):
            self.i += 1
            sign = -1
        elif self.peek("op", "+"):
            self.i += 1
        out = self.product() * sign
        while self.peek("op", "+") or self.peek("op", "-"):
            op = self.take()[1]
            term = self.product()
            out = out + term if op == "+" else out - term
        return out

    def product(self):
        out = self.power()
        while True:
            if self.peek("op", "*"):
                self.i += 1
                out = out * self.power()
            elif self.peek("op", "/"):
                self.i += 1
                den = self.power()
                if isinstance(den, Poly) or den == 0:
                    raise ParseError("division only by non-zero rationals")
                out = out / den
            else:
                return out

    def power(self):
        base = self.atom()
        if self.peek("op", "^"):
            self.i += 1
            e = int(self.take("int")[1])
            return base**e
        return base

    def atom(self):
        if self.peek("int"):
            return Fraction(int(self.take()[1]))
        if self.peek("name"):
            return Poly.symbol(self.take()[1])
        if self.peek("op", "("):
            self.i += 1
            out = self.sum()
            self.take("op", ")")
            return out
        if self.peek("op", "-"):
            self.i += 1
            return -self.atom()
        self.take("int")


def parse_coeff(text: str):
    return CoeffParser(text).parse()


# --- rendering --------------------------------------------------------


def _dec_suffix(rule: RuleTable, name: str, k) -> str:
    if not any(k):
        return ""
    if sum(k) == 1 and k[0] == 0:
        i = k.index(1)
        if i < 10 and f"{name}{i}" not in rule.kernels and f"{name}{i}" not in rule.noises:
            return str(i)
    return "[" + ",".join(map(str, k)) + "]"


def _render_x(rule: RuleTable, n) -> str:
    if sum(n) == 1:
        return f"X_{n.index(1)}"
    return "X^[" + ",".join(map(str, n)) + "]"


def render_tree(tree: Tree, rule: RuleTable) -> str:
    parts = []
    if any(tree.n):
        parts.append(_render_x(rule, tree.n))
    for t, k, c in tree.edges:
        if t in rule.noises:
            parts.append(t)
        else:
            parts.append(f"{t}{_dec_suffix(rule, t, k)}({render_tree(c, rule)})")
    return "*".join(parts) if parts else "One"


def render_rooted(rf: RootedForest, rule: RuleTable) -> str:
    parts = [] if rf.main.is_unit() and rf.rest.trees else [render_tree(rf.main, rule)]
    parts += [f"C({render_tree(t, rule)})" for t in rf.rest.trees]
    return "*".join(parts)


def render_forest(forest: Forest, rule: RuleTable) -> str:
    return "{" + ", ".join(render_tree(t, rule) for t in forest.trees) + "}"


def render_key(x, rule: RuleTable) -> str:
    if isinstance(x, Tree):
        return render_tree(x, rule)
    if isinstance(x, Forest):
        return render_forest(x, rule)
    if isinstance(x, RootedForest):
        return render_rooted(x, rule)
    if isinstance(x, tuple):
        return " ⊗ ".join(render_key(y, rule) for y in x)
    raise TypeError(type(x).__name__)


def term_order(x):
    """Sort key: larger objects first, then canonical order."""
    if isinstance(x, Tree):
        return (-x.n_edges(), x.key)
    if isinstance(x, Forest):
        return (-sum(t.n_edges() for t in x.trees), [t.key for t in x.trees])
    if isinstance(x, RootedForest):
        return (-sum(t.n_edges() for t in x.all_trees()), x.main.key, [t.key for t in x.rest.trees])
    return tuple(term_order(y) for y in x)


def sorted_terms(lc: LinComb):
    return sorted(lc.items(), key=lambda kv: term_order(kv[0]))


def render_lincomb(lc: LinComb, rule: RuleTable) -> str:
    """One-line sum, e.g. ``Xi*Xi*Xi - 3*c^2*Xi``."""
    if not lc:
        return "0"
    out = ""
    for i, (key, c) in enumerate(sorted_terms(lc)):
        body = render_key(key, rule)
        neg = not needs_parens(c) and c_negative(c)
        mag = -c if neg else c
        if mag == 1:
            text = body
        else:
            ctext = render_coeff(mag)
            if needs_parens(mag):
                ctext = f"({ctext})"
            text = ctext if body == "One" else f"{ctext}*{body}"
        if i == 0:
            out = ("-" if neg else "") + text
        else:
            out += (" - " if neg else " + ") + text
    return out


def c_negative(c) -> bool:
    if isinstance(c, Poly):
        # a single monomial with negative coefficient
        (q,) = c.terms.values()
        return q < 0
    return c < 0


def render_lines(lc: LinComb, rule: RuleTable) -> List[str]:
    """Structured output: one ``coefficient<TAB>term`` line per term, canonical order."""
    return [f"{render_coeff(c)}\t{render_key(k, rule)}" for k, c in sorted_terms(lc)]


def render_latex_tree(tree: Tree, rule: RuleTable) -> str:
    parts = []
    if any(tree.n):
        parts.append("X^{" + ",".join(map(str, tree.n)) + "}")
    for t, k, c in tree.edges:
        if t in rule.noises:
            parts.append("\\Xi" if t == "Xi" else "\\Xi_{" + t[3:] + "}")
        else:
            sub = _dec_suffix(rule, t, k).strip("[]")
            name = "\\mathcal{" + t[0] + "}" + t[1:]
            if sub:
                name += "_{" + sub + "}"
            parts.append(f"{name}({render_latex_tree(c, rule)})")
    return " ".join(parts) if parts else "\\mathbf{1}"


def render(fmt: str, x, rule: RuleTable) -> str:
    if fmt == "text":
        return render_lincomb(x, rule) if isinstance(x, LinComb) else render_key(x, rule)
    if fmt == "latex":
        if not isinstance(x, Tree):
            raise ValueError("latex rendering is provided for single trees")
        return render_latex_tree(x, rule)
    if fmt == "structured":
        return "\n".join(render_lines(x, rule))
    raise ValueError(f"unknown format {fmt!r}")


def try_parse_tree(text: str, rule: RuleTable) -> Optional[Tree]:
    try:
        return parse_tree(text, rule)
    except ParseError:
        return None
