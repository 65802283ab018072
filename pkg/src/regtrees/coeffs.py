"""Exact coefficients: rationals and sparse polynomials over named constants.

Plain rationals are carried as ``int`` or ``Fraction``.  As soon as a named constant
shows up (``c``, ``C1``, ...) the value becomes a ``Poly``.  Arithmetic
between the two mixes freely and a constant ``Poly`` collapses back to a
``Fraction``, so most of the tree algebra never pays for the symbolic path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]  # sorted (name, exponent) pairs
Number = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


class Poly:
    """Polynomial with rational coefficients in named commuting constants."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Monomial, Fraction]):
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self._hash = None

    @staticmethod
    def symbol(name: str) -> "Poly":
        return Poly({((name, 1),): Fraction(1)})

    @staticmethod
    def _lift(x) -> Dict[Monomial, Fraction]:
        if isinstance(x, Poly):
            return x.terms
        return {(): Fraction(x)} if x != 0 else {}

    def _wrap(terms):
        terms = {m: c for m, c in terms.items() if c != 0}
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and () in terms:
            return terms[()]
        return Poly(terms)

    _wrap = staticmethod(_wrap)

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        out = dict(self.terms)
        for m, c in Poly._lift(other).items():
            out[m] = out.get(m, 0) + c
        return Poly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return Poly._wrap({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._wrap(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        out = Fraction(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def diff(self, name: str):
        """Partial derivative in one constant."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(name, 0)
            if not e:
                continue
            if e == 1:
                del exps[name]
            else:
                exps[name] = e - 1
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + c * e
        return Poly._wrap(out)

    def symbols(self):
        return sorted({name for m in self.terms for name, _ in m})

    def __repr__(self):
        return f"Poly({render_coeff(self)!r})"


def derivative(c, name: str):
    return c.diff(name) if isinstance(c, Poly) else Fraction(0)


def is_zero(c) -> bool:
    return c == 0


def _render_mono(m: Monomial) -> str:
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in m)


def _render_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_coeff(c) -> str:
    """Deterministic text form, e.g. ``3*c^4 - 1/2*C1``."""
    if not isinstance(c, Poly):
        return _render_rational(Fraction(c))
    parts = []
    # constant term last, monomials by (degree, text)
    order = sorted(c.terms, key=lambda m: (m == (), -sum(e for _, e in m), m))
    for m in order:
        q = c.terms[m]
        sign = "-" if q < 0 else "+"
        q = abs(q)
        if m == ():
            body = _render_rational(q)
        elif q == 1:
            body = _render_mono(m)
        else:
            body = f"{_render_rational(q)}*{_render_mono(m)}"
        parts.append((sign, body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def needs_parens(c) -> bool:
    return isinstance(c, Poly) and len(c.terms) > 1
