"""Finite linear combinations with exact coefficients.

Keys are trees, forests, rooted forests or tuples of those (tensors).
Zero coefficients are never stored, so equality is plain dict equality.
Integer coefficients stay ints (cheaper, and equal to the same Fraction).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable


class LinComb:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: Dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                self.add_term(k, c)

    @staticmethod
    def of(key, coeff=1) -> "LinComb":
        out = LinComb()
        out.add_term(key, coeff)
        return out

    def add_term(self, key, coeff) -> None:
        if coeff == 0:
            return
        c = self.terms.get(key)
        c = coeff if c is None else c + coeff
        if c == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    def iadd(self, other: "LinComb", scale=1) -> "LinComb":
        for k, c in other.terms.items():
            self.add_term(k, c * scale)
        return self

    def __add__(self, other: "LinComb") -> "LinComb":
        return self.copy().iadd(other)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self.copy().iadd(other, -1)

    def __neg__(self) -> "LinComb":
        return self.scale(-1)

    def scale(self, s) -> "LinComb":
        out = LinComb()
        if s == 0:
            return out
        for k, c in self.terms.items():
            out.add_term(k, c * s)
        return out

    def copy(self) -> "LinComb":
        out = LinComb()
        out.terms = dict(self.terms)
        return out

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def coeff(self, key):
        return self.terms.get(key, Fraction(0))

    def map(self, fn: Callable) -> "LinComb":
        """Linear extension of ``fn: key -> LinComb``."""
        out = LinComb()
        for k, c in self.terms.items():
            out.iadd(fn(k), c)
        return out

    def map_keys(self, fn: Callable) -> "LinComb":
        """Linear extension of ``fn: key -> key or None`` (None means zero)."""
        out = LinComb()
        for k, c in self.terms.items():
            nk = fn(k)
            if nk is not None:
                out.add_term(nk, c)
        return out

    def filter(self, pred: Callable) -> "LinComb":
        return LinComb((k, c) for k, c in self.terms.items() if pred(k))

    def __repr__(self):
        return f"LinComb({self.terms!r})"


def bilinear(a: LinComb, b: LinComb, op: Callable) -> LinComb:
    """Extend ``op(key_a, key_b) -> key or None`` bilinearly."""
    out = LinComb()
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            k = op(ka, kb)
            if k is not None:
                out.add_term(k, ca * cb)
    return out


def tensor(a: LinComb, b: LinComb) -> LinComb:
    return bilinear(a, b, lambda x, y: (x, y))


def total(parts: Iterable[LinComb]) -> LinComb:
    out = LinComb()
    for p in parts:
        out.iadd(p)
    return out
