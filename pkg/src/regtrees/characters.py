"""Characters of the plus and minus Hopf algebras.

A plus character g is fixed by its values on X_i and on the generators
J_k(tau); it acts on trees through Gamma_g.  A minus character l is a
finitely supported function on trees extended multiplicatively to forests.
Group laws are available both from their recursive formulas and from the
coproduct pairings, so each can be checked against the other.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Sequence

from .coproducts import (
    antipode,
    delta,
    delta_minus_forest,
    delta_plus,
    inv_factorial,
    plus_mult,
)
from .expr import render_tree
from .lincomb import LinComb
from .rules import RuleTable, indices_below
from .trees import EMPTY_FOREST, Forest, Tree, add_index, graft, planted_decomposition, unit, unit_index


class CharacterError(KeyError):
    pass


def seeded_rational(seed, label: str) -> Fraction:
    rng = random.Random(f"{seed}:{label}")
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def _x_power_value(xs: Sequence, l) -> object:
    out = Fraction(1)
    for v, e in zip(xs, l):
        for _ in range(e):
            out = out * v
    return out


class PlusCharacter:
    """Multiplicative functional on T_+ given by X-values and a generator rule."""

    def __init__(self, rule: RuleTable, x_values: Sequence, generator: Callable[[Tree], object], name: str = "g"):
        if len(x_values) != rule.dim + 1:
            raise ValueError(f"need {rule.dim + 1} values for X")
        self.rule = rule
        self.x = tuple(x_values)
        self._generator = generator
        self._values: Dict[Tree, object] = {}
        self._gamma: Dict[Tree, LinComb] = {}
        self.name = name

    def gen(self, j: Tree):
        if j not in self._values:
            if not self.rule.plus_alive(j) or len(j.edges) != 1 or any(j.n):
                raise CharacterError(f"{render_tree(j, self.rule)} is not a generator of T_+")
            self._values[j] = self._generator(j)
        return self._values[j]

    def __call__(self, x):
        if isinstance(x, LinComb):
            out = Fraction(0)
            for k, c in x.items():
                out = out + c * self(k)
            return out
        if not self.rule.plus_alive(x):
            return Fraction(0)
        n, planted = planted_decomposition(x)
        out = _x_power_value(self.x, n)
        for p in planted:
            out = out * self.gen(p)
        return out

    # --- action on T -------------------------------------------------
    def gamma(self, x) -> LinComb:
        """Gamma_g from its recursion on the planted decomposition."""
        if isinstance(x, LinComb):
            return x.map(self.gamma)
        if x in self._gamma:
            return self._gamma[x]
        rule = self.rule
        n, planted = planted_decomposition(x)
        shifted = [
            LinComb([(Tree(unit_index(rule.dim, i)), 1), (unit(rule.dim), self.x[i])]) for i in range(rule.dim + 1)
        ]
        out = LinComb.of(unit(rule.dim))
        for i, e in enumerate(n):
            for _ in range(e):
                out = plus_mult(out, shifted[i], rule)
        for p in planted:
            out = plus_mult(out, self._gamma_planted(p), rule)
        self._gamma[x] = out
        return out

    def _gamma_planted(self, p: Tree) -> LinComb:
        rule = self.rule
        ((t, k, sigma),) = p.edges
        if rule.is_noise(t):
            return LinComb.of(p)
        out = graft_lincomb(rule, t, k, self.gamma(sigma))
        for l in indices_below(rule.type_degree(t) - rule.index_degree(k) + rule.degree(sigma), rule.scaling):
            j = graft(t, add_index(k, l), sigma)
            if rule.plus_alive(j):
                out.add_term(Tree(l), self.gen(j) * inv_factorial(l))
        return out

    def gamma_pairing(self, x) -> LinComb:
        """Gamma_g = (id (x) g) Delta."""
        if isinstance(x, LinComb):
            return x.map(self.gamma_pairing)
        out = LinComb()
        for (a, b), c in delta(x, self.rule).items():
            out.add_term(a, c * self(b))
        return out


def graft_lincomb(rule: RuleTable, t: str, k, x: LinComb) -> LinComb:
    """I_k applied linearly, honouring kill-on-polynomial."""
    out = LinComb()
    for s, c in x.items():
        g = graft(t, k, s)
        if not rule.is_killed(g):
            out.add_term(g, c)
    return out


def plus_value_on(g: PlusCharacter, t: str, k, x: LinComb):
    """g(J_k(x)) for a combination x, with Pi_+ applied."""
    out = Fraction(0)
    for s, c in x.items():
        j = graft(t, k, s)
        if g.rule.plus_alive(j):
            out = out + c * g.gen(j)
    return out


def identity_plus(rule: RuleTable) -> PlusCharacter:
    return PlusCharacter(rule, [Fraction(0)] * (rule.dim + 1), lambda j: Fraction(0), name="1*")


def plus_from_values(rule: RuleTable, x_values: Sequence, values: Dict[Tree, object], name: str = "g") -> PlusCharacter:
    def lookup(j):
        if j not in values:
            raise CharacterError(f"{name} has no value on {render_tree(j, rule)}")
        return values[j]

    return PlusCharacter(rule, x_values, lookup, name)


def random_plus_character(rule: RuleTable, seed) -> PlusCharacter:
    """Seeded character; each value depends only on (seed, generator)."""
    xs = [seeded_rational(seed, f"X_{i}") for i in range(rule.dim + 1)]
    return PlusCharacter(rule, xs, lambda j: seeded_rational(seed, render_tree(j, rule)), name=f"g[{seed}]")


def compose_plus(g1: PlusCharacter, g2: PlusCharacter) -> PlusCharacter:
    """g1 o g2 from its recursion: X_i -> g1+g2, J_k(t) -> g1(J_k(Gamma_g2 t)) + sum g1(X)^l/l! g2(J_{k+l} t)."""
    rule = g1.rule

    def gen(j):
        ((t, k, sigma),) = j.edges
        out = plus_value_on(g1, t, k, g2.gamma(sigma))
        for l in indices_below(rule.type_degree(t) - rule.index_degree(k) + rule.degree(sigma), rule.scaling):
            jj = graft(t, add_index(k, l), sigma)
            if rule.plus_alive(jj):
                out = out + _x_power_value(g1.x, l) * inv_factorial(l) * g2.gen(jj)
        return out

    xs = [a + b for a, b in zip(g1.x, g2.x)]
    return PlusCharacter(rule, xs, gen, name=f"({g1.name} o {g2.name})")


def compose_plus_pairing(g1: PlusCharacter, g2: PlusCharacter) -> PlusCharacter:
    """g1 o g2 = (g1 (x) g2) Delta^+."""
    rule = g1.rule

    def gen(j):
        out = Fraction(0)
        for (a, b), c in delta_plus(j, rule).items():
            out = out + c * g1(a) * g2(b)
        return out

    xs = [a + b for a, b in zip(g1.x, g2.x)]
    return PlusCharacter(rule, xs, gen, name=f"({g1.name} * {g2.name})")


def inverse_plus(g: PlusCharacter) -> PlusCharacter:
    """g^-1 from its recursion: J_k(t) -> -sum (-g(X))^l/l! g(J_{k+l}(Gamma_{g^-1} t))."""
    rule = g.rule
    neg_x = [-v for v in g.x]
    holder = {}

    def gen(j):
        ((t, k, sigma),) = j.edges
        inv = holder["inv"]
        out = Fraction(0)
        for s, c in inv.gamma(sigma).items():
            for l in indices_below(rule.type_degree(t) - rule.index_degree(k) + rule.degree(s), rule.scaling):
                jj = graft(t, add_index(k, l), s)
                if rule.plus_alive(jj):
                    out = out - c * _x_power_value(neg_x, l) * inv_factorial(l) * g.gen(jj)
        return out

    inv = PlusCharacter(rule, neg_x, gen, name=f"{g.name}^-1")
    holder["inv"] = inv
    return inv


def inverse_plus_antipode(g: PlusCharacter) -> PlusCharacter:
    """g^-1 = g o A_+."""
    rule = g.rule
    return PlusCharacter(rule, [-v for v in g.x], lambda j: g(antipode(j, rule)), name=f"{g.name}^-1(A)")


# ---------------------------------------------------------------------
# minus characters
# ---------------------------------------------------------------------


class MinusCharacter:
    """Character of T_-: values on trees, multiplicative on forests, 1 on the empty forest.

    ``values`` is the (finite) support; trees outside it evaluate to zero.
    A ``compute`` callback replaces the table for characters obtained by
    convolution or inversion.
    """

    def __init__(self, rule: RuleTable, values: Optional[Dict[Tree, object]] = None, compute=None, name: str = "l"):
        self.rule = rule
        self.values = {t: v for t, v in (values or {}).items() if v != 0}
        self._compute = compute
        self._cache: Dict[Tree, object] = {}
        self.name = name

    def tree_value(self, t: Tree):
        if t.is_unit():
            return Fraction(1)  # the bare root is the empty forest in T_-
        if self._compute is None:
            return self.values.get(t, Fraction(0))
        if t not in self._cache:
            self._cache[t] = self._compute(t)
        return self._cache[t]

    def __call__(self, x):
        if isinstance(x, LinComb):
            out = Fraction(0)
            for k, c in x.items():
                out = out + c * self(k)
            return out
        if isinstance(x, Tree):
            x = Forest((x,))
        out = Fraction(1)
        for t in x.trees:
            out = out * self.tree_value(t)
            if out == 0:
                return out
        return out

    def support(self) -> Iterable[Tree]:
        return sorted(self.values, key=self.rule.sort_key)


def identity_minus(rule: RuleTable) -> MinusCharacter:
    return MinusCharacter(rule, {}, name="1*")


def convolve_minus(l1: MinusCharacter, l2: MinusCharacter) -> MinusCharacter:
    """(l1 (x) l2) Delta^- on trees, extended multiplicatively."""
    rule = l1.rule

    def compute(t):
        out = Fraction(0)
        for (a, b), c in delta_minus_forest(Forest((t,)), rule).items():
            out = out + c * l1(a) * l2(b)
        return out

    return MinusCharacter(rule, compute=compute, name=f"({l1.name} o {l2.name})")


def inverse_minus(l: MinusCharacter) -> MinusCharacter:
    """Grade-by-grade solve of (l (x) l^-1) Delta^- = counit."""
    rule = l.rule
    holder = {}

    def compute(t):
        out = Fraction(0)
        for (a, b), c in delta_minus_forest(Forest((t,)), rule).items():
            if a == EMPTY_FOREST:
                continue
            out = out - c * l(a) * holder["inv"](b)
        return out

    inv = MinusCharacter(rule, compute=compute, name=f"{l.name}^-1")
    holder["inv"] = inv
    return inv


def is_admissible_minus(l: MinusCharacter, trees: Optional[Iterable[Tree]] = None) -> bool:
    """Vanishes on planted trees, trees with a decorated root, and trees of degree >= 0."""
    rule = l.rule
    check = l.values if trees is None else trees
    for t in check:
        if l.tree_value(t) == 0:
            continue
        if t.is_planted() or any(t.n) or rule.degree(t) >= 0:
            return False
    return True


def random_minus_character(rule: RuleTable, seed, basis: Iterable[Tree]) -> MinusCharacter:
    """Seeded admissible character supported on the negative, unplanted, undecorated-root trees of ``basis``."""
    values = {}
    for t in basis:
        if rule.degree(t) < 0 and not t.is_planted() and not any(t.n) and t.edges:
            values[t] = seeded_rational(seed, render_tree(t, rule))
    return MinusCharacter(rule, values, name=f"l[{seed}]")


def minus_from_values(rule: RuleTable, values: Dict[Tree, object], name: str = "l") -> MinusCharacter:
    return MinusCharacter(rule, values, name=name)
