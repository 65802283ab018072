"""Renormalisation maps built from minus characters, and the maps around them.

``R_from_character`` gives the root renormalisation (l (x) id) Delta^-_r and
``M_from_R`` rebuilds the full map recursively from R alone
(M o = multiplicative with I_k(t) -> I_k(M t), and M = M o R).  The
character route (l (x) id) Delta^- must agree with it for admissible l.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .characters import MinusCharacter, PlusCharacter, graft_lincomb
from .coproducts import (
    antipode,
    delta,
    delta_minus,
    delta_minus_circ,
    delta_minus_r,
    inv_factorial,
    plus_mult,
    tilde_J,
)
from .lincomb import LinComb
from .rules import RuleTable, indices_below
from .trees import Tree, add_index, graft, planted_decomposition, tree_product, unit, unit_index


class RecursionGuardError(RuntimeError):
    pass


class TreeMap:
    """Linear map on T defined tree by tree, memoised."""

    def __init__(self, fn: Callable[[Tree], LinComb], name: str = "map"):
        self._fn = fn
        self._memo: Dict[Tree, LinComb] = {}
        self.name = name

    def __call__(self, x) -> LinComb:
        if isinstance(x, LinComb):
            return x.map(self)
        if x not in self._memo:
            self._memo[x] = self._fn(x)
        return self._memo[x]


def pair_left(l, coproduct: LinComb) -> LinComb:
    """(l (x) id) applied to a tensor combination."""
    out = LinComb()
    for (a, b), c in coproduct.items():
        v = l(a)
        if v != 0:
            out.add_term(b, c * v)
    return out


def R_from_character(l: MinusCharacter) -> TreeMap:
    rule = l.rule
    return TreeMap(lambda t: pair_left(l, delta_minus_r(t, rule)), f"R[{l.name}]")


def M_from_character(l: MinusCharacter) -> TreeMap:
    rule = l.rule
    return TreeMap(lambda t: pair_left(l, delta_minus(t, rule)), f"M[{l.name}]")


def Mcirc_from_character(l: MinusCharacter) -> TreeMap:
    rule = l.rule
    return TreeMap(lambda t: pair_left(l, delta_minus_circ(t, rule)), f"Mo[{l.name}]")


def tree_mult(a: LinComb, b: LinComb, rule: RuleTable) -> LinComb:
    return plus_mult(a, b, rule)


def M_from_R(R: TreeMap, rule: RuleTable, max_depth: int = 200) -> Tuple[TreeMap, TreeMap]:
    """Return (M, M o) with M o multiplicative, M o I_k(t) = I_k(M t), M = M o R."""
    stack: List[Tree] = []

    def mcirc(t: Tree) -> LinComb:
        n, planted = planted_decomposition(t)
        out = LinComb.of(Tree(n))
        for p in planted:
            ((et, k, sigma),) = p.edges
            if rule.is_noise(et):
                part = LinComb.of(p)
            else:
                part = graft_lincomb(rule, et, k, M(sigma))
            out = tree_mult(out, part, rule)
        return out

    def m(t: Tree) -> LinComb:
        if t in stack or len(stack) > max_depth:
            raise RecursionGuardError(f"recursive renormalisation does not terminate at depth {len(stack)}")
        stack.append(t)
        try:
            return Mcirc(R(t))
        finally:
            stack.pop()

    Mcirc = TreeMap(mcirc, f"Mo<{R.name}>")
    M = TreeMap(m, f"M<{R.name}>")
    return M, Mcirc


def R_inverse(R: TreeMap, rule: RuleTable, max_terms: int = 64) -> TreeMap:
    """(id + L') ^-1 by the finite Neumann series, L' = R - id being strictly noise-lowering."""

    def inv(t: Tree) -> LinComb:
        out = LinComb.of(t)
        power = LinComb.of(t)
        sign = 1
        for _ in range(max_terms):
            power = R(power) - power
            if not power:
                return out
            sign = -sign
            out.iadd(power, sign)
        raise RecursionGuardError("R - id is not nilpotent on this tree")

    return TreeMap(inv, f"{R.name}^-1")


# ---------------------------------------------------------------------
# norms on combinations
# ---------------------------------------------------------------------


def lc_degree(x: LinComb, rule: RuleTable):
    """Minimum degree over terms; +inf for zero."""
    return min((rule.degree(t) for t in x.keys()), default=float("inf"))


def lc_noise(x: LinComb, rule: RuleTable):
    """Maximum noise count over terms; -inf for zero."""
    return max((rule.noise_count(t) for t in x.keys()), default=float("-inf"))


def order_lt(a: LinComb, b: LinComb, rule: RuleTable) -> bool:
    """Lexicographic order on (noise count, degree)."""
    return (lc_noise(a, rule), lc_degree(a, rule)) < (lc_noise(b, rule), lc_degree(b, rule))


# ---------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------


def elementary_symbols(rule: RuleTable, basis: Iterable[Tree]) -> List[Tree]:
    out = [graft(t, rule.zero(), unit(rule.dim)) for t in sorted(rule.noises)]
    out += [Tree(unit_index(rule.dim, i)) for i in range(rule.dim + 1)]
    out += [t for t in basis if t.is_planted() and t.edges[0][0] in rule.kernels]
    return out


def check_admissible(
    R: TreeMap,
    rule: RuleTable,
    basis: Sequence[Tree],
    characters: Sequence[PlusCharacter] = (),
) -> List[Tuple[str, Tree, bool]]:
    """Evaluate the five admissibility conditions; one entry per (condition, tree)."""
    out = []
    for t in elementary_symbols(rule, basis):
        out.append(("fixes-elementary", t, R(t) == LinComb.of(t)))
    basis_set = set(basis)
    for t in basis:
        if any(t.n):
            continue
        for i in range(rule.dim + 1):
            xt = tree_product(Tree(unit_index(rule.dim, i)), t)
            if xt in basis_set:
                lhs = R(xt)
                rhs = tree_mult(LinComb.of(Tree(unit_index(rule.dim, i))), R(t), rule)
                out.append(("commutes-with-X", xt, lhs == rhs))
    for t in basis:
        diff = R(t) - LinComb.of(t)
        out.append(("lowers-noise", t, lc_noise(diff, rule) < rule.noise_count(t)))
        out.append(("raises-degree", t, lc_degree(diff, rule) > rule.degree(t)))
        for g in characters:
            ok = R(g.gamma(t)) == g.gamma(R(t))
            out.append((f"commutes-with-Gamma[{g.name}]", t, ok))
    return out


# ---------------------------------------------------------------------
# the structure attached to a renormalisation map
# ---------------------------------------------------------------------


class RenormStructure:
    """Delta^M, Delta^{M o} and hat M for a map M = M o R built from R."""

    def __init__(self, R: TreeMap, rule: RuleTable):
        self.rule = rule
        self.R = R
        self.M, self.Mcirc = M_from_R(R, rule)
        self._dm: Dict[Tree, LinComb] = {}
        self._dmc: Dict[Tree, LinComb] = {}
        self._hat: Dict[Tree, LinComb] = {}

    def delta_M(self, t) -> LinComb:
        if isinstance(t, LinComb):
            return t.map(self.delta_M)
        if t not in self._dm:
            self._dm[t] = self.R(t).map(self.delta_Mcirc)
        return self._dm[t]

    def delta_Mcirc(self, t: Tree) -> LinComb:
        if t in self._dmc:
            return self._dmc[t]
        rule = self.rule
        one = unit(rule.dim)
        n, planted = planted_decomposition(t)
        out = LinComb.of((Tree(n), one))
        for p in planted:
            ((et, k, sigma),) = p.edges
            if rule.is_noise(et):
                part = LinComb.of((p, one))
            else:
                part = self._delta_Mcirc_planted(et, k, sigma)
            out = _tensor_mult(out, part, rule)
        self._dmc[t] = out
        return out

    def _delta_Mcirc_planted(self, et, k, sigma) -> LinComb:
        rule = self.rule
        dm = self.delta_M(sigma)
        out = LinComb()
        for (a, b), c in dm.items():
            g = graft(et, k, a)
            if not rule.is_killed(g):
                out.add_term((g, b), c)
        own = rule.type_degree(et) - rule.index_degree(k) + rule.degree(sigma)
        top = max((rule.type_degree(et) - rule.index_degree(k) + rule.degree(a) for (a, _) in dm.keys()), default=own)
        for l in indices_below(top, rule.scaling):
            if rule.index_degree(l) < own:
                continue
            right = self._tildeJ_pair(et, add_index(k, l), dm)
            for r, c in right.items():
                out.add_term((Tree(l), r), -c * inv_factorial(l))
        return out

    def _tildeJ_pair(self, et, k, x: LinComb) -> LinComb:
        """M_+ (tilde J_k (x) id) applied to a tensor combination."""
        rule = self.rule
        out = LinComb()
        for (a, b), c in x.items():
            out.iadd(plus_mult(tilde_J(et, k, a, rule), LinComb.of(b), rule), c)
        return out

    def hat_M(self, x) -> LinComb:
        """Multiplicative on T_+, X^k fixed, hat M tilde J_k(s) = M_+ (tilde J_k (x) id) Delta^M s."""
        if isinstance(x, LinComb):
            return x.map(self.hat_M)
        if x in self._hat:
            return self._hat[x]
        rule = self.rule
        n, planted = planted_decomposition(x)
        out = LinComb.of(Tree(n))
        for p in planted:
            ((et, k, sigma),) = p.edges
            part = LinComb()
            for l in indices_below(rule.type_degree(et) - rule.index_degree(k) + rule.degree(sigma), rule.scaling):
                part.iadd(
                    plus_mult(LinComb.of(Tree(l)), self.hat_M_tilde(et, add_index(k, l), sigma), rule),
                    inv_factorial(l),
                )
            out = plus_mult(out, part, rule)
        self._hat[x] = out
        return out

    def hat_M_tilde(self, et, k, sigma) -> LinComb:
        return self._tildeJ_pair(et, k, self.delta_M(sigma))


def _tensor_mult(x: LinComb, y: LinComb, rule: RuleTable) -> LinComb:
    out = LinComb()
    for (a1, b1), c1 in x.items():
        for (a2, b2), c2 in y.items():
            a = tree_product(a1, a2)
            b = tree_product(b1, b2)
            if rule.is_killed(a) or rule.is_killed(b):
                continue
            out.add_term((a, b), c1 * c2)
    return out


def D_map(x: LinComb, rule: RuleTable) -> LinComb:
    """(id (x) M_+)(Delta (x) id) on T (x) T_+."""
    out = LinComb()
    for (a, b), c in x.items():
        for (a1, a2), c1 in delta(a, rule).items():
            for r, c2 in plus_mult(LinComb.of(a2), LinComb.of(b), rule).items():
                out.add_term((a1, r), c * c1 * c2)
    return out


def D_inverse(x: LinComb, rule: RuleTable) -> LinComb:
    """(id (x) M_+)(id (x) A_+ (x) id)(Delta (x) id)."""
    out = LinComb()
    for (a, b), c in x.items():
        for (a1, a2), c1 in delta(a, rule).items():
            for r, c2 in plus_mult(antipode(a2, rule), LinComb.of(b), rule).items():
                out.add_term((a1, r), c * c1 * c2)
    return out


def apply_tensor(left: Callable, right: Callable, x: LinComb) -> LinComb:
    """(left (x) right) for linear maps returning LinCombs."""
    out = LinComb()
    for (a, b), c in x.items():
        la = left(a)
        rb = right(b)
        for ka, ca in la.items():
            for kb, cb in rb.items():
                out.add_term((ka, kb), c * ca * cb)
    return out


def hatM2_sides(S: RenormStructure, t: Tree) -> Tuple[LinComb, LinComb]:
    """Both sides of (id (x) M_+)(Delta (x) id) Delta^M = (M (x) hat M) Delta."""
    lhs = D_map(S.delta_M(t), S.rule)
    rhs = apply_tensor(S.M, S.hat_M, delta(t, S.rule))
    return lhs, rhs


def delta_M_closed_form(S: RenormStructure, t: Tree) -> LinComb:
    """Delta^M = D^-1 (M (x) hat M) Delta."""
    return D_inverse(apply_tensor(S.M, S.hat_M, delta(t, S.rule)), S.rule)


def is_upper_triangular(S: RenormStructure, t: Tree) -> bool:
    rule = S.rule
    return all(rule.degree(a) >= rule.degree(t) for (a, _b) in S.delta_M(t).keys())
