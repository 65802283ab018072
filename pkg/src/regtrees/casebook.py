"""Worked settings: Wick powers, KPZ, generalised KPZ and Phi^4_3.

Each setting bundles a rule, a minus character and the checks that make
it interesting.  Values that stay free are kept as named constants
(``c``, ``K1``, ``C1``, ...), so every identity here is an identity of
polynomials in those constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .characters import (
    MinusCharacter,
    PlusCharacter,
    graft_lincomb,
    is_admissible_minus,
    minus_from_values,
    random_plus_character,
)
from .coeffs import Poly, derivative, render_coeff
from .coproducts import delta_minus_r
from .expr import parse_tree, render_tree
from .lincomb import LinComb
from .renorm import M_from_character, M_from_R, Mcirc_from_character, R_from_character, TreeMap, pair_left
from .rules import RuleTable, builtin
from .trees import Forest, Tree, graft, tree_product_many, unit

X = Poly.symbol("x")
c = Poly.symbol("c")


# ---------------------------------------------------------------------
# Hermite polynomials and Wick renormalisation
# ---------------------------------------------------------------------


def hermite_polynomial(n: int):
    """H_n(x, c) from H_0 = 1 and H_{n+1} = x H_n - c^2 dH_n/dx."""
    if n < 0:
        raise ValueError("n must be non-negative")
    h = Fraction(1)
    for _ in range(n):
        h = X * h - c * c * derivative(h, "x")
    return h


def render_in_x(p) -> str:
    """Text form ordered by descending power of x, e.g. ``x^4 - 6*c^2*x^2 + 3*c^4``."""
    if not isinstance(p, Poly):
        return render_coeff(p)
    by_power: Dict[int, dict] = {}
    for m, q in p.terms.items():
        exps = dict(m)
        k = exps.pop("x", 0)
        by_power.setdefault(k, {})[tuple(sorted(exps.items()))] = q
    out = ""
    for k in sorted(by_power, reverse=True):
        coeff = Poly._wrap(by_power[k])
        xs = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        neg = not isinstance(coeff, Poly) and coeff < 0 or (
            isinstance(coeff, Poly) and len(coeff.terms) == 1 and next(iter(coeff.terms.values())) < 0
        )
        mag = -coeff if neg else coeff
        text = render_coeff(mag)
        if isinstance(mag, Poly) and len(mag.terms) > 1:
            text = f"({text})"
        if xs:
            text = xs if mag == 1 else f"{text}*{xs}"
        if not out:
            out = ("-" if neg else "") + text
        else:
            out += (" - " if neg else " + ") + text
    return out


def xi_power(n: int, rule: Optional[RuleTable] = None) -> Tree:
    rule = rule or builtin("hermite")
    xi = graft("Xi", rule.zero(), unit(rule.dim))
    return tree_product_many([xi] * n, rule.dim)


def double_factorial_odd(k: int) -> int:
    """(2k-1)!! = (2k-1)! / (2^(k-1) (k-1)!), with the empty product for k = 0."""
    if k == 0:
        return 1
    return factorial(2 * k - 1) // (2 ** (k - 1) * factorial(k - 1))


def wick_character(kmax: int) -> MinusCharacter:
    """l(Xi^{2k}) = (-1)^k (2k-1)!! c^{2k} for 1 <= k <= kmax."""
    rule = builtin("hermite")
    values = {xi_power(2 * k, rule): (-1) ** k * double_factorial_odd(k) * c ** (2 * k) for k in range(1, kmax + 1)}
    return minus_from_values(rule, values, name="l_wick")


def hermite_image(x: LinComb):
    """Send Xi^m to x^m; the argument must be free of polynomial decorations."""
    out = Fraction(0)
    for t, coeff in x.items():
        if any(t.n) or any(e[0] != "Xi" for e in t.edges):
            raise ValueError(f"{t!r} is not a pure noise power")
        out = out + coeff * X ** len(t.edges)
    return out


def infinitesimal_wick(rule: Optional[RuleTable] = None) -> Callable[[Forest], object]:
    """Linear functional with value c^2 on {Xi^2} and zero elsewhere, including the empty forest."""
    rule = rule or builtin("hermite")
    target = Forest((xi_power(2, rule),))
    return lambda f: c * c if f == target else Fraction(0)


def wick_generator_map() -> TreeMap:
    """R = (l (x) id) Delta^-_r for the infinitesimal l above."""
    rule = builtin("hermite")
    ell = infinitesimal_wick(rule)
    return TreeMap(lambda t: pair_left(ell, delta_minus_r(t, rule)), "R_wick")


def exp_minus(R: TreeMap, x: LinComb, kmax: int) -> LinComb:
    """sum_{k <= kmax} (-1)^k R^k x / k!."""
    out = LinComb()
    power = x
    for k in range(kmax + 1):
        out.iadd(power, Fraction((-1) ** k, factorial(k)))
        power = R(power)
    return out


@dataclass
class WickReport:
    n: int
    image: object
    hermite: object
    exp_image: object

    @property
    def ok(self) -> bool:
        return self.image == self.hermite and self.exp_image == self.hermite


def wick_check(n: int, kmax: Optional[int] = None) -> WickReport:
    kmax = n // 2 if kmax is None else kmax
    if 2 * kmax < n - 1:
        raise ValueError(f"kmax = {kmax} is too small for n = {n}")
    rule = builtin("hermite")
    tau = xi_power(n, rule)
    M = M_from_character(wick_character(max(kmax, 1)))
    image = hermite_image(M(tau))
    exp_image = hermite_image(exp_minus(wick_generator_map(), LinComb.of(tau), kmax))
    return WickReport(n, image, hermite_polynomial(n), exp_image)


def f_k(k: int) -> Callable[[Forest], object]:
    """(2k-1)!! c^{2k} on {Xi^{2k}}, zero elsewhere."""
    rule = builtin("hermite")
    target = Forest((xi_power(2 * k, rule),)) if k else Forest()
    value = double_factorial_odd(k) * c ** (2 * k)
    return lambda f: value if f == target else Fraction(0)


def hermite_lemma(k: int, n: int) -> Tuple[LinComb, LinComb]:
    """Both sides of R^k/k! Xi^n = (f_k (x) id) Delta^-_r Xi^n."""
    rule = builtin("hermite")
    tau = xi_power(n, rule)
    R = wick_generator_map()
    lhs = LinComb.of(tau)
    for _ in range(k):
        lhs = R(lhs)
    lhs = lhs.scale(Fraction(1, factorial(k)))
    rhs = pair_left(f_k(k), delta_minus_r(tau, rule))
    return lhs, rhs


# ---------------------------------------------------------------------
# the three nonlinear settings
# ---------------------------------------------------------------------

KPZ_SUPPORT = ("I1(Xi)*I1(Xi)", "I1(I1(Xi)*I1(Xi))*I1(I1(Xi)*I1(Xi))", "I1(Xi)*I1(I1(Xi)*I1(I1(Xi)*I1(Xi)))")
QUA_SUPPORT = ("I(Xi)*I(Xi)", "I(Xi)*I(Xi)*I(I(Xi)*I(Xi))")
GKPZ_COUNTEREXAMPLE = "I(I(I(Xi)*Xi)*Xi)"
PHI43_COUNTEREXAMPLE = "I(I(Xi)*I(Xi)*I(Xi))"


def _symbolic(rule: RuleTable, texts: Sequence[str], prefix: str, name: str) -> MinusCharacter:
    values = {parse_tree(s, rule): Poly.symbol(f"{prefix}{i}") for i, s in enumerate(texts, 1)}
    return minus_from_values(rule, values, name=name)


def kpz_character(rule: Optional[RuleTable] = None) -> MinusCharacter:
    """Generic constants K1, K2, K3 on the three divergent KPZ trees."""
    return _symbolic(rule or builtin("kpz"), KPZ_SUPPORT, "K", "l_kpz")


def qua_character(rule: Optional[RuleTable] = None) -> MinusCharacter:
    return _symbolic(rule or builtin("phi43"), QUA_SUPPORT, "Q", "l_qua")


def gkpz_support(rule: RuleTable, edge_cap: int) -> List[Tree]:
    """Negative, X-free trees with bare unplanted root."""
    out = []
    for t in rule.generate_basis(0, edge_cap, 0):
        if rule.degree(t) < 0 and t.edges and not t.is_planted() and not any(n for v in t.nodes() for n in v.n):
            out.append(t)
    return out


def gkpz_character(edge_cap: int = 6, rule: Optional[RuleTable] = None) -> MinusCharacter:
    """One free constant per supported tree; C1 belongs to I(Xi)*Xi."""
    rule = rule or builtin("gkpz")
    first = parse_tree("I(Xi)*Xi", rule)
    trees = [first] + [t for t in gkpz_support(rule, edge_cap) if t != first]
    values = {t: Poly.symbol(f"C{i}") for i, t in enumerate(trees, 1)}
    return minus_from_values(rule, values, name="l_gkpz")


def negative_planted(rule: RuleTable, edge_cap: int, poly_cap=0) -> List[Tree]:
    """Kernel-planted basis trees of negative degree."""
    return [
        t
        for t in rule.generate_basis(0, edge_cap, poly_cap)
        if t.is_planted() and t.edges[0][0] in rule.kernels and rule.degree(t) < 0
    ]


def property_a_difference(M, g: PlusCharacter, tau: Tree) -> LinComb:
    """M Gamma_g tau - Gamma_g M tau."""
    return M(g.gamma(tau)) - g.gamma(M(tau))


def is_polynomial(x: LinComb) -> bool:
    return all(not t.edges for t in x.keys())


def kpz_lemma(l: MinusCharacter, tau: Tree) -> Tuple[bool, bool]:
    """(M o tau == tau, M tau - tau is a polynomial) for M built from l."""
    Mo = Mcirc_from_character(l)
    M = M_from_character(l)
    return Mo(tau) == LinComb.of(tau), is_polynomial(M(tau) - LinComb.of(tau))


# ---------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------


@dataclass
class Check:
    name: str
    run: Callable[[], Tuple[bool, str]]
    source: str  # where the expected value comes from


@dataclass
class Scenario:
    name: str
    rule: RuleTable
    character: MinusCharacter
    checks: List[Check] = field(default_factory=list)

    def evaluate(self) -> List[Tuple[str, bool, str]]:
        return [(ch.name, *ch.run()) for ch in self.checks]


def _seeded(rule: RuleTable, seeds: Sequence[int]) -> List[PlusCharacter]:
    return [random_plus_character(rule, s) for s in seeds]


def kpz_scenario(edge_cap: int = 6, poly_cap=(0, 1), degree_cap=2, seeds=(1, 2, 3)) -> Scenario:
    """KPZ with I(polynomial) = 0: property (a) and the polynomial-shift lemma."""
    rule = builtin("kpzbar")
    l = kpz_character(rule)
    basis = [t for t in rule.generate_basis(degree_cap, edge_cap, poly_cap) if not rule.is_killed(t)]
    M = M_from_character(l)
    gs = _seeded(rule, seeds)

    def prop_a():
        for g in gs:
            for t in basis:
                d = property_a_difference(M, g, t)
                if d:
                    return False, f"{render_tree(t, rule)} under {g.name}"
        return True, f"{len(basis)} trees, {len(gs)} characters"

    def lemma():
        for t in basis:
            fixed, poly = kpz_lemma(l, t)
            if not (fixed and poly):
                return False, render_tree(t, rule)
        return True, f"{len(basis)} trees"

    def admissible():
        return is_admissible_minus(l), "support " + ", ".join(render_tree(t, rule) for t in l.support())

    return Scenario(
        "kpz",
        rule,
        l,
        [
            Check("admissible character", admissible, "support list"),
            Check("M commutes with Gamma_g", prop_a, "KPZ property (a)"),
            Check("M o t = t and M t - t polynomial", lemma, "KPZ lemma"),
        ],
    )


def gkpz_commutator(g: PlusCharacter) -> LinComb:
    """C1 (Gamma_g I(I(Xi)) - I(Gamma_g I(Xi))), the commutator predicted by the single I(Xi)*Xi extraction."""
    rule = g.rule
    inner = parse_tree("I(Xi)", rule)
    outer = parse_tree("I(I(Xi))", rule)
    diff = g.gamma(outer) - graft_lincomb(rule, "I", rule.zero(), g.gamma(inner))
    return diff.scale(Poly.symbol("C1"))


def gkpz_scenario(edge_cap: int = 6, seeds=(1, 2, 3)) -> Scenario:
    """Generalised KPZ: property (a) breaks on I(I(I(Xi)Xi)Xi).

    Under the plain rule the difference is nonzero but also carries terms
    from the extraction at the inner noise node, which produces I(I(One)Xi).
    With kernels of polynomials set to zero only the I(Xi)*Xi extraction is
    left, and the difference is exactly ``gkpz_commutator``.
    """
    rule = builtin("gkpz")
    bar = builtin("gkpzbar")
    l = gkpz_character(edge_cap, rule)
    tau = parse_tree(GKPZ_COUNTEREXAMPLE, rule)
    expected_c = {parse_tree(s, rule) for s in ("I1(Xi)", "I1(I1(Xi)*I1(Xi))", "I1(I(Xi)*Xi)")}

    def counterexample():
        M = M_from_character(l)
        diffs = [property_a_difference(M, g, tau) for g in _seeded(rule, seeds)]
        return any(diffs), "nonzero difference" if any(diffs) else "difference vanished"

    def exact_form():
        M = M_from_character(gkpz_character(edge_cap, bar))
        t = parse_tree(GKPZ_COUNTEREXAMPLE, bar)
        for g in _seeded(bar, seeds):
            d = property_a_difference(M, g, t)
            if not d or not is_polynomial(d) or d != -gkpz_commutator(g):
                return False, f"unexpected difference under {g.name}"
        return True, "C1 (Gamma_g I(I(Xi)) - I(Gamma_g I(Xi))), nonzero polynomial"

    def c_set():
        got = set(negative_planted(rule, edge_cap))
        return got == expected_c, ", ".join(render_tree(t, rule) for t in sorted(got, key=rule.sort_key))

    return Scenario(
        "gkpz",
        rule,
        l,
        [
            Check("M fails to commute with Gamma_g on the counterexample", counterexample, "gKPZ counterexample"),
            Check("commutator is C1 times a nonzero polynomial", exact_form, "single I(Xi)*Xi extraction"),
            Check("negative planted trees", c_set, "degree count, gKPZ"),
        ],
    )


def qua_scenario(edge_cap: int = 6, seeds=(1, 2, 3)) -> Scenario:
    rule = builtin("phi43")
    l = qua_character(rule)
    M = M_from_character(l)
    tau = parse_tree(PHI43_COUNTEREXAMPLE, rule)
    gs = _seeded(rule, seeds)
    expected_c = {parse_tree("I(Xi)", rule)}

    def counterexample():
        ok = any(property_a_difference(M, g, tau) for g in gs)
        return ok, "nonzero difference" if ok else "difference vanished"

    def c_set():
        got = set(negative_planted(rule, edge_cap))
        return got == expected_c, ", ".join(render_tree(t, rule) for t in sorted(got, key=rule.sort_key))

    return Scenario(
        "phi43",
        rule,
        l,
        [
            Check("M fails to commute with Gamma_g on I(I(Xi)^3)", counterexample, "Phi43 counterexample"),
            Check("negative planted trees", c_set, "degree count, Phi43"),
        ],
    )


def wick_scenario(nmax: int = 10) -> Scenario:
    rule = builtin("hermite")
    l = wick_character(max(nmax // 2, 1))

    def reproduce():
        bad = [n for n in range(nmax + 1) if not wick_check(n).ok]
        return not bad, f"n <= {nmax}" if not bad else f"failed at {bad}"

    def lemma():
        for k in range(1, 6):
            for n in range(nmax + 1):
                lhs, rhs = hermite_lemma(k, n)
                if lhs != rhs:
                    return False, f"k={k}, n={n}"
        return True, f"k <= 5, n <= {nmax}"

    return Scenario(
        "wick",
        rule,
        l,
        [
            Check("M Xi^n = H_n", reproduce, "closed-form Wick character"),
            Check("R^k/k! = (f_k (x) id) Delta^-_r", lemma, "Hermite lemma"),
        ],
    )


def recursive_M(l: MinusCharacter) -> TreeMap:
    """M rebuilt from R_l alone."""
    return M_from_R(R_from_character(l), l.rule)[0]


CHARACTERS = {
    "wick": lambda: wick_character(5),
    "kpz": kpz_character,
    "gkpz": gkpz_character,
    "qua": qua_character,
}

SCENARIOS = {
    "wick": wick_scenario,
    "kpz": kpz_scenario,
    "gkpz": gkpz_scenario,
    "phi43": qua_scenario,
}
