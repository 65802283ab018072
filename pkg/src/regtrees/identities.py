"""Identity suites: every algebraic law the library relies on, checked tree by tree.

A suite yields ``Outcome`` rows, one per (identity, subject).  Both sides
of each identity are computed by independent routes wherever two routes
exist; the report shows the difference when they disagree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Iterator, List, Optional, Sequence

from . import casebook
from .characters import (
    MinusCharacter,
    PlusCharacter,
    compose_plus,
    compose_plus_pairing,
    identity_plus,
    inverse_plus,
    inverse_plus_antipode,
    random_minus_character,
    random_plus_character,
)
from .coproducts import (
    antipode,
    delta,
    delta_hat_1,
    delta_hat_1_explicit,
    delta_minus,
    delta_minus_circ,
    delta_minus_circ_rec,
    delta_minus_r,
    delta_minus_r_from_2,
    delta_minus_via_hat,
    delta_plus,
    delta_plus_explicit,
    delta_plus_via_hat,
    forest_product,
    inv_factorial,
    plus_mult,
    tilde_J,
)
from .expr import render_key, render_lincomb, render_tree
from .lincomb import LinComb
from .renorm import (
    D_inverse,
    D_map,
    M_from_character,
    M_from_R,
    Mcirc_from_character,
    R_from_character,
    R_inverse,
    RenormStructure,
    check_admissible,
    delta_M_closed_form,
    hatM2_sides,
    is_upper_triangular,
)
from .rules import RuleTable, indices_below
from .trees import RootedForest, Tree, add_index, graft, tree_product, unit, unit_index


@dataclass
class Outcome:
    identity: str
    subject: str
    ok: bool
    detail: str = ""


def splice(x: LinComb, maps: Sequence[Optional[Callable]]) -> LinComb:
    """Apply one map per tensor leg; legs mapped to tuples are flattened in place."""
    out = LinComb()
    for key, c in x.items():
        partial = [((), c)]
        for leg, fn in zip(key, maps):
            image = LinComb.of(leg) if fn is None else fn(leg)
            nxt = []
            for prefix, pc in partial:
                for k, kc in image.items():
                    nxt.append((prefix + (k if isinstance(k, tuple) else (k,)), pc * kc))
            partial = nxt
        for k, kc in partial:
            out.add_term(k, kc)
    return out


def mult_legs(x: LinComb, i: int, j: int, product: Callable) -> LinComb:
    """Merge legs i and j (i < j) of a tensor combination with a product returning a LinComb."""
    out = LinComb()
    for key, c in x.items():
        for merged, mc in product(key[i], key[j]).items():
            rest = key[:i] + (merged,) + key[i + 1 : j] + key[j + 1 :]
            out.add_term(rest, c * mc)
    return out


# ---------------------------------------------------------------------
# shared context
# ---------------------------------------------------------------------

DEFAULT_DEGREE_CAPS = {"gkpz": Fraction(1, 2), "gkpzbar": Fraction(1, 2), "phi43": Fraction(2)}
# left-degree cap for the rooted forest coproduct; never above the subject's own degree
DEFAULT_HAT_CAPS = {"phi43": Fraction(0)}


class SuiteContext:
    """Capped bases and seeded characters shared between suites."""

    def __init__(
        self, rule: RuleTable, max_edges: int, seed: int, degree_cap=None, poly_edges: int = 2, product_sample: int = 30
    ):
        self.rule = rule
        self.max_edges = max_edges
        self.seed = seed
        self.degree_cap = DEFAULT_DEGREE_CAPS.get(rule.name) if degree_cap is None else degree_cap
        self.poly_edges = poly_edges
        self.product_sample = product_sample
        self.hat_cap = DEFAULT_HAT_CAPS.get(rule.name, Fraction(1))

    def hat_cap_for(self, rf) -> Fraction:
        return min(self.hat_cap, self.rule.degree(rf))

    @cached_property
    def basis(self) -> List[Tree]:
        """Trees with at most ``max_edges`` edges, plus small trees carrying a single X anywhere."""
        rule = self.rule
        trees = set(rule.generate_basis(self.degree_cap, self.max_edges, 0))
        for t in rule.generate_basis(self.degree_cap, min(self.max_edges, self.poly_edges), 1):
            if sum(sum(v.n) for v in t.nodes()) == 1:
                trees.add(t)
        trees = {t for t in trees if not rule.is_killed(t)}
        return sorted(trees, key=rule.sort_key)

    @cached_property
    def generators(self) -> List[Tree]:
        """J_k(s) for every planted I_k(s) inside a basis tree that survives onto T_+."""
        rule = self.rule
        out = set()
        for t in self.basis:
            for v in t.nodes():
                for e in v.edges:
                    p = Tree(rule.zero(), (e,))
                    if rule.plus_alive(p):
                        out.add(p)
        return sorted(out, key=rule.sort_key)

    @cached_property
    def plus_basis(self) -> List[Tree]:
        """1, the X_i, the generators, and products of two of these within the edge cap.

        Every law checked on T_+ is compatible with the product, so the
        generators already pin it down; the products are a seeded sample of
        ``product_sample`` of them.
        """
        rule = self.rule
        xs = [Tree(unit_index(rule.dim, i)) for i in range(rule.dim + 1)]
        base = self.generators + xs
        out = {unit(rule.dim), *base}
        products = set()
        for i, a in enumerate(base):
            for b in base[i:]:
                if a.n_edges() + b.n_edges() <= self.max_edges:
                    prod = tree_product(a, b)
                    if rule.plus_alive(prod):
                        products.add(prod)
        products = sorted(products - out, key=rule.sort_key)
        if len(products) > self.product_sample:
            products = random.Random(self.seed).sample(products, self.product_sample)
        return sorted(out.union(products), key=rule.sort_key)

    @cached_property
    def plus_characters(self) -> List[PlusCharacter]:
        return [random_plus_character(self.rule, self.seed + i) for i in range(3)]

    @cached_property
    def minus_characters(self) -> List[MinusCharacter]:
        """The worked-example character for this rule (if any) and a seeded admissible one."""
        out = []
        named = {
            "hermite": lambda: casebook.wick_character(max(self.max_edges // 2, 1)),
            "kpz": lambda: casebook.kpz_character(self.rule),
            "kpzbar": lambda: casebook.kpz_character(self.rule),
            "gkpz": lambda: casebook.gkpz_character(self.max_edges, self.rule),
            "gkpzbar": lambda: casebook.gkpz_character(self.max_edges, self.rule),
            "phi43": lambda: casebook.qua_character(self.rule),
        }
        if self.rule.name in named:
            out.append(named[self.rule.name]())
        out.append(random_minus_character(self.rule, self.seed, self.rule.generate_basis(0, self.max_edges, 0)))
        return out

    def show(self, x) -> str:
        return render_key(x, self.rule)

    def compare(self, identity: str, subject, lhs: LinComb, rhs: LinComb) -> Outcome:
        subject = subject if isinstance(subject, str) else self.show(subject)
        if lhs == rhs:
            return Outcome(identity, subject, True)
        return Outcome(identity, subject, False, render_lincomb(lhs - rhs, self.rule))


# ---------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------


def suite_coassoc(ctx: SuiteContext) -> Iterator[Outcome]:
    rule = ctx.rule
    dplus = lambda x: delta_plus(x, rule)
    dstruct = lambda x: delta(x, rule)
    for s in ctx.plus_basis:
        d = dplus(s)
        yield ctx.compare("plus coassociativity", s, splice(d, [dplus, None]), splice(d, [None, dplus]))
    for t in ctx.basis:
        d = dstruct(t)
        yield ctx.compare("comodule", t, splice(d, [dstruct, None]), splice(d, [None, dplus]))
    for rf in _hat_subjects(ctx):
        yield _hat_coassoc(ctx, rf, ctx.hat_cap_for(rf))
    # the same coproducts read off different constructions
    for t in ctx.basis:
        yield ctx.compare("structure coaction from root subtrees", t, delta_plus_explicit(t, rule), dstruct(t))
        yield ctx.compare("structure coaction from rooted forests", t, delta_plus_via_hat(t, rule), dstruct(t))
        yield ctx.compare("negative extraction from rooted forests", t, delta_minus_via_hat(t, rule), delta_minus(t, rule))
        yield ctx.compare("root extraction from root subtrees", t, delta_minus_r_from_2(t, rule), delta_minus_r(t, rule))
        yield ctx.compare("interior extraction recursion", t, delta_minus_circ_rec(t, rule), delta_minus_circ(t, rule))
    for rf in _hat_subjects(ctx):
        yield ctx.compare(
            "rooted forest coproduct recursion",
            rf,
            delta_hat_1(rf, rule, ctx.hat_cap_for(rf)),
            delta_hat_1_explicit(rf, rule, ctx.hat_cap_for(rf)),
        )


def _hat_subjects(ctx: SuiteContext) -> List[RootedForest]:
    """Basis trees as rooted forests, plus a few with a second, covered tree."""
    small = [t for t in ctx.basis if t.n_edges() <= 2 and t.edges]
    out = [RootedForest(t) for t in ctx.basis]
    for a in small[:4]:
        for b in small[:4]:
            if a.n_edges() + b.n_edges() <= ctx.max_edges:
                out.append(RootedForest(a).star(RootedForest(b).cover()))
    return out


def _hat_coassoc(ctx: SuiteContext, rf: RootedForest, cap) -> Outcome:
    """Both iterated coproducts at the same cap, compared where both are complete.

    Degrees add along the coproduct, so a term a (x) b (x) c is complete on
    both sides as soon as |a|, |b| and |a| + |b| are all within the cap.
    """
    rule = ctx.rule
    hat = lambda x: delta_hat_1(x, rule, cap)
    d = hat(rf)
    keep = lambda k: rule.degree(k[0]) <= cap and rule.degree(k[1]) <= cap and rule.degree(k[0]) + rule.degree(k[1]) <= cap
    lhs = splice(d, [None, hat]).filter(keep)
    rhs = splice(d, [hat, None]).filter(keep)
    return ctx.compare("rooted forest coassociativity", rf, lhs, rhs)


def suite_factorisation(ctx: SuiteContext) -> Iterator[Outcome]:
    rule = ctx.rule
    circ = lambda x: delta_minus_circ(x, rule)
    for t in ctx.basis:
        nested = splice(delta_minus_r(t, rule), [None, circ])
        lhs = mult_legs(nested, 0, 1, lambda a, b: LinComb.of(forest_product(a, b)))
        yield ctx.compare("factorisation", t, lhs, delta_minus(t, rule))


def suite_cointeraction(ctx: SuiteContext) -> Iterator[Outcome]:
    rule = ctx.rule
    for t in ctx.basis:
        lhs = splice(delta_minus_r(t, rule), [None, lambda x: delta(x, rule)])
        rhs = splice(delta(t, rule), [lambda x: delta_minus_r(x, rule), None])
        yield ctx.compare("cointeraction", t, lhs, rhs)


def _character_outcome(ctx, identity, g_left, g_right, gens) -> Outcome:
    bad = [j for j in gens if g_left(j) != g_right(j)]
    if list(g_left.x) != list(g_right.x):
        return Outcome(identity, f"{g_left.name} vs {g_right.name}", False, "values on X differ")
    if bad:
        j = bad[0]
        return Outcome(identity, f"{g_left.name} vs {g_right.name}", False, f"{ctx.show(j)}: {g_left(j)} != {g_right(j)}")
    return Outcome(identity, f"{g_left.name} vs {g_right.name}", True)


def suite_group(ctx: SuiteContext, tensors: int = 20) -> Iterator[Outcome]:
    rule = ctx.rule
    gs = ctx.plus_characters
    gens = ctx.generators
    one = identity_plus(rule)
    for g in gs:
        for t in ctx.basis:
            yield ctx.compare(f"Gamma recursion = pairing [{g.name}]", t, g.gamma(t), g.gamma_pairing(t))
            diff = g.gamma(t) - LinComb.of(t)
            ok = all(rule.degree(s) < rule.degree(t) for s in diff.keys())
            yield Outcome(f"Gamma correction has lower degree [{g.name}]", ctx.show(t), ok, "" if ok else render_lincomb(diff, rule))
            if t.is_planted() and t.edges[0][0] in rule.kernels:
                ((et, k, sigma),) = t.edges
                rest = g.gamma(t) - _graft_all(rule, et, k, g.gamma(sigma))
                ok = all(not s.edges for s in rest.keys())
                yield Outcome(f"Gamma on I_k is polynomial [{g.name}]", ctx.show(t), ok, "" if ok else render_lincomb(rest, rule))
    for g1, g2 in zip(gs, gs[1:] + gs[:1]):
        g12 = compose_plus(g1, g2)
        for t in ctx.basis:
            yield ctx.compare(f"Gamma_g Gamma_h = Gamma_(g o h) [{g1.name}, {g2.name}]", t, g1.gamma(g2.gamma(t)), g12.gamma(t))
        yield _character_outcome(ctx, "composition recursion = pairing", g12, compose_plus_pairing(g1, g2), gens)
    g1, g2, g3 = gs
    yield _character_outcome(
        ctx, "composition is associative", compose_plus(compose_plus(g1, g2), g3), compose_plus(g1, compose_plus(g2, g3)), gens
    )
    for g in gs:
        inv = inverse_plus(g)
        yield _character_outcome(ctx, "inverse recursion = antipode", inv, inverse_plus_antipode(g), gens)
        yield _character_outcome(ctx, "g o g^-1 = 1*", compose_plus(g, inv), one, gens)
        yield _character_outcome(ctx, "g^-1 o g = 1*", compose_plus(inv, g), one, gens)
        for t in ctx.basis:
            yield ctx.compare(f"Gamma_(g^-1) Gamma_g = id [{g.name}]", t, inv.gamma(g.gamma(t)), LinComb.of(t))
    rng = random.Random(f"{ctx.seed}:tensors")
    for i in range(tensors):
        x = LinComb()
        for _ in range(rng.randint(1, 3)):
            x.add_term((rng.choice(ctx.basis), rng.choice(ctx.plus_basis)), Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        label = f"tensor #{i}"
        yield ctx.compare("D^-1 D = id", label, D_inverse(D_map(x, rule), rule), x)
        yield ctx.compare("D D^-1 = id", label, D_map(D_inverse(x, rule), rule), x)


def _graft_all(rule: RuleTable, t: str, k, x: LinComb) -> LinComb:
    out = LinComb()
    for s, c in x.items():
        g = graft(t, k, s)
        if not rule.is_killed(g):
            out.add_term(g, c)
    return out


def _plus_project_graft(rule: RuleTable, t: str, k, x: Tree) -> LinComb:
    g = graft(t, k, x)
    return LinComb.of(g) if rule.plus_alive(g) else LinComb()


def suite_antipode(ctx: SuiteContext) -> Iterator[Outcome]:
    rule = ctx.rule
    A = lambda x: antipode(x, rule)
    one = unit(rule.dim)
    for s in ctx.plus_basis:
        d = delta_plus(s, rule)
        counit = LinComb.of(one) if s == one else LinComb()
        right = mult_legs(splice(d, [None, A]), 0, 1, lambda a, b: plus_mult(LinComb.of(a), LinComb.of(b), rule))
        left = mult_legs(splice(d, [A, None]), 0, 1, lambda a, b: plus_mult(LinComb.of(a), LinComb.of(b), rule))
        yield ctx.compare("M+(id (x) A+)D+ = counit", s, _untuple(right), counit)
        yield ctx.compare("M+(A+ (x) id)D+ = counit", s, _untuple(left), counit)
    for j in ctx.generators:
        ((et, k, tau),) = j.edges
        dt = delta(tau, rule)
        lhs = LinComb()
        for l in indices_below(rule.type_degree(et) - rule.index_degree(k) + rule.degree(tau), rule.scaling):
            jj = graft(et, add_index(k, l), tau)
            if rule.plus_alive(jj):
                lhs.iadd(plus_mult(LinComb.of(Tree(l)), A(jj), rule), inv_factorial(l))
        rhs = LinComb()
        for (a, b), c in dt.items():
            rhs.iadd(plus_mult(_plus_project_graft(rule, et, k, a), A(b), rule), -c)
        yield ctx.compare("sum X^l/l! A+ J_(k+l) = -M+(J_k (x) A+)D", j, lhs, rhs)
        magic = LinComb()
        for (a, b), c in dt.items():
            g = graft(et, k, a)
            if rule.plus_alive(g):
                magic.iadd(plus_mult(A(g), LinComb.of(b), rule), c)
        yield ctx.compare("M+(A+ J_k (x) id)D = -tilde J_k", j, magic, tilde_J(et, k, tau, rule).scale(-1))


def _untuple(x: LinComb) -> LinComb:
    return x.map_keys(lambda k: k[0])


def suite_deltaM(ctx: SuiteContext) -> Iterator[Outcome]:
    """Upper triangularity and the hat M identities (algebraic stand-in for the model identity)."""
    rule = ctx.rule
    one = unit(rule.dim)
    ident = RenormStructure(_identity_map(), rule)
    for t in ctx.basis:
        yield ctx.compare("identity map: Delta^M = t (x) 1", t, ident.delta_M(t), LinComb.of((t, one)))
    for j in ctx.generators:
        yield ctx.compare("identity map: hat M = id", j, ident.hat_M(j), LinComb.of(j))
    for l in ctx.minus_characters:
        S = RenormStructure(R_from_character(l), rule)
        for xi in sorted(rule.noises):
            p = graft(xi, rule.zero(), one)
            yield ctx.compare(f"Delta^Mo Xi = Xi (x) 1 [{l.name}]", p, S.delta_Mcirc(p), LinComb.of((p, one)))
        for i in range(rule.dim + 1):
            x = Tree(tuple(int(a == i) for a in range(rule.dim + 1)))
            yield ctx.compare(f"hat M X = X [{l.name}]", x, S.hat_M(x), LinComb.of(x))
        for t in ctx.basis:
            ok = is_upper_triangular(S, t)
            yield Outcome(f"upper triangular [{l.name}]", ctx.show(t), ok)
            lhs, rhs = hatM2_sides(S, t)
            yield ctx.compare(f"D Delta^M = (M (x) hat M) Delta [{l.name}]", t, lhs, rhs)
            yield ctx.compare(f"Delta^M = D^-1 (M (x) hat M) Delta [{l.name}]", t, S.delta_M(t), delta_M_closed_form(S, t))


def _identity_map():
    from .renorm import TreeMap

    return TreeMap(LinComb.of, "id")


def suite_admissible(ctx: SuiteContext) -> Iterator[Outcome]:
    rule = ctx.rule
    for l in ctx.minus_characters:
        R = R_from_character(l)
        M_char = M_from_character(l)
        M_rec, Mo_rec = M_from_R(R, rule)
        Mo_char = Mcirc_from_character(l)
        R_inv = R_inverse(R, rule)
        for name, t, ok in check_admissible(R, rule, ctx.basis, ctx.plus_characters):
            yield Outcome(f"admissible: {name} [{l.name}]", ctx.show(t), ok)
        for t in ctx.basis:
            yield ctx.compare(f"inclusion: character M = recursive M [{l.name}]", t, M_char(t), M_rec(t))
            yield ctx.compare(f"factorisation: M = Mo R [{l.name}]", t, M_char(t), Mo_char(R(t)))
            yield ctx.compare(f"interior map: character Mo = recursive Mo [{l.name}]", t, Mo_char(t), Mo_rec(t))
            yield ctx.compare(f"alternative form: Mo = M (id + L) [{l.name}]", t, Mo_char(t), M_char(R_inv(t)))


SUITES: Dict[str, Callable[[SuiteContext], Iterator[Outcome]]] = {
    "coassoc": suite_coassoc,
    "factorisation": suite_factorisation,
    "cointeraction": suite_cointeraction,
    "group": suite_group,
    "antipode": suite_antipode,
    "deltaM": suite_deltaM,
    "admissible": suite_admissible,
}


def run_suites(ctx: SuiteContext, names: Sequence[str]) -> List[Outcome]:
    if "all" in names:
        names = list(SUITES)
    out = []
    for name in names:
        out.extend(SUITES[name](ctx))
    return out


def format_report(outcomes: Sequence[Outcome], header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    for o in outcomes:
        status = "PASS" if o.ok else "FAIL"
        line = f"{status}\t{o.identity}\t{o.subject}"
        if not o.ok and o.detail:
            line += f"\tdiff: {o.detail}"
        lines.append(line)
    counts: Dict[str, List[int]] = {}
    for o in outcomes:
        counts.setdefault(o.identity, [0, 0])[0 if o.ok else 1] += 1
    lines.append("# summary: identity\tpass\tfail")
    for name, (p, f) in counts.items():
        lines.append(f"summary\t{name}\t{p}\t{f}")
    total_p = sum(p for p, _ in counts.values())
    total_f = sum(f for _, f in counts.values())
    lines.append(f"summary\tTOTAL\t{total_p}\t{total_f}")
    return "\n".join(lines)
