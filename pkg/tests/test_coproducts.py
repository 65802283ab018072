from fractions import Fraction
from math import comb

import pytest

from oracles import brute_delta_minus as brute
from regtrees.coproducts import (
    antipode,
    delta,
    delta_2,
    delta_hat_1,
    delta_hat_1_explicit,
    delta_minus,
    delta_minus_circ,
    delta_minus_r,
    delta_minus_via_hat,
    delta_plus,
    delta_plus_explicit,
    plus_mult,
    tilde_J,
)
from regtrees.expr import parse_rooted, parse_tree
from regtrees.lincomb import LinComb
from regtrees.rules import builtin
from regtrees.trees import EMPTY_FOREST, Forest, RootedForest, Tree, tree_product, unit


def T(rule, text):
    return parse_tree(text, rule)


def F(rule, *texts):
    return Forest(parse_tree(t, rule) for t in texts)


def pairs(rule, *items):
    """LinComb of tree pairs from (coefficient, left, right) strings."""
    return LinComb((((T(rule, a), T(rule, b)), c) for c, a, b in items))


class TestStructureCoaction:
    def test_noise(self, kpz):
        assert delta(T(kpz, "Xi"), kpz) == pairs(kpz, (1, "Xi", "One"))

    def test_negative_planted_tree_has_no_right_part(self, kpz):
        assert delta(T(kpz, "I1(Xi)"), kpz) == pairs(kpz, (1, "I1(Xi)", "One"))

    def test_positive_planted_tree(self, kpz):
        assert delta(T(kpz, "I(Xi)"), kpz) == pairs(kpz, (1, "I(Xi)", "One"), (1, "One", "I(Xi)"))

    def test_plus_coproduct(self, kpz):
        assert delta_plus(T(kpz, "X_1"), kpz) == pairs(kpz, (1, "X_1", "One"), (1, "One", "X_1"))
        assert delta_plus(unit(1), kpz) == pairs(kpz, (1, "One", "One"))
        assert delta_plus(T(kpz, "I(Xi)"), kpz) == pairs(kpz, (1, "I(Xi)", "One"), (1, "One", "I(Xi)"))

    def test_counit_on_unit_right_leg(self, kpz):
        for t in kpz.generate_basis(None, 4, 0):
            assert delta(t, kpz).coeff((t, unit(1))) == 1

    def test_explicit_matches_recursive_on_kpz(self, kpz):
        for t in kpz.generate_basis(None, 5, 0):
            assert delta_plus_explicit(t, kpz) == delta(t, kpz)


class TestAntipode:
    def test_values(self, kpz):
        assert antipode(T(kpz, "X_0"), kpz) == LinComb.of(T(kpz, "X_0"), -1)
        assert antipode(unit(1), kpz) == LinComb.of(unit(1))
        assert antipode(T(kpz, "I(Xi)"), kpz) == LinComb.of(T(kpz, "I(Xi)"), -1)

    def test_tilde_J_of_noise(self, kpz):
        xi = T(kpz, "Xi")
        assert tilde_J("I", (0, 0), xi, kpz) == LinComb.of(T(kpz, "I(Xi)"))

    def test_product_on_plus_side(self, kpz):
        x, j = T(kpz, "X_1"), T(kpz, "I(Xi)")
        assert plus_mult(LinComb.of(x), LinComb.of(j), kpz) == LinComb.of(tree_product(x, j))


class TestNegativeExtraction:
    def test_noise(self, kpz):
        expect = LinComb([((EMPTY_FOREST, T(kpz, "Xi")), 1), ((F(kpz, "Xi"), unit(1)), 1)])
        assert delta_minus(T(kpz, "Xi"), kpz) == expect

    def test_monomial(self, kpz):
        assert delta_minus(T(kpz, "X_1"), kpz) == LinComb.of((EMPTY_FOREST, T(kpz, "X_1")))

    def test_full_extraction(self, kpz):
        t = T(kpz, "I1(Xi)*I1(Xi)")
        assert delta_minus(t, kpz).coeff((Forest([t]), unit(1))) == 1

    @pytest.mark.parametrize("n", range(7))
    def test_root_extraction_is_binomial(self, hermite, n):
        xi = lambda m: Tree((0,), [("Xi", (0,), unit(0))] * m)
        expect = LinComb()
        for k in range(n + 1):
            left = Forest([xi(k)]) if k else EMPTY_FOREST
            expect.add_term((left, xi(n - k)), comb(n, k))
        assert delta_minus_r(xi(n), hermite) == expect

    def test_root_extraction_of_planted_tree(self, kpz):
        # only the whole planted tree can be cut off at the root
        for text in ("I(Xi)", "I1(I1(Xi)*I1(Xi))", "I(I(Xi))", "I1(I1(Xi)*I1(I1(Xi)*I1(Xi)))"):
            t = T(kpz, text)
            out = delta_minus_r(t, kpz)
            assert out.coeff((EMPTY_FOREST, t)) == 1
            assert set(out.keys()) <= {(EMPTY_FOREST, t), (Forest([t]), unit(1))}

    def test_interior_extraction_is_multiplicative(self, kpz):
        basis = [t for t in kpz.generate_basis(None, 3, 0) if t.edges]
        for a in basis[:8]:
            for b in basis[:8]:
                prod = LinComb()
                for (f1, t1), c1 in delta_minus_circ(a, kpz).items():
                    for (f2, t2), c2 in delta_minus_circ(b, kpz).items():
                        prod.add_term((f1 * f2, tree_product(t1, t2)), c1 * c2)
                assert delta_minus_circ(tree_product(a, b), kpz) == prod

    @pytest.mark.parametrize("n", range(7))
    def test_read_off_rooted_forests(self, hermite, n):
        t = Tree((0,), [("Xi", (0,), unit(0))] * n)
        assert delta_minus_via_hat(t, hermite) == delta_minus(t, hermite)


class TestAgainstBruteForce:
    """The engine and the independent bit-mask enumeration agree."""

    @pytest.mark.parametrize(
        "name,edges,poly",
        [("hermite", 5, 1), ("kpz", 4, 0), ("gkpz", 4, 0), ("phi43", 4, 0), ("kpz", 2, 1)],
    )
    def test_full_extraction(self, name, edges, poly):
        rule = builtin(name)
        for t in rule.generate_basis(None, edges, poly):
            assert delta_minus(t, rule) == brute.delta_minus(t, rule), t

    @pytest.mark.parametrize("family", ["root", "interior"])
    def test_families(self, kpz, family):
        ours = delta_minus_r if family == "root" else delta_minus_circ
        for t in kpz.generate_basis(None, 4, 0):
            assert ours(t, kpz) == brute.delta_minus(t, kpz, family), t

    def test_fixture_cases(self):
        for rule_name, expr, _ in brute.CASES:
            rule = builtin(rule_name)
            t = parse_tree(expr, rule)
            assert delta_minus(t, rule) == brute.delta_minus(t, rule)


class TestRootedForests:
    def test_unit(self, kpz):
        one = RootedForest(unit(1))
        assert delta_hat_1(one, kpz, 1) == LinComb.of((one, one))

    def test_monomial_is_binomial(self, kpz):
        out = delta_hat_1(RootedForest(Tree((2, 1))), kpz, 10)
        expect = LinComb()
        for a in range(3):
            for b in range(2):
                left = RootedForest(Tree((2 - a, 1 - b)))
                expect.add_term((left, RootedForest(Tree((a, b)))), comb(2, a) * comb(1, b))
        assert out == expect

    @pytest.mark.parametrize("text", ["I(Xi)", "I(Xi)*Xi", "I1(Xi)*I1(Xi)", "X_1*I(Xi)*C(Xi)", "I(I(Xi))"])
    @pytest.mark.parametrize("cap", [Fraction(-2), Fraction(0), Fraction(1)])
    def test_recursive_matches_enumeration(self, kpz, text, cap):
        rf = parse_rooted(text, kpz)
        assert delta_hat_1(rf, kpz, cap) == delta_hat_1_explicit(rf, kpz, cap)

    def test_every_left_leg_within_cap(self, kpz):
        rf = parse_rooted("I(I(Xi)*Xi)", kpz)
        assert all(kpz.degree(a) <= 0 for a, _ in delta_hat_1(rf, kpz, 0).keys())


class TestRootSubtrees:
    def test_monomial_splits(self, kpz):
        out = delta_2(Tree((0, 2)), kpz, cap=5)
        expect = LinComb((((Tree((0, 2 - l)), Tree((0, l))), comb(2, l)) for l in range(3)))
        assert out == expect

    def test_needs_cap_or_projection(self, kpz):
        with pytest.raises(ValueError):
            delta_2(T(kpz, "Xi"), kpz)
