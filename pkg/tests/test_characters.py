from fractions import Fraction

import pytest

from oracles import brute_delta_minus as brute
from regtrees import casebook
from regtrees.characters import (
    CharacterError,
    compose_plus,
    compose_plus_pairing,
    convolve_minus,
    identity_minus,
    identity_plus,
    inverse_minus,
    inverse_plus,
    inverse_plus_antipode,
    is_admissible_minus,
    minus_from_values,
    plus_from_values,
    random_plus_character,
)
from regtrees.coeffs import Poly
from regtrees.expr import parse_tree
from regtrees.lincomb import LinComb
from regtrees.trees import Forest, Tree, unit

c = Poly.symbol("c")


def T(rule, text):
    return parse_tree(text, rule)


@pytest.fixture
def g(kpz):
    return random_plus_character(kpz, 11)


class TestGamma:
    def test_noise_is_fixed(self, kpz, g):
        xi = T(kpz, "Xi")
        assert g.gamma(xi) == LinComb.of(xi)

    def test_monomial_shift(self, kpz):
        h = Fraction(7, 3)
        g = plus_from_values(kpz, [Fraction(0), h], {})
        assert g.gamma(Tree((0, 1))) == LinComb([(Tree((0, 1)), 1), (unit(1), h)])

    def test_planted_noise(self, kpz, g):
        j = T(kpz, "I(Xi)")
        assert g.gamma(j) == LinComb([(j, 1), (unit(1), g(j))])

    def test_both_routes_agree(self, kpz, g):
        for t in kpz.generate_basis(2, 4, 1):
            assert g.gamma(t) == g.gamma_pairing(t), t

    def test_correction_has_lower_degree(self, kpz, g):
        for t in kpz.generate_basis(2, 4, 1):
            rest = g.gamma(t) - LinComb.of(t)
            assert all(kpz.degree(s) < kpz.degree(t) for s in rest.keys())

    def test_missing_generator_is_an_error(self, kpz):
        g = plus_from_values(kpz, [Fraction(1), Fraction(2)], {})
        with pytest.raises(CharacterError):
            g(T(kpz, "I(Xi)"))

    def test_non_generator_rejected(self, kpz, g):
        with pytest.raises(CharacterError):
            g.gen(T(kpz, "I(Xi)*I(Xi)"))


class TestPlusGroup:
    def test_x_values_add(self, kpz):
        a, b = random_plus_character(kpz, 1), random_plus_character(kpz, 2)
        ab = compose_plus(a, b)
        assert ab.x == tuple(x + y for x, y in zip(a.x, b.x))

    def test_identity_is_neutral(self, kpz, g):
        right = compose_plus(g, identity_plus(kpz))
        for t in kpz.generate_basis(None, 4, 0):
            assert right(t) == g(t)

    def test_inverse_on_generators(self, kpz, g):
        inv = inverse_plus(g)
        assert inv.x == tuple(-v for v in g.x)
        j = T(kpz, "I(Xi)")
        assert inv(j) == -g(j)

    def test_identity_is_its_own_inverse(self, kpz):
        inv = inverse_plus(identity_plus(kpz))
        assert all(v == 0 for v in inv.x)
        assert inv(T(kpz, "I(I(Xi)*I(Xi))")) == 0

    def test_laws(self, kpz):
        a, b, d = (random_plus_character(kpz, s) for s in (1, 2, 3))
        trees = kpz.generate_basis(2, 4, 1)
        gens = [t for t in trees if kpz.plus_alive(t) and len(t.edges) == 1 and not any(t.n)]
        ab = compose_plus(a, b)
        paired = compose_plus_pairing(a, b)
        inv, inv2 = inverse_plus(a), inverse_plus_antipode(a)
        left, right = compose_plus(ab, d), compose_plus(a, compose_plus(b, d))
        unit_char = compose_plus(a, inv)
        for j in gens:
            assert ab(j) == paired(j)
            assert inv(j) == inv2(j)
            assert left(j) == right(j)
            assert unit_char(j) == 0
        for t in trees:
            assert a.gamma(b.gamma(t)) == ab.gamma(t)


class TestMinusCharacters:
    def test_multiplicative_on_forests(self, kpz):
        t = T(kpz, "I1(Xi)*I1(Xi)")
        l = minus_from_values(kpz, {t: Fraction(3)})
        assert l(Forest([t, t])) == 9
        assert l(Forest()) == 1
        assert l(T(kpz, "Xi")) == 0

    def test_neutral_element(self, hermite):
        l = casebook.wick_character(3)
        conv = convolve_minus(l, identity_minus(hermite))
        for n in range(7):
            t = casebook.xi_power(n)
            assert conv.tree_value(t) == l.tree_value(t)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_inverse(self, hermite, n):
        l = casebook.wick_character(3)
        assert convolve_minus(l, inverse_minus(l)).tree_value(casebook.xi_power(n)) == 0

    def test_square_on_fourth_power(self, hermite):
        # only {Xi^2} (x) Xi^2 has a nonzero pairing, with multiplicity 6
        l = minus_from_values(hermite, {casebook.xi_power(2): c * c})
        t = casebook.xi_power(4)
        assert convolve_minus(l, l).tree_value(t) == 6 * c**4
        from_brute = sum(k * l(a) * l(Forest([b])) for (a, b), k in brute.delta_minus(t, hermite).items())
        assert from_brute == 6 * c**4


class TestAdmissibility:
    @pytest.mark.parametrize(
        "text,expected",
        [("I1(Xi)*I1(Xi)", True), ("I(Xi)", False), ("X_1*I1(Xi)*I1(Xi)", False), ("I(Xi)*I(Xi)", False)],
    )
    def test_support(self, kpz, text, expected):
        assert is_admissible_minus(minus_from_values(kpz, {T(kpz, text): Fraction(1)})) is expected

    def test_builtin_characters(self):
        for l in (casebook.wick_character(5), casebook.kpz_character(), casebook.gkpz_character(), casebook.qua_character()):
            assert is_admissible_minus(l)
