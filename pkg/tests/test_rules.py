from fractions import Fraction

import pytest

from regtrees.expr import parse_tree, render_tree
from regtrees.renorm import order_lt
from regtrees.lincomb import LinComb
from regtrees.rules import RuleError, indices_below, parse_rules
from regtrees.trees import Forest, Tree, unit


class TestDegrees:
    def test_monomial_degree_uses_scaling(self, kpz):
        assert kpz.degree(Tree((1, 0))) == 2
        assert kpz.degree(Tree((0, 1))) == 1

    def test_derivative_edge(self, kpz):
        assert kpz.degree(parse_tree("I1(Xi)", kpz)) == Fraction(-51, 100)

    def test_additivity(self, kpz):
        assert kpz.degree(parse_tree("I1(Xi)*I1(Xi)", kpz)) == Fraction(-51, 50)
        f = Forest([parse_tree("I1(Xi)", kpz), parse_tree("Xi", kpz)])
        assert kpz.degree(f) == Fraction(-51, 100) + Fraction(-151, 100)

    def test_noise_count(self, kpz):
        assert kpz.noise_count(Tree((3, 1))) == 0
        assert kpz.noise_count(parse_tree("I(I(Xi)*Xi)", kpz)) == 2

    def test_order_prefers_fewer_noises(self, kpz):
        one = LinComb.of(parse_tree("I1(Xi)", kpz))
        two = LinComb.of(parse_tree("I1(Xi)*I1(Xi)", kpz))
        assert order_lt(one, two, kpz)
        assert not order_lt(two, one, kpz)


class TestConformity:
    def test_kpz_admits_pair_of_derivatives(self, kpz):
        assert kpz.conforms(parse_tree("I1(Xi)*I1(Xi)", kpz))

    def test_kpz_rejects_two_noises_under_I(self, kpz):
        assert not kpz.conforms(parse_tree("I(Xi*Xi)", kpz))

    def test_phi43_admits_cube(self, phi43):
        assert phi43.conforms(parse_tree("I(I(Xi)*I(Xi)*I(Xi))", phi43))
        assert not phi43.conforms(parse_tree("I(I(Xi)*I(Xi)*I(Xi)*I(Xi))", phi43))

    def test_gkpz_star_items(self, gkpz):
        assert gkpz.conforms(parse_tree("I(I(I(Xi)*Xi)*Xi)", gkpz))
        assert gkpz.conforms(parse_tree("I(I(Xi)*I(Xi)*I(Xi)*I1(Xi))", gkpz))
        assert not gkpz.conforms(parse_tree("I(Xi*Xi)", gkpz))

    def test_builtins_are_normal(self, kpz, gkpz, phi43):
        for rule in (kpz, gkpz, phi43):
            assert rule.check_normal() == []


class TestBasis:
    def test_hermite_powers(self, hermite):
        basis = hermite.generate_basis(None, 3, 0)
        assert [render_tree(t, hermite) for t in basis] == ["One", "Xi", "Xi*Xi", "Xi*Xi*Xi"]

    def test_kpz_degree_cap(self, kpz):
        # I1(Xi)^2 has four edges, so the cap has to be 4 for it to appear
        basis = {render_tree(t, kpz) for t in kpz.generate_basis(0, 4, 0)}
        assert {"Xi", "I1(Xi)", "I1(Xi)*I1(Xi)"} <= basis
        assert "I(Xi)*I(Xi)" not in basis  # degree 49/50 is above the cap
        assert kpz.degree(parse_tree("I(Xi)*I(Xi)", kpz)) == Fraction(49, 50)

    def test_no_edges_means_monomials(self, kpz):
        basis = kpz.generate_basis(2, 0, 1)
        assert set(basis) == {Tree((0, 0)), Tree((1, 0)), Tree((0, 1))}  # X_0 X_1 has degree 3

    def test_basis_trees_conform(self, kpz, phi43):
        for rule in (kpz, phi43):
            for t in rule.generate_basis(None, 4, 0):
                assert rule.conforms(t)


class TestProjections:
    def test_plus_projection(self, kpz):
        assert not kpz.plus_alive(parse_tree("I1(Xi)", kpz))
        assert kpz.plus_alive(parse_tree("I(Xi)", kpz))
        assert kpz.plus_alive(Tree((1, 1)))

    def test_minus_projection(self, phi43):
        f = Forest([parse_tree("I(Xi)*I(Xi)", phi43), parse_tree("Xi", phi43)])
        assert phi43.minus_project(f) == f
        g = Forest([parse_tree("I(Xi)*I(Xi)*I(Xi)*Xi", phi43), Tree((0, 1, 0, 0))])
        assert phi43.minus_project(g) is None

    def test_bare_nodes_are_dropped(self, hermite):
        sq = parse_tree("Xi*Xi", hermite)
        assert hermite.drop_units(Forest([unit(0), sq])) == Forest([sq])


class TestRuleFiles:
    def test_parse_and_degrees(self):
        rule = parse_rules("dim = 1\nscaling = 2 1\nnoise Xi degree -3/2\nkernel K degree 2\nrule K : () (Xi) (K,K)\n")
        assert rule.kernels == {"K": 2} and rule.noises == {"Xi": Fraction(-3, 2)}
        assert rule.conforms(parse_tree("K(Xi)*K(Xi)", rule))

    @pytest.mark.parametrize(
        "text",
        [
            "scaling = 1\n",
            "dim = 1\nscaling = 1\n",
            "dim = 0\nnoise Xi degree x\n",
            "dim = 0\nrule K : ()\n",
            "dim = 0\nkernel K degree 1\nrule K : (Z)\n",
            "dim = 0\noption fancy\n",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(RuleError):
            parse_rules(text)


def test_indices_below():
    found = set(indices_below(Fraction(3), (2, 1)))
    assert found == {(0, 0), (0, 1), (0, 2), (1, 0)}
    assert (1, 1) in set(indices_below(Fraction(3), (2, 1), strict=False))
