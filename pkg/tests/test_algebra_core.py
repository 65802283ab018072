import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from regtrees.coeffs import Poly, derivative, render_coeff
from regtrees.lincomb import LinComb, tensor
from regtrees.trees import (
    EMPTY_FOREST,
    Forest,
    RootedForest,
    Tree,
    graft,
    planted_decomposition,
    tree_product,
    unit,
)


def xi(dim=1):
    return graft("Xi", (0,) * (dim + 1), unit(dim))


def I(child, k=(0, 0)):
    return graft("I", k, child)


# --- random trees (dim 1, one noise, one kernel) ----------------------

leaves = st.sampled_from([unit(1), Tree((1, 0)), Tree((0, 1)), xi()])


def _extend(children):
    return st.builds(
        lambda kids, k, n: Tree(n, [("I", k, c) for c in kids]),
        st.lists(children, min_size=1, max_size=3),
        st.sampled_from([(0, 0), (0, 1)]),
        st.sampled_from([(0, 0), (0, 1), (1, 0)]),
    )


trees = st.recursive(leaves, _extend, max_leaves=6)


def shuffled_copy(t: Tree, rnd) -> Tree:
    edges = [(ty, k, shuffled_copy(c, rnd)) for ty, k, c in t.edges]
    rnd.shuffle(edges)
    return Tree(t.n, edges)


class TestCanonicalForm:
    def test_bare_node_is_the_unit(self):
        assert Tree((0, 0)) == unit(1)
        assert unit(1).is_unit()

    def test_product_is_commutative(self):
        assert tree_product(xi(), I(xi())) == tree_product(I(xi()), xi())

    def test_child_orderings_serialise_identically(self):
        # every ordering of the children of I(I(Xi)^2 Xi) at every level
        inner = [I(xi()), I(xi()), xi()]
        keys = set()
        for perm in itertools.permutations(inner):
            keys.add(Tree((0, 0), [("I", (0, 0), c) for c in perm]).key)
        assert len(keys) == 1

    @given(trees, st.randoms(use_true_random=False))
    def test_shuffling_children_never_changes_the_key(self, t, rnd):
        assert shuffled_copy(t, rnd) == t
        assert hash(shuffled_copy(t, rnd)) == hash(t)


class TestProducts:
    def test_monomials_add(self):
        assert tree_product(Tree((1, 2)), Tree((3, 0))) == Tree((4, 2))

    def test_unit(self):
        t = I(xi())
        assert tree_product(unit(1), t) is t

    def test_square_has_multiplicity_two(self):
        sq = tree_product(I(xi()), I(xi()))
        assert len(sq.edges) == 2 and sq.edges[0] == sq.edges[1]

    @given(trees, trees, trees)
    def test_product_associative_commutative(self, a, b, c):
        assert tree_product(a, b) == tree_product(b, a)
        assert tree_product(tree_product(a, b), c) == tree_product(a, tree_product(b, c))

    def test_forest_product(self):
        f = Forest([I(xi())])
        assert (f * f).trees == (I(xi()), I(xi()))
        assert EMPTY_FOREST * f == f
        sq = tree_product(xi(), xi())
        assert Forest([sq]) * Forest([xi()]) == Forest([xi()]) * Forest([sq])

    def test_star_and_cover(self):
        one = RootedForest(unit(1))
        a = RootedForest(xi())
        assert one.star(a) == a
        assert a.star(a) == RootedForest(tree_product(xi(), xi()))
        left = RootedForest(I(xi())).star(a.cover())
        out = left.star(RootedForest(Tree((1, 0))))
        assert out.main == tree_product(Tree((1, 0)), I(xi()))
        assert out.rest == Forest([xi()])

    def test_planted_decomposition(self):
        assert planted_decomposition(Tree((2, 0))) == ((2, 0), [])
        n, parts = planted_decomposition(tree_product(xi(), I(xi())))
        assert n == (0, 0) and sorted(parts) == sorted([xi(), I(xi())])
        n, parts = planted_decomposition(Tree((0, 2), [("I", (0, 1), xi())] * 2))
        assert n == (0, 2) and parts == [I(xi(), (0, 1))] * 2


class TestLinComb:
    def test_cancellation_leaves_nothing(self):
        t = I(xi())
        x = LinComb.of(t, 2) + LinComb.of(t, -2)
        assert not x and x == LinComb()

    def test_tensor_with_unit(self):
        t = I(xi())
        assert tensor(LinComb.of(t), LinComb.of(unit(1))) == LinComb.of((t, unit(1)))

    def test_symbolic_scaling_distributes(self):
        C1 = Poly.symbol("C1")
        x = LinComb([(xi(), 1), (I(xi()), 1)])
        assert x.scale(C1) == LinComb([(xi(), C1), (I(xi()), C1)])

    @given(st.lists(st.tuples(trees, st.fractions(max_denominator=5)), max_size=5))
    def test_adding_the_negative_gives_zero(self, items):
        x = LinComb(items)
        assert not (x - x)
        assert x + LinComb() == x


class TestCoefficients:
    def test_constant_polynomial_collapses(self):
        c = Poly.symbol("c")
        assert (c - c) == 0 and not isinstance(c - c, Poly)
        assert (c * 2 - c - c + 3) == Fraction(3)

    def test_render(self):
        c = Poly.symbol("c")
        assert render_coeff(3 * c**4 - c**2 * 6) == "3*c^4 - 6*c^2"
        assert render_coeff(Fraction(-1, 2)) == "-1/2"
        assert render_coeff(2) == "2"

    def test_derivative(self):
        c = Poly.symbol("c")
        assert derivative(c**3 + c, "c") == 3 * c**2 + 1
        assert derivative(Fraction(5), "c") == 0

    @given(st.fractions(max_denominator=7), st.fractions(max_denominator=7), st.integers(0, 3))
    def test_ring_laws(self, a, b, e):
        c, C = Poly.symbol("c"), Poly.symbol("C1")
        p = a * c**e + C
        q = b * C - c
        assert p * q == q * p
        assert (p + q) * p == p * p + q * p
        assert p - p == 0


@pytest.mark.parametrize("dim", [0, 1, 3])
def test_unit_dimension(dim):
    assert unit(dim).dim == dim
    assert xi(dim).n_edges() == 1
