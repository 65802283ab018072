"""
Renormalising KPZ trees
=======================

KPZ has three divergent trees.  Each gets a free constant K1, K2, K3,
and the renormalisation map only ever adds constants: M t - t is a
polynomial for every tree, and M commutes with recentering.
"""

from regtrees import casebook
from regtrees.characters import random_plus_character
from regtrees.coeffs import render_coeff
from regtrees.expr import parse_tree, render
from regtrees.renorm import M_from_character, M_from_R, R_from_character
from regtrees.rules import builtin

rule = builtin("kpz")
ell = casebook.kpz_character(rule)

for text in casebook.KPZ_SUPPORT:
    print(text, "->", render_coeff(ell.tree_value(parse_tree(text, rule))))

# One tree, two routes: pairing with the full extraction coproduct, and
# rebuilding M recursively from the root map R alone.
tau = parse_tree("I1(I1(Xi)*I1(Xi))*I1(I1(Xi)*I1(Xi))", rule)
M = M_from_character(ell)
M_rec = M_from_R(R_from_character(ell), rule)[0]
print(render("text", M(tau), rule))
print("routes agree:", M(tau) == M_rec(tau))

# Recentering with a seeded character g, before or after renormalising.
# Kernels of polynomials are dropped here, as in the KPZ argument.
bar = builtin("kpzbar")
ell_bar = casebook.kpz_character(bar)
M_bar = M_from_character(ell_bar)
g = random_plus_character(bar, 4)
t = parse_tree("I1(I1(Xi)*I1(Xi))*I1(Xi)", bar)
print("M Gamma_g t - Gamma_g M t =", render("text", casebook.property_a_difference(M_bar, g, t), bar) or "0")
