"""
Where generalised KPZ breaks
============================

For generalised KPZ, I(Xi)*Xi has negative degree and carries its own
constant C1.  Extracting it from inside I(I(I(Xi)Xi)Xi) leaves a
renormalisation map that no longer commutes with recentering.
"""

from regtrees import casebook
from regtrees.characters import random_plus_character
from regtrees.expr import parse_tree, render
from regtrees.renorm import M_from_character
from regtrees.rules import builtin

rule = builtin("gkpz")
ell = casebook.gkpz_character(6, rule)
tau = parse_tree(casebook.GKPZ_COUNTEREXAMPLE, rule)

# Every admissible extraction contributes, not only the one at I(Xi)*Xi.
print(render("text", M_from_character(ell)(tau), rule))

# With kernels of polynomials set to zero the defect is C1 times a
# nonzero polynomial.
bar = builtin("gkpzbar")
M = M_from_character(casebook.gkpz_character(6, bar))
g = random_plus_character(bar, 1)
diff = casebook.property_a_difference(M, g, parse_tree(casebook.GKPZ_COUNTEREXAMPLE, bar))
print("M Gamma_g - Gamma_g M:", render("text", diff, bar))

# The planted trees of negative degree: the ones a model must handle by hand.
for t in casebook.negative_planted(rule, 6):
    print(render("text", t, rule), rule.degree(t))
