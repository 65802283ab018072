"""
Wick powers of a Gaussian noise
===============================

With no kernels at all, the trees are just products Xi^n of noise leaves.
Renormalising them with the Wick character turns Xi^n into the
generalised Hermite polynomial H_n(x, c).
"""

from regtrees import casebook
from regtrees.coeffs import render_coeff
from regtrees.coproducts import delta_minus_r
from regtrees.expr import render
from regtrees.renorm import M_from_character
from regtrees.rules import builtin

rule = builtin("hermite")

# Cutting at the root of Xi^4 picks any subset of the four leaves,
# so the coefficients are binomial.
print(render("structured", delta_minus_r(casebook.xi_power(4), rule), rule))

# The character sends Xi^{2k} to (-1)^k (2k-1)!! c^{2k}
ell = casebook.wick_character(3)
for k in (1, 2, 3):
    print(f"l(Xi^{2 * k}) =", render_coeff(ell.tree_value(casebook.xi_power(2 * k))))

# Pairing it against the extraction coproduct gives the renormalised power.
M = M_from_character(ell)
for n in range(6):
    image = casebook.hermite_image(M(casebook.xi_power(n)))
    print(f"n={n}:", casebook.render_in_x(image), "  H_n:", casebook.render_in_x(casebook.hermite_polynomial(n)))

# The same map is the exponential of the infinitesimal map R with
# R(Xi^2) = c^2, summed until it stops.
report = casebook.wick_check(8)
print("exp(-R) Xi^8 =", casebook.render_in_x(report.exp_image), "| agrees:", report.ok)
