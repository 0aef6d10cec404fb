"""Walk through the point-symmetry group of u_t = u_xx.

Run with:  python3 demos/group_action.py
"""

from fractions import Fraction

from heatsym import liealg as la
from heatsym import pointgroup as pg
from heatsym.heatexpr import parse_solution, print_expr

# A quarter turn of the projective line squares to the reflection x -> -x.
kp = pg.K_PRIME
print("K' o K' =", pg.compose(kp, kp))
print("K' o K' is J:", pg.compose(kp, kp) == pg.J)

# Acting on the constant solution produces the heat kernel on t > 0.
one = parse_solution("1")
kernel = pg.apply_solution(kp, one)
print("K' acting on 1:", print_expr(kernel))
print("residual:", kernel.residuals()[0])

# Exact exponentials: a boost combined with translations, and a dilation by e^eps = 3.
X = la.AlgElement((1, 0, 0, 1, 2, 3))
g = pg.exp_ess(X, Fraction(2))
print("exp(2 X) =", g)
print("float exp agrees:", pg.elements_equal(g.to_float(), pg.exp_ess((1.0, 0, 0, 1.0, 2.0, 3.0), 2.0), tol=1e-9))
d3 = pg.exp_ess(la.E_D, pg.LogParam(3))
print("dilation with q = 3:", d3)

# Heat polynomials stay solutions under every group element.
for text in ("x^2+2*t", "x^3+6*t*x"):
    img = pg.apply_solution(pg.compose(d3, g), parse_solution(text))
    print(f"image of {text}: {print_expr(img)}  solution: {img.is_solution()}")

# Which elements sit on a one-parameter subgroup?
for name, elem in (("J", pg.J), ("I'", pg.I_PRIME), ("parabolic -E + N", pg.make(-1, 1, 0, -1))):
    print(f"{name} in exp: {pg.is_in_exp_ess(elem)}")
print("J pseudo-discrete:", pg.is_pseudo_discrete(pg.J).verdict)
