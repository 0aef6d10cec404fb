"""Generalized symmetries and the Hopf-Cole link to Burgers.

Run with:  python3 demos/weyl_and_burgers.py
"""

from heatsym import burgers as bg
from heatsym import gensym as gs
from heatsym import liealg as la
from heatsym import pointgroup as pg
from heatsym.heatexpr import parse_solution, print_expr

Q = gs.GenSymOp.q
print("[Q10, Q01] =", gs.vf_bracket(Q(1, 0), Q(0, 1)))
print("[Q20, Q02] =", gs.commutator_closed(2, 0, 0, 2))
for n in range(5):
    print(f"h_{n} =", print_expr(gs.heat_polynomial(n)))
print("orders 0..4 have dimensions", [gs.dim_lambda(n)[0] for n in range(5)])
print("Lie field D as an operator:", gs.from_lie(la.E_D))

u = parse_solution("x^2+2*t")
v = bg.hopf_cole(u)
print("Hopf-Cole of x^2+2t:", v)
phi = pg.K_PRIME
lhs = bg.hopf_cole(pg.apply_solution(phi, u))
rhs = bg.apply_solution_b(bg.rho_project(phi), v)
print("transform then linearize:", lhs)
print("linearize then transform:", rhs)
print("agree:", lhs == rhs)
print("central sign flip maps to the Burgers identity:", bg.rho_project(pg.I_PRIME) == bg.IDENTITY_B)
