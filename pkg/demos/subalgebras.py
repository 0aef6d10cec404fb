"""Canonical forms of subalgebras under the adjoint action.

Run with:  python3 demos/subalgebras.py
"""

import random
from fractions import Fraction

from heatsym import liealg as la
from heatsym import pointgroup as pg
from heatsym import subalg as sa
from heatsym.liealg import E_D, E_GX, E_I, E_PT, E_PX

for S in ([4 * E_PT + Fraction(1, 2) * E_GX], [E_D + E_GX], [E_I], [E_PT - E_GX]):
    cf = sa.canonicalize(S)
    print(", ".join(str(v) for v in S), "->", cf.label, cf.params, "via", cf.steps)

# Scramble a two-dimensional family member by a random group element and recover it.
rng = random.Random(7)
base = sa.canonical_basis("s2.5", {"nu": Fraction(-3, 2)})
phi = pg.random_element(rng)
scrambled = [la.pushforward(phi, v) for v in base]
print("scrambled basis:")
for v in scrambled:
    print("   ", v)
cf = sa.canonicalize(scrambled)
print("recovered:", cf.label, cf.params)

print("invariants of the Heisenberg ideal:", sa.invariants([E_GX, E_PX, E_I]).as_tuple())
print("<Pt+I> ~ <Pt-I>:", sa.equivalent([E_PT + E_I], [E_PT - E_I]))
