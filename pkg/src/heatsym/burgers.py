"""The Burgers equation v_t + v v_x = v_xx through the Hopf-Cole map v = -2 u_x/u.

A point symmetry is a pair (A, lam) acting by

    t~ = (alpha t + beta)/(gamma t + delta)
    x~ = (x + lam1 t + lam0)/(gamma t + delta)
    v~ = (gamma t + delta) v - gamma x + lam1 delta - lam0 gamma

which is the heat-equation law with sigma dropped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import RatFunc, rat, rat_str
from .heatexpr import HeatExpr, SolutionSum, burgers_residual
from . import pointgroup as pg
from .liealg import AlgElement, bracket as heat_bracket


@dataclass(frozen=True)
class BurgersElement:
    A: tuple
    lam: tuple

    def __post_init__(self):
        if any(isinstance(v, float) for v in self.A + self.lam):
            A = tuple(float(v) for v in self.A)
            lam = tuple(float(v) for v in self.lam)
            if abs(A[0] * A[3] - A[1] * A[2] - 1) > 1e-12:
                raise ValueError("det A must equal 1 within 1e-12")
        else:
            A = tuple(rat(v) for v in self.A)
            lam = tuple(rat(v) for v in self.lam)
            if A[0] * A[3] - A[1] * A[2] != 1:
                raise ValueError("det A must equal 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "lam", lam)

    @property
    def exact(self) -> bool:
        return not isinstance(self.A[0], float)

    def to_json(self) -> dict:
        fmt = rat_str if self.exact else float
        a, b, c, d = self.A
        return {"A": [[fmt(a), fmt(b)], [fmt(c), fmt(d)]], "lambda": [fmt(v) for v in self.lam]}

    @classmethod
    def from_json(cls, data) -> "BurgersElement":
        (a, b), (c, d) = data["A"]
        l1, l0 = data.get("lambda", [0, 0])
        return cls((a, b, c, d), (l1, l0))


IDENTITY_B = BurgersElement((1, 0, 0, 1), (0, 0))


def hopf_cole(u) -> RatFunc:
    """v = -2 u_x/u for a single-term solution; the t-only factors drop out."""
    if isinstance(u, SolutionSum):
        u = u.single()
    if not isinstance(u, HeatExpr):
        u = SolutionSum.of(u).single()
    if u.is_zero():
        raise ValueError("Hopf-Cole needs a nonzero solution")
    if not u.is_solution():
        raise ValueError("input is not a solution of the heat equation")
    v = (u.A.diff("x") / u.A + u.g.diff("x")) * (-2)
    if not burgers_residual(v).is_zero():
        raise ArithmeticError("Hopf-Cole image failed the Burgers residual check")
    return v


def rho_project(phi) -> BurgersElement:
    phi = phi.ess if isinstance(phi, pg.FullElement) else phi
    return BurgersElement(phi.A, phi.lam)


def compose_b(p: BurgersElement, q: BurgersElement) -> BurgersElement:
    m = pg._row_times(p.lam, q.A)
    return BurgersElement(pg._matmul(p.A, q.A), (m[0] + q.lam[0], m[1] + q.lam[1]))


def inverse_b(p: BurgersElement) -> BurgersElement:
    Ainv = pg._matinv(p.A)
    m = pg._row_times(p.lam, Ainv)
    return BurgersElement(Ainv, (-m[0], -m[1]))


def apply_point_b(p: BurgersElement, point):
    t, x, v = point
    if p.exact:
        t, x, v = rat(t), rat(x), rat(v)
    a, b, c, d = p.A
    l1, l0 = p.lam
    den = c * t + d
    if den == 0:
        raise pg.ExcludedLocusError("point lies on gamma*t + delta = 0")
    return (a * t + b) / den, (x + l1 * t + l0) / den, den * v - c * x + l1 * d - l0 * c


def apply_solution_b(p: BurgersElement, v) -> RatFunc:
    """v~(t, x) = [v(T, X - lam1 T - lam0) + lam1 - gamma x]/(alpha - gamma t),
    with T = (delta t - beta)/(alpha - gamma t) and X = x/(alpha - gamma t)."""
    v = v if isinstance(v, RatFunc) else RatFunc.const(v)
    if not burgers_residual(v).is_zero():
        raise ValueError("input is not a solution of the Burgers equation")
    a, b, c, d = p.A
    l1, l0 = p.lam
    t, x = RatFunc.t(), RatFunc.x()
    C = t * (-c) + a
    T = (t * d - b) / C
    X = x / C - T * l1 - l0
    out = (v.subst(T, X) + l1 - x * c) / C
    if not burgers_residual(out).is_zero():
        raise ArithmeticError("transformed Burgers solution failed the residual check")
    return out


def is_in_exp_b(p: BurgersElement) -> bool:
    """tr A > -2 or A = -E."""
    a, b, c, d = p.A
    if p.exact:
        return a + d > -2 or p.A == (-1, 0, 0, -1)
    if max(abs(a + 1), abs(b), abs(c), abs(d + 1)) <= 1e-9:
        return True
    return a + d > -2


# ------------------------------------------------------------------ algebra


BURGERS_NAMES = ("Pt", "D", "K", "Gx", "Px")


def rho_prime(X) -> tuple:
    """Drop the I-coefficient: the algebra map induced by Hopf-Cole."""
    return tuple(AlgElement.of(X).coeffs[:5])


def bracket_b(X, Y) -> tuple:
    """Bracket on 5-vectors, computed through the heat algebra and projected."""
    X5, Y5 = tuple(X), tuple(Y)
    return rho_prime(heat_bracket(AlgElement(X5 + (0,)), AlgElement(Y5 + (0,))))


# ------------------------------------------------------------------ connectedness


def _acts_trivially(p: BurgersElement) -> bool:
    probes = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 3, 5)]
    for pt in probes:
        try:
            if apply_point_b(p, pt) != tuple(Fraction(v) for v in pt):
                return False
        except pg.ExcludedLocusError:
            return False
    return True


def _trivial_action_solutions():
    """Solve symbolically for all parameters acting as the identity on points."""
    import sympy as sp

    a, b, c, d, l1, l0, t, x, v = sp.symbols("alpha beta gamma delta lam1 lam0 t x v")
    den = c * t + d
    eqs = [sp.numer(sp.together((a * t + b) / den - t)),
           sp.numer(sp.together((x + l1 * t + l0) / den - x)),
           sp.expand(den * v - c * x + l1 * d - l0 * c - v)]
    coeff_eqs = []
    for e in eqs:
        coeff_eqs.extend(sp.Poly(sp.expand(e), t, x, v).coeffs())
    coeff_eqs.append(a * d - b * c - 1)
    return sp.solve(coeff_eqs, [a, b, c, d, l1, l0], dict=True)


def connectedness_report(samples: int = 200, seed: int = 0) -> dict:
    rng = random.Random(seed)
    report = {}
    # every element factors into elementary pieces, each on a one-parameter subgroup
    word_ok = True
    recompose_ok = True
    for _ in range(samples):
        phi = pg.random_element(rng)
        word = pg.elementary_word(phi)
        for name, param in word:
            elem = pg.word_element(name, param)
            if not is_in_exp_b(rho_project(elem)):
                word_ok = False
        recompose_ok &= rho_project(pg.compose_word(word)) == rho_project(phi)
    report["word_factors_in_exp"] = word_ok
    report["word_recomposes"] = recompose_ok
    # kernel of rho is the center
    kernel_ok = True
    for _ in range(samples):
        phi = pg.random_element(rng)
        kernel_ok &= (rho_project(phi) == IDENTITY_B) == pg.is_central(phi)
    report["kernel_is_center"] = kernel_ok
    report["identity_only_trivial_action"] = _unique_identity(_trivial_action_solutions())
    report["sampled_trivial_actions_are_identity"] = all(
        _acts_trivially(e) == (e == IDENTITY_B) for e in (rho_project(pg.random_element(rng)) for _ in range(samples)))
    report["minus_identity_in_exp"] = is_in_exp_b(BurgersElement((-1, 0, 0, -1), (0, 0)))
    report["central_sign_flip_projects_to_identity"] = rho_project(pg.I_PRIME) == IDENTITY_B
    return report


def _unique_identity(sols) -> bool:
    if len(sols) != 1:
        return False
    values = {str(k): v for k, v in sols[0].items()}
    expected = {"alpha": 1, "beta": 0, "gamma": 0, "delta": 1, "lam1": 0, "lam0": 0}
    return all(values.get(k) == v for k, v in expected.items())
