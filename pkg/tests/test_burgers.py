import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heatsym import burgers as bg
from heatsym import pointgroup as pg
from heatsym.exact import RatFunc, ScalarExt
from heatsym.heatexpr import burgers_residual, parse_solution

t, x = RatFunc.t(), RatFunc.x()
B = bg.BurgersElement
seeds = st.integers(0, 10 ** 6)
ROT = B((0, -1, 1, 0), (0, 0))


def test_hopf_cole_examples():
    assert bg.hopf_cole(parse_solution("exp(x+t)")) == RatFunc.const(-2)
    assert bg.hopf_cole(parse_solution("x^2+2*t")) == -4 * x / (x * x + 2 * t)
    assert bg.hopf_cole(parse_solution("t^(-1/2)*exp(-x^2/(4*t)) {t>0}")) == x / t


def test_hopf_cole_rejects_non_solutions():
    with pytest.raises(ValueError):
        bg.hopf_cole(parse_solution("x^2"))


def test_rho_examples():
    assert bg.rho_project(pg.make(1, 0, 0, 1, 0, 0, 7)) == bg.IDENTITY_B
    assert bg.rho_project(pg.K_PRIME) == ROT
    assert bg.rho_project(pg.I_PRIME) == bg.IDENTITY_B


def test_point_action_examples():
    l1, l0 = Fraction(3, 2), Fraction(-1, 3)
    tt, xt, vt = bg.apply_point_b(B((1, 0, 0, 1), (l1, l0)), (2, 1, 5))
    assert vt == 5 + l1
    assert bg.apply_point_b(bg.IDENTITY_B, (2, 3, 4)) == (2, 3, 4)
    assert bg.apply_point_b(ROT, (1, 1, 0)) == (-1, 1, -1)


def test_solution_action_examples():
    v = bg.hopf_cole(parse_solution("x^2+2*t"))
    assert bg.apply_solution_b(bg.IDENTITY_B, v) == v
    assert bg.apply_solution_b(ROT, RatFunc.zero()) == x / t
    l1 = Fraction(5, 2)
    assert bg.apply_solution_b(B((1, 0, 0, 1), (l1, 0)), RatFunc.const(-2)) == RatFunc.const(-2 + l1)


def test_exp_examples():
    assert bg.is_in_exp_b(B((1, 0, 0, 1), (3, 4)))
    assert bg.is_in_exp_b(B((-1, 0, 0, -1), (0, 0)))
    assert not bg.is_in_exp_b(B((-2, 0, 0, Fraction(-1, 2)), (0, 0)))


def test_reflection_analogue_is_in_exp():
    refl = B((-1, 0, 0, -1), (0, 0))
    tt, xt, _ = bg.apply_point_b(refl, (2, 3, 1))
    assert (tt, xt) == (2, -3)
    assert bg.is_in_exp_b(refl)


def test_connectedness_facts():
    report = bg.connectedness_report(samples=50)
    assert report["identity_only_trivial_action"]
    assert all(report.values())


def test_algebra_map_drops_center():
    assert bg.rho_prime((1, 2, 3, 4, 5, 6)) == (1, 2, 3, 4, 5)
    assert bg.bracket_b((0, 0, 0, 1, 0), (0, 0, 0, 0, 1)) == (0, 0, 0, 0, 0)


def test_json_round_trip():
    p = B((2, 1, 1, 1), (Fraction(1, 2), 3))
    assert B.from_json(p.to_json()) == p
    assert "sigma" not in p.to_json()


# ---------------------------------------------------------------- properties

heat_sols = ["1", "x", "x^2+2*t", "x^3+6*t*x", "exp(2*x+4*t)", "t^(-1/2)*exp(-x^2/(4*t)) {t>0}"]


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(heat_sols[1:]))
def test_hopf_cole_intertwines(seed, text):
    phi = pg.random_element(random.Random(seed))
    u = parse_solution(text)
    lhs = bg.hopf_cole(pg.apply_solution(phi, u))
    rhs = bg.apply_solution_b(bg.rho_project(phi), bg.hopf_cole(u))
    assert lhs == rhs
    assert burgers_residual(lhs).is_zero()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_rho_is_a_homomorphism(seed):
    rng = random.Random(seed)
    p, q = pg.random_element(rng), pg.random_element(rng)
    assert bg.rho_project(pg.compose(p, q)) == bg.compose_b(bg.rho_project(p), bg.rho_project(q))
    assert bg.compose_b(bg.rho_project(p), bg.inverse_b(bg.rho_project(p))) == bg.IDENTITY_B


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_kernel_is_center(seed):
    rng = random.Random(seed)
    sigma = ScalarExt(pg.random_rational(rng) or 1, rng.choice([1, 2]), pg.random_rational(rng))
    central = pg.r_part_element((0, 0), sigma)
    assert bg.rho_project(central) == bg.IDENTITY_B
    p = pg.random_element(rng)
    assert (bg.rho_project(p) == bg.IDENTITY_B) == pg.is_central(p)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_exp_membership_matches_heat_group(seed):
    p = pg.random_element(random.Random(seed), positive_sigma=True)
    assert bg.is_in_exp_b(bg.rho_project(p)) == pg.is_in_exp_ess(p)
