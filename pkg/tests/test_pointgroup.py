import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heatsym import liealg as la
from heatsym import pointgroup as pg
from heatsym.exact import RatFunc, ScalarExt
from heatsym.heatexpr import HeatExpr, parse_solution, slab_point

t, x = RatFunc.t(), RatFunc.x()
E = pg.identity()
seeds = st.integers(0, 10 ** 6)


def test_quarter_turn_squared_is_reflection():
    assert pg.compose(pg.K_PRIME, pg.K_PRIME) == pg.J
    assert pg.compose(pg.J, pg.J) == E


def test_identity_is_neutral():
    phi = pg.make(2, 1, 1, 1, Fraction(1, 2), 3, ScalarExt(-1, 2, 1))
    assert pg.compose(E, phi) == phi == pg.compose(phi, E)


def test_galilei_translation_cocycle():
    a, b = Fraction(3, 2), Fraction(-2, 5)
    assert pg.compose(pg.gx(a), pg.px(b)) == pg.make(1, 0, 0, 1, a, b, ScalarExt.exp(-a * b / 2))


def test_inverse_examples():
    assert pg.inverse(pg.J) == pg.J
    assert pg.inverse(pg.pt(Fraction(5, 3))) == pg.pt(Fraction(-5, 3))
    assert pg.inverse(pg.K_PRIME) == pg.make(0, 1, -1, 0)
    assert pg.compose(pg.K_PRIME, pg.make(0, 1, -1, 0)) == E


def test_apply_point_examples():
    assert pg.apply_point(pg.J, (1, 2, 3)) == (1, -2, 3)
    # dilation with e^eps = 2: t -> 4t, x -> 2x, u -> 2^(-1/2) u
    tt, xt, ut = pg.apply_point(pg.dil(2), (1, 1, 1))
    assert (tt, xt) == (4, 2)
    assert ut == ScalarExt(Fraction(1, 2), 2, 0)
    assert pg.apply_point(pg.K_PRIME, (1, 2, 1)) == (-1, 2, ScalarExt(1, 1, 1))


def test_excluded_locus():
    with pytest.raises(pg.ExcludedLocusError):
        pg.apply_point(pg.K_PRIME, (0, 1, 1))


def test_apply_solution_examples():
    kernel = parse_solution("t^(-1/2)*exp(-x^2/(4*t)) {t>0}")
    out = pg.apply_solution(pg.K_PRIME, parse_solution("1"))
    assert out.same_function(kernel)
    assert out.slab == (0, None)
    assert pg.apply_solution(pg.pt(1), parse_solution("x^2+2*t")) == parse_solution("x^2+2*t-2")
    assert pg.apply_solution(pg.J, parse_solution("x")) == parse_solution("-x")


def test_fr_decomposition_examples():
    R = pg.make(1, 0, 0, 1, 1, 2, 3)
    assert pg.fr_decompose(R) == (E, R)
    assert pg.fr_decompose(pg.K_PRIME) == (pg.K_PRIME, E)
    p = pg.make(1, 1, 0, 1, 1, 0)
    F, Rp = pg.fr_decompose(p)
    assert F.lam == (0, 0) and Rp.A == (1, 0, 0, 1)
    assert pg.compose(F, Rp) == p


def test_exp_membership_examples():
    assert pg.is_in_exp_ess(pg.J)
    assert not pg.is_in_exp_ess(pg.I_PRIME)
    assert not pg.is_in_exp_ess(pg.make(-1, 1, 0, -1))
    assert not pg.is_in_exp_ess(pg.make(-2, 0, 0, Fraction(-1, 2)))
    assert pg.is_in_exp_ess(pg.make(-1, 0, 0, -1, 3, 4, 2))


def test_pseudo_discrete_examples():
    v = pg.is_pseudo_discrete(pg.J)
    assert v.verdict == "true" and v.certificate
    v = pg.is_pseudo_discrete(E)
    assert v.verdict == "false" and not pg.is_in_exp_ess(v.witness)
    v = pg.is_pseudo_discrete(pg.K_PRIME)
    assert v.verdict == "false"
    assert pg.is_in_exp_ess(v.witness) is False
    assert not pg.is_in_exp_ess(pg.compose(pg.K_PRIME, v.witness))


def test_jacobian_sign_examples():
    assert pg.jacobian_sign(pg.J, (1, 1, 1)) == -1
    assert pg.jacobian_sign(E, (1, 1, 1)) == 1
    assert pg.jacobian_sign(pg.K_PRIME, (1, 0, 1)) == 1
    assert pg.jacobian_sign(pg.K_PRIME, (-1, 0, 1)) == -1


def test_exp_examples():
    assert pg.exp_ess(la.Q_PLUS, pg.RotParam.quarter(2)) == pg.J
    eps = Fraction(7, 3)
    assert pg.exp_ess(la.E_PX, eps) == pg.make(1, 0, 0, 1, 0, eps)
    assert pg.exp_ess(la.E_D, pg.LogParam(2)) == pg.dil(2)
    assert pg.exp_ess(la.E_D, pg.LogParam(2)).A == (2, 0, 0, Fraction(1, 2))


def test_exp_exact_rejects_transcendental_requests():
    with pytest.raises(pg.ExactModeError):
        pg.exp_ess(la.E_D, Fraction(1))
    with pytest.raises(pg.ExactModeError):
        pg.exp_ess(la.Q_PLUS, Fraction(1))


def test_exp_float_matches_exact():
    X = la.AlgElement((1, 0, 0, 1, 2, 3))
    exact = pg.exp_ess(X, Fraction(2))
    approx = pg.exp_ess(tuple(float(v) for v in X.coeffs), 2.0)
    assert pg.elements_equal(exact.to_float(), approx, tol=1e-9)
    assert exact.sigma == ScalarExt.exp(Fraction(10, 3))
    d = pg.exp_ess(la.E_D, pg.LogParam(3))
    assert pg.elements_equal(d.to_float(), pg.exp_ess((0.0, 1.0, 0, 0, 0, 0), math.log(3)), tol=1e-9)


def test_determining_examples():
    d = pg.determining_data(pg.K_PRIME)
    assert d.T == -1 / t and d.X == x / t
    assert pg.verify_determining(d)
    one = HeatExpr()
    assert pg.verify_determining(pg.DeterminingData(t, x, one))
    assert not pg.verify_determining(pg.DeterminingData(2 * t, x, one))


def test_central_examples():
    assert pg.is_central(pg.make(1, 0, 0, 1, 0, 0, 5))
    assert pg.is_central(pg.I_PRIME)
    assert not pg.is_central(pg.px(1))


def test_json_round_trip():
    phi = pg.make(2, 1, 1, 1, Fraction(1, 2), 3, ScalarExt(-1, 2, 1))
    assert pg.ess_from_json(pg.ess_to_json(phi)) == phi
    data = pg.ess_to_json(pg.K_PRIME)
    assert data["A"] == [["0", "-1"], ["1", "0"]]


def test_rejects_bad_determinant():
    with pytest.raises(ValueError):
        pg.make(1, 1, 1, 1)


# ---------------------------------------------------------------- properties


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_group_axioms(seed):
    rng = random.Random(seed)
    a, b, c = (pg.random_element(rng) for _ in range(3))
    assert pg.compose(pg.compose(a, b), c) == pg.compose(a, pg.compose(b, c))
    assert pg.compose(a, pg.inverse(a)) == E
    assert pg.compose(pg.inverse(a), a) == E


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_composition_matches_point_maps(seed):
    rng = random.Random(seed)
    p, q = pg.random_element(rng), pg.random_element(rng)
    pt = (pg.random_rational(rng), pg.random_rational(rng), pg.random_rational(rng) or 1)
    try:
        inner = pg.apply_point(q, pt)
        want = pg.apply_point(p, inner)
    except pg.ExcludedLocusError:
        return
    assert pg.apply_point(pg.compose(p, q), pt) == want


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_solution_action_preserves_residual_and_composes(seed):
    rng = random.Random(seed)
    p, q = pg.random_element(rng), pg.random_element(rng)
    f = parse_solution(rng.choice(["x^3+6*t*x", "exp(x+t)", "t^(-1/2)*exp(-x^2/(4*t)) {t>0}"]))
    img = pg.apply_solution(q, f)
    assert img.is_solution()
    chained = pg.apply_solution(p, img)
    direct = pg.apply_solution(pg.compose(p, q), f)
    if chained.slab == direct.slab:
        assert chained.same_function(direct)
    # the graph of the chained image is the image of the graph of f under p o q
    back = pg.inverse(pg.compose(p, q))
    tv = slab_point(chained.slab)
    for xv in (Fraction(0), Fraction(1, 2), Fraction(-3)):
        t0, x0, u0 = pg.apply_point(back, (tv, xv, chained.evaluate(tv, xv)))
        assert u0 == f.evaluate(t0, x0)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_word_factorization(seed):
    rng = random.Random(seed)
    p = pg.random_element(rng)
    assert pg.compose_word(pg.elementary_word(p)) == p


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_determining_equations_hold(seed):
    assert pg.verify_determining(pg.determining_data(pg.random_element(random.Random(seed))))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_trace_criterion_is_conjugation_invariant(seed):
    rng = random.Random(seed)
    p, g = pg.random_element(rng), pg.random_element(rng)
    conj = pg.compose(pg.compose(g, p), pg.inverse(g))
    if p.sigma_sign() > 0:
        assert pg.is_in_exp_ess(conj) == pg.is_in_exp_ess(p)
