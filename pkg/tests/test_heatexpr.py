import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heatsym.exact import RatFunc
from heatsym.heatexpr import (DomainError, ExprSyntaxError, HeatExpr, OutsideClassError, SolutionSum,
                              burgers_residual, heat_residual, parse_expr, parse_solution, print_expr)

t, x = RatFunc.t(), RatFunc.x()
KERNEL = "t^(-1/2)*exp(-x^2/(4*t)) {t>0}"


def test_parse_polynomial():
    e = parse_expr("x^2 + 2*t")
    assert isinstance(e, HeatExpr)
    assert not e.factors and e.g.is_zero()
    assert e.A == x * x + 2 * t


def test_parse_kernel():
    e = parse_expr(KERNEL)
    assert len(e.factors) == 1
    f = e.factors[0]
    assert (f.base.a, f.base.b, f.s) == (1, 0, Fraction(-1, 2))
    assert e.g == -x * x / (4 * t)
    assert e.slab == (0, None)


def test_outside_class_rejected():
    with pytest.raises(OutsideClassError):
        parse_expr("exp(exp(x))")


def test_syntax_error_has_position():
    with pytest.raises(ExprSyntaxError):
        parse_expr("x^2 +* t")


def test_derivative_examples():
    assert parse_expr("x^2+2*t").diff("t") == parse_expr("2")
    kernel = parse_expr(KERNEL)
    expected = parse_expr("(-x/(2*t))*t^(-1/2)*exp(-x^2/(4*t)) {t>0}")
    assert kernel.diff("x") == expected
    assert parse_expr("exp(x+t)").diff("x") == parse_expr("exp(x+t)")


def test_kernel_derivative_numerically():
    kernel, d = parse_expr(KERNEL), parse_expr(KERNEL).diff("x")
    for tv, xv in ((0.5, 0.3), (1.0, -1.2), (2.5, 2.0)):
        h = 1e-6
        fd = (kernel.evaluate_float(tv, xv + h) - kernel.evaluate_float(tv, xv - h)) / (2 * h)
        assert math.isclose(d.evaluate_float(tv, xv), fd, rel_tol=1e-6)


def test_heat_residual_examples():
    assert heat_residual(parse_expr("x^2+2*t")).is_zero()
    assert heat_residual(parse_expr(KERNEL)).is_zero()
    assert heat_residual(parse_expr("x^2")) == -2 / (x * x)


def test_burgers_residual_examples():
    assert burgers_residual(RatFunc.const(-2)).is_zero()
    assert burgers_residual(x / t).is_zero()
    assert burgers_residual(x) == x


def test_print_parse_round_trip_examples():
    for text in ("x^2+2*t", KERNEL, "exp(2*x+4*t)", "x*exp(x+t) + (x^2+2*t)", "(t+1)^(1/2)*exp(x) {t>-1}"):
        s = parse_solution(text)
        assert parse_solution(print_expr(s)) == s


def test_sum_of_different_shapes():
    s = parse_solution("x + exp(x+t)")
    assert len(s.terms) == 2
    assert s.is_solution()


def test_exact_evaluation():
    k = parse_expr(KERNEL)
    v = k.evaluate(4, 0)
    assert float(v) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        k.evaluate(-1, 0)


# ---------------------------------------------------------------- properties

coef = st.integers(-3, 3)


@st.composite
def expressions(draw):
    a, b = draw(coef), draw(coef)
    p = draw(st.integers(0, 3))
    poly = "+".join(f"({draw(coef)})*x^{i}*t^{p - i}" for i in range(p + 1)) or "1"
    return f"({poly})*exp(({a})*x+({b})*t)"


@settings(max_examples=50, deadline=None)
@given(expressions())
def test_print_parse_round_trip(text):
    s = parse_solution(text)
    assert parse_solution(print_expr(s)) == s


@settings(max_examples=50, deadline=None)
@given(expressions(), st.sampled_from(["t", "x"]))
def test_derivative_matches_finite_differences(text, var):
    s = parse_solution(text)
    if s.is_zero():
        return
    e = s.single()
    d = e.diff(var)
    tv, xv, h = 0.7, 0.4, 1e-6
    if var == "x":
        fd = (e.evaluate_float(tv, xv + h) - e.evaluate_float(tv, xv - h)) / (2 * h)
    else:
        fd = (e.evaluate_float(tv + h, xv) - e.evaluate_float(tv - h, xv)) / (2 * h)
    assert math.isclose(d.evaluate_float(tv, xv), fd, rel_tol=1e-5, abs_tol=1e-5)


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3))
def test_exponential_solutions(a):
    # exp(a x + a^2 t) solves the heat equation, with any other time rate it does not
    assert parse_expr(f"exp(({a})*x+({a * a})*t)").is_solution()
    assert not parse_expr(f"exp(({a})*x+({a * a + 1})*t)").is_solution()


def test_solution_sum_scaling_and_cancel():
    s = parse_solution("x^2+2*t")
    assert (s - s).is_zero()
    assert s.scale(3) == parse_solution("3*x^2+6*t")
    assert isinstance(SolutionSum.of(parse_expr("x")), SolutionSum)
