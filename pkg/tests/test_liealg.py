import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heatsym import liealg as la
from heatsym import pointgroup as pg
from heatsym.liealg import AlgElement, E_D, E_GX, E_I, E_K, E_PT, E_PX, bracket

fr = st.fractions(min_value=-5, max_value=5, max_denominator=5)
alg = st.tuples(*[fr] * 6).map(AlgElement)
seeds = st.integers(0, 10 ** 6)


def test_bracket_examples():
    assert bracket(E_D, E_PT) == -2 * E_PT
    assert bracket(E_GX, E_PX) == Fraction(1, 2) * E_I
    X = AlgElement((1, 2, 3, 4, 5, 6))
    assert bracket(X, X).is_zero()
    assert bracket(E_PT, E_K) == E_D


def test_ad_examples():
    assert all(v == 0 for row in la.ad_matrix(E_I) for v in row)
    M = la.ad_matrix(E_D)
    assert [M[i][i] for i in range(6)] == [-2, 0, 2, 1, -1, 0]
    assert all(M[i][j] == 0 for i in range(6) for j in range(6) if i != j)
    G = la.ad_matrix_group(E_D)
    assert [G[i][i] for i in range(6)] == [2, 0, -2, -1, 1, 0]


def test_pushforward_examples():
    assert la.pushforward(pg.K_PRIME, E_D) == -E_D
    assert la.pushforward(pg.dil(2), E_PT) == 4 * E_PT
    half_turn = pg.exp_ess(la.Q_PLUS, pg.RotParam.quarter(2))
    assert la.pushforward(half_turn, E_PX) == -E_PX
    images = [la.pushforward(pg.K_PRIME, v) for v in (E_PT, E_D, E_K, E_GX, E_PX)]
    assert images == [E_K, -E_D, E_PT, E_PX, -E_GX]


def test_structure_predicates():
    preds = la.structure_predicates()
    assert preds and all(preds.values())


def test_jacobi_example():
    assert (bracket(E_PT, bracket(E_K, E_PX)) + bracket(E_K, bracket(E_PX, E_PT))
            + bracket(E_PX, bracket(E_PT, E_K))).is_zero()


def test_json_round_trip_and_unknown_names():
    X = AlgElement((1, Fraction(-1, 2), 0, 3, 0, 7))
    assert AlgElement.from_json(X.to_json()) == X
    assert X.to_json()["D"] == "-1/2"
    with pytest.raises(ValueError):
        AlgElement.from_json({"Q": 1})


def test_rref_column_order():
    rows, _ = la.rref([(1, 1, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)])
    assert [tuple(r) for r in rows] == [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)]
    assert la.same_span([(1, 1, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)], [(1, 0, 0, 0, 0, 0), (0, 2, 0, 0, 0, 0)])


# ---------------------------------------------------------------- properties


@settings(max_examples=80, deadline=None)
@given(alg, alg, alg)
def test_antisymmetry_and_jacobi(X, Y, Z):
    assert bracket(X, Y) == -bracket(Y, X)
    assert (bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))).is_zero()


@settings(max_examples=60, deadline=None)
@given(alg, alg)
def test_ad_matrix_applies_bracket(X, Y):
    assert AlgElement(la.matvec(la.ad_matrix(X), Y.coeffs)) == bracket(X, Y)


@settings(max_examples=60, deadline=None)
@given(seeds, alg, alg)
def test_pushforward_is_an_automorphism(seed, X, Y):
    phi = pg.random_element(random.Random(seed))
    assert la.pushforward(phi, bracket(X, Y)) == bracket(la.pushforward(phi, X), la.pushforward(phi, Y))


@settings(max_examples=60, deadline=None)
@given(seeds, alg)
def test_chain_matches_closed_form(seed, X):
    rng = random.Random(seed)
    p, q = pg.random_element(rng), pg.random_element(rng)
    assert la.pushforward(p, X) == la.pushforward_closed(p, X)
    assert la.pushforward(pg.compose(p, q), X) == la.pushforward(p, la.pushforward(q, X))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.floats(-2, 2))
def test_adjoint_of_exponential(i, eps):
    X = AlgElement.basis(i)
    g = pg.exp_ess(tuple(float(v) for v in X.coeffs), eps)
    for j in range(6):
        Y = AlgElement.basis(j)
        got = la.pushforward(g, Y).coeffs
        want = la.expm_apply(la.ad_matrix_group(X), Y.coeffs, eps)
        assert max(abs(a - b) for a, b in zip(got, want)) <= 1e-9
