import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heatsym import liealg as la
from heatsym import pointgroup as pg
from heatsym import subalg as sa
from heatsym.heatexpr import parse_solution
from heatsym.liealg import AlgElement, E_D, E_GX, E_I, E_K, E_PT, E_PX

seeds = st.integers(0, 10 ** 6)


def test_closure_examples():
    assert not sa.closure_check([E_PT, E_K])
    assert sa.closure_check([E_GX, E_PX, E_I])
    assert sa.closure_check([AlgElement((1, 2, 3, 4, 5, 6))])


def test_invariant_examples():
    assert sa.invariants([E_GX, E_PX, E_I]).as_tuple() == (3, 0, 3, 1)
    assert sa.invariants([E_PT + E_GX]).as_tuple() == (1, 1, 0, 0)
    assert sa.invariants([AlgElement.basis(i) for i in range(6)]).as_tuple() == (6, 3, 3, 1)


def test_canonicalize_scaled_galilei_direction():
    cf = sa.canonicalize([4 * E_PT + Fraction(1, 2) * E_GX])
    assert cf.label == "s1.1" and cf.params == {}
    # the witness is the dilation q = 1/2, i.e. the inverse of the q = 2 move
    assert cf.witness == pg.dil(Fraction(1, 2))
    assert la.same_span([la.pushforward(cf.witness, 4 * E_PT + Fraction(1, 2) * E_GX).coeffs],
                        [(E_PT + E_GX).coeffs])


def test_canonicalize_dilation_with_boost():
    cf = sa.canonicalize([E_D + E_GX])
    assert cf.key() == ("s1.3", (("mu", Fraction(0)),))
    assert cf.witness == pg.gx(-1)


def test_canonicalize_center():
    cf = sa.canonicalize([E_I])
    assert cf.label == "s1.6"
    assert cf.witness == pg.identity()


def test_canonicalize_errors():
    with pytest.raises(sa.FullAlgebraError):
        sa.canonicalize([AlgElement.basis(i) for i in range(6)])
    with pytest.raises(sa.SubalgebraError):
        sa.canonicalize([E_PT, E_K])


def test_equivalence_examples():
    assert sa.equivalent([E_PT - E_GX], [E_PT + E_GX])
    assert not sa.equivalent([E_PT + E_I], [E_PT - E_I])
    S = [E_D + Fraction(1, 3) * E_I, E_PX]
    phi = pg.random_element(random.Random(5))
    assert sa.equivalent(S, [la.pushforward(phi, v) for v in S])


def test_canonical_list_has_27_entries():
    assert len(sa.CANONICAL_LABELS) == 27
    for label, params in sa.canonical_entries():
        basis = sa.canonical_basis(label, params)
        assert sa.closure_check(basis)
        assert sa.canonicalize(basis).key() == (label, tuple(sorted(params.items())))


def test_classify_1d_full_examples():
    case = sa.classify_1d_full(E_PX, parse_solution("x^2+2*t"))
    assert isinstance(case, sa.EssentialCase) and case.label == "s1.5"
    f = parse_solution("x^2+2*t")
    case = sa.classify_1d_full(E_I, f)
    assert isinstance(case, sa.CenterCase)
    assert case.shift == -f
    assert isinstance(sa.classify_1d_full(AlgElement.zero(), parse_solution("1")), sa.LinCase)
    with pytest.raises(sa.SubalgebraError):
        sa.classify_1d_full(AlgElement.zero(), None)


def test_canonical_form_json():
    data = sa.canonicalize([E_D + E_GX]).to_json()
    assert data["label"] == "s1.3"
    assert data["params"] == {"mu": "0"}
    assert set(data) == {"label", "params", "witness", "steps"}


# ---------------------------------------------------------------- properties

entries = sa.canonical_entries(nu_samples=(Fraction(0), Fraction(-7, 2)), mu_samples=(Fraction(0), Fraction(2, 3)))


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(entries), seeds)
def test_conjugation_round_trip(entry, seed):
    label, params = entry
    rng = random.Random(seed)
    phi = pg.random_element(rng)
    S = [la.pushforward(phi, v) for v in sa.canonical_basis(label, params)]
    cf = sa.canonicalize(S)
    assert cf.key() == (label, tuple(sorted(params.items())))
    target = [v.coeffs for v in sa.canonical_basis(cf.label, cf.params)]
    assert la.same_span([la.pushforward(cf.witness, v).coeffs for v in S], target)
    assert sa.invariants(S) == sa.invariants(sa.canonical_basis(label, params))
