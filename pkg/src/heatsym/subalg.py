"""Subalgebras of the essential algebra: closure, invariants and canonical forms.

Canonicalization follows the Levi split f + r.  The f-projection is first
moved by an SL(2, Q) transformation to one of {0}, <P^t>, <D>, <P^t+K>,
<P^t, D>, f; the radical coefficients are then cleared by R-moves and the
remaining parameters normalized.  Every move is an exact group element and
the product of the moves is returned as the witness, checked by span
comparison before returning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from sympy import integer_nthroot

from .exact import ScalarExt, rat, rat_str
from . import pointgroup as pg
from .liealg import (
    AlgElement,
    BASIS_NAMES,
    DD,
    GX,
    II,
    KK,
    PT,
    PX,
    bracket,
    f_matrix,
    in_span,
    pushforward,
    rank,
    rref,
    same_span,
)


class SubalgebraError(ValueError):
    """Input is not a proper subalgebra given by an independent basis."""


class FullAlgebraError(SubalgebraError):
    """The input spans the whole essential algebra."""


class IrrationalParameterError(ArithmeticError):
    """Canonicalization would need an irrational group parameter."""


F_IDX = (PT, DD, KK)
R_IDX = (GX, PX, II)


def _vec(v):
    return tuple(rat(a) for a in AlgElement.of(v).coeffs)


def _basis(S):
    vecs = [_vec(v) for v in S]
    if not vecs:
        raise SubalgebraError("empty basis")
    if rank(vecs) != len(vecs):
        raise SubalgebraError("basis vectors are linearly dependent")
    return vecs


def closure_check(S) -> bool:
    vecs = _basis(S)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if not in_span(bracket(vecs[i], vecs[j]).coeffs, vecs):
                return False
    return True


@dataclass(frozen=True)
class SubalgebraInvariants:
    n: int
    n_hat: int
    n_check: int
    n_check_prime: int

    def as_tuple(self):
        return (self.n, self.n_hat, self.n_check, self.n_check_prime)


def _project_f(v):
    return tuple(v[i] if i in F_IDX else Fraction(0) for i in range(6))


def invariants(S) -> SubalgebraInvariants:
    vecs = _basis(S)
    n = len(vecs)
    n_hat = rank([_project_f(v) for v in vecs])
    n_check = n - n_hat
    unit_i = tuple(Fraction(int(i == II)) for i in range(6))
    n_check_prime = int(in_span(unit_i, vecs))
    return SubalgebraInvariants(n, n_hat, n_check, n_check_prime)


# ------------------------------------------------------------------ canonical list


def _e(**kw):
    out = [Fraction(0)] * 6
    for name, v in kw.items():
        out[BASIS_NAMES.index(name)] = Fraction(v)
    return tuple(out)


def canonical_basis(label: str, params: dict | None = None):
    """Basis of the canonical representative with the given label."""
    p = params or {}
    d = rat(p.get("delta", 0))
    mu = rat(p.get("mu", 0))
    nu = rat(p.get("nu", 0))
    Pt, D, K, Gx, Px, I = (_e(**{n: 1}) for n in BASIS_NAMES)

    def add(*vs):
        return tuple(sum(c) for c in zip(*vs))

    def sc(k, v):
        return tuple(k * a for a in v)

    table = {
        "s1.1": [add(Pt, Gx)],
        "s1.2": [add(Pt, sc(d, I))],
        "s1.3": [add(D, sc(mu, I))],
        "s1.4": [add(Pt, K, sc(nu, I))],
        "s1.5": [Px],
        "s1.6": [I],
        "s2.1": [Pt, add(D, sc(nu, I))],
        "s2.2": [add(Pt, Gx), I],
        "s2.3": [add(Pt, sc(d, I)), Px],
        "s2.4": [Pt, I],
        "s2.5": [add(D, sc(nu, I)), Px],
        "s2.6": [D, I],
        "s2.7": [add(Pt, K), I],
        "s2.8": [Px, I],
        "s3.1": [Pt, D, K],
        "s3.2": [Pt, add(D, sc(nu, I)), Px],
        "s3.3": [Pt, D, I],
        "s3.4": [add(Pt, Gx), Px, I],
        "s3.5": [Pt, Px, I],
        "s3.6": [D, Px, I],
        "s3.7": [Gx, Px, I],
        "s4.1": [Pt, D, K, I],
        "s4.2": [Pt, D, Px, I],
        "s4.3": [Pt, Gx, Px, I],
        "s4.4": [D, Gx, Px, I],
        "s4.5": [add(Pt, K), Gx, Px, I],
        "s5.1": [Pt, D, Gx, Px, I],
    }
    if label not in table:
        raise KeyError(f"unknown canonical label {label!r}")
    return [AlgElement(v) for v in table[label]]


PARAM_KIND = {"s1.2": "delta", "s2.3": "delta", "s1.3": "mu",
              "s1.4": "nu", "s2.1": "nu", "s2.5": "nu", "s3.2": "nu"}
CANONICAL_LABELS = ("s1.1", "s1.2", "s1.3", "s1.4", "s1.5", "s1.6",
                    "s2.1", "s2.2", "s2.3", "s2.4", "s2.5", "s2.6", "s2.7", "s2.8",
                    "s3.1", "s3.2", "s3.3", "s3.4", "s3.5", "s3.6", "s3.7",
                    "s4.1", "s4.2", "s4.3", "s4.4", "s4.5", "s5.1")


def canonical_entries(nu_samples=(Fraction(0),), mu_samples=(Fraction(0),)):
    """(label, params) pairs covering the list; families sampled as given."""
    out = []
    for label in CANONICAL_LABELS:
        kind = PARAM_KIND.get(label)
        if kind == "delta":
            out.extend((label, {"delta": Fraction(dv)}) for dv in (-1, 0, 1))
        elif kind == "mu":
            out.extend((label, {"mu": m}) for m in mu_samples)
        elif kind == "nu":
            out.extend((label, {"nu": v}) for v in nu_samples)
        else:
            out.append((label, {}))
    return out


# ------------------------------------------------------------------ canonicalization


@dataclass
class CanonicalForm:
    label: str
    params: dict
    witness: pg.EssElement
    steps: list = field(default_factory=list)

    def key(self):
        return (self.label, tuple(sorted((k, rat(v)) for k, v in self.params.items())))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "params": {k: rat_str(rat(v)) for k, v in sorted(self.params.items())},
            "witness": pg.ess_to_json(self.witness),
            "steps": list(self.steps),
        }


class _State:
    def __init__(self, vecs):
        self.vecs = [tuple(v) for v in vecs]
        self.witness = pg.identity()
        self.steps = []

    def move(self, element: pg.EssElement, note: str):
        self.vecs = [pushforward(element, v).coeffs for v in self.vecs]
        self.witness = pg.compose(element, self.witness)
        self.steps.append(note)

    def rows(self):
        rows, pivots = rref(self.vecs, order=range(6))
        self.vecs = list(rows)
        return rows, pivots

    def f_rows(self):
        rows, pivots = self.rows()
        f = [r for r, p in zip(rows, pivots) if p in F_IDX]
        r = [r for r, p in zip(rows, pivots) if p not in F_IDX]
        return f, r


def _rational_sqrt(v: Fraction):
    v = rat(v)
    if v < 0:
        return None
    n, ok1 = integer_nthroot(v.numerator, 2)
    d, ok2 = integer_nthroot(v.denominator, 2)
    return Fraction(n, d) if ok1 and ok2 else None


def _rational_cbrt(v: Fraction):
    v = rat(v)
    sign = -1 if v < 0 else 1
    n, ok1 = integer_nthroot(abs(v.numerator), 3)
    d, ok2 = integer_nthroot(v.denominator, 3)
    return sign * Fraction(n, d) if ok1 and ok2 else None


def _unimodular_with_first_column(v):
    """A rational matrix g with det 1 whose first column is v."""
    v0, v1 = v
    if v0 != 0:
        return (v0, Fraction(0), v1, 1 / v0)
    return (Fraction(0), -1 / v1, v1, Fraction(0))


def _kernel_vector(M):
    """Kernel vector of a singular 2x2 matrix, scaled to a leading 1."""
    a, b, c, d = M
    if a != 0 or b != 0:
        v = (-b, a)
    elif (c, d) == (0, 0):
        return (Fraction(1), Fraction(0))
    else:
        v = (-d, c)
    lead = v[0] if v[0] != 0 else v[1]
    return (Fraction(v[0]) / lead, Fraction(v[1]) / lead)


def _solve_conic(a, b, c):
    """Rational (x, y) with a x^2 + b x y + c y^2 = 1 for a positive definite form."""
    from sympy import symbols
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic

    L = lcm(a.denominator, b.denominator, c.denominator)
    A, B, C = int(a * L), int(b * L), int(c * L)
    x, y, z = symbols("x y z", integer=True)
    sol = diop_ternary_quadratic(A * x ** 2 + B * x * y + C * y ** 2 - L * z ** 2)
    if not sol or sol[0] is None or sol[2] == 0:
        raise IrrationalParameterError("the elliptic normalization has no rational solution")
    X, Y, Z = (int(s) for s in sol)
    return Fraction(X, Z), Fraction(Y, Z)


def _normalize_levi_projection(state: _State):
    """SL(2, Q) move sending the f-projection to a canonical representative."""
    f_rows, _ = state.f_rows()
    n_hat = len(f_rows)
    if n_hat in (0, 3):
        return
    if n_hat == 1:
        M = f_matrix(f_rows[0])
        det = M[0] * M[3] - M[1] * M[2]
        if det == 0:
            v = _kernel_vector(M)
            ginv = _unimodular_with_first_column(v)
            note = "SL2 move: nilpotent projection to P^t"
        elif det < 0:
            r = _rational_sqrt(-det)
            if r is None:
                raise IrrationalParameterError("hyperbolic projection with irrational eigenvalues")
            vp = _kernel_vector((M[0] - r, M[1], M[2], M[3] - r))
            vm = _kernel_vector((M[0] + r, M[1], M[2], M[3] + r))
            dt = vp[0] * vm[1] - vp[1] * vm[0]
            ginv = (vp[0], vm[0] / dt, vp[1], vm[1] / dt)
            note = "SL2 move: hyperbolic projection to D"
        else:
            k = _rational_sqrt(det)
            if k is None:
                raise IrrationalParameterError("elliptic projection with irrational frequency")
            Mp = tuple(m / k for m in M)
            qa, qb, qc = -Mp[2], Mp[0] - Mp[3], Mp[1]
            if qa < 0:
                Mp = tuple(-m for m in Mp)
                qa, qb, qc = -qa, -qb, -qc
            w = _solve_conic(qa, qb, qc)
            w2 = (-(Mp[0] * w[0] + Mp[1] * w[1]), -(Mp[2] * w[0] + Mp[3] * w[1]))
            ginv = (w[0], w2[0], w[1], w2[1])
            note = "SL2 move: elliptic projection to P^t+K"
    else:
        M1, M2 = f_matrix(f_rows[0]), f_matrix(f_rows[1])
        comm = pg._matmul(M1, M2)
        comm2 = pg._matmul(M2, M1)
        N = tuple(a - b for a, b in zip(comm, comm2))
        v = _kernel_vector(N)
        ginv = _unimodular_with_first_column(v)
        note = "SL2 move: Borel projection to <P^t, D>"
    A = pg._matinv(ginv)
    if A != (1, 0, 0, 1):
        state.move(pg.f_part_element(A), note)


def _r_move(state: _State, lam, note):
    lam = tuple(rat(v) for v in lam)
    if lam != (0, 0):
        state.move(pg.r_part_element(lam, ScalarExt(1)), note)


def _radical_rows(rows_r):
    """Split radical rows into (has_I, other rows without the I-only row)."""
    has_i = any(r[GX] == 0 and r[PX] == 0 for r in rows_r)
    others = [r for r in rows_r if (r[GX], r[PX]) != (0, 0)]
    return has_i, others


def canonicalize(S) -> CanonicalForm:
    vecs = _basis(S)
    n = len(vecs)
    if n == 6:
        raise FullAlgebraError("full algebra")
    if not closure_check(vecs):
        raise SubalgebraError("basis is not closed under the bracket")
    inv = invariants(vecs)
    state = _State(vecs)
    _normalize_levi_projection(state)
    f_rows, r_rows = state.f_rows()
    n_hat, n_check = len(f_rows), len(r_rows)
    params = {}

    if n_check == 3:
        label = {0: "s3.7", 1: None, 2: "s5.1", 3: None}[n_hat]
        if n_hat == 1:
            head = f_rows[0]
            label = "s4.3" if head[DD] == 0 and head[KK] == 0 else ("s4.4" if head[PT] == 0 else "s4.5")
        if label is None:
            raise FullAlgebraError("full algebra")
    elif n_hat == 0:
        has_i, others = _radical_rows(r_rows)
        if others:
            g, p = others[0][GX], others[0][PX]
            ginv = (p, Fraction(0), -g, 1 / p) if p != 0 else (Fraction(0), 1 / g, -g, Fraction(0))
            A = pg._matinv(ginv)
            if A != (1, 0, 0, 1):
                state.move(pg.f_part_element(A), "SL2 move: radical vector to P^x")
            _, r_rows = state.f_rows()
            c = next(r for r in r_rows if r[PX] != 0)[II]
            if c:
                state.move(pg.gx(2 * c), f"G^x({rat_str(2 * c)})")
            label = "s2.8" if has_i else "s1.5"
        else:
            label = "s1.6"
    elif n_hat == 1 and f_rows[0][DD] == 0 and f_rows[0][KK] == 0:
        label, params = _case_pt(state)
    elif n_hat == 1 and f_rows[0][PT] == 0:
        label, params = _case_d(state)
    elif n_hat == 1:
        head = f_rows[0]
        _r_move(state, (-head[PX], head[GX]), "R move clearing the radical part of P^t+K")
        f_rows, r_rows = state.f_rows()
        has_i, _ = _radical_rows(r_rows)
        if has_i:
            label = "s2.7"
        else:
            label, params = "s1.4", {"nu": f_rows[0][II]}
    elif n_hat == 2:
        q2 = f_rows[1]
        _r_move(state, (-q2[GX], q2[PX]), "R move clearing the radical part of D")
        f_rows, r_rows = state.f_rows()
        has_i, others = _radical_rows(r_rows)
        if n_check == 0:
            label, params = "s2.1", {"nu": f_rows[1][II]}
        elif n_check == 1 and has_i:
            label = "s3.3"
        elif n_check == 1:
            label, params = "s3.2", {"nu": f_rows[1][II]}
        else:
            label = "s4.2"
    else:
        q2 = f_rows[1]
        _r_move(state, (-q2[GX], q2[PX]), "R move onto the Levi factor")
        _, r_rows = state.f_rows()
        label = "s4.1" if r_rows else "s3.1"

    target = canonical_basis(label, params)
    if not same_span(state.rows()[0], [t.coeffs for t in target]):
        raise ArithmeticError(f"canonicalization did not reach {label}")
    # independent check of the accumulated witness
    pushed = [pushforward(state.witness, v).coeffs for v in vecs]
    if not same_span(pushed, [t.coeffs for t in target]):
        raise ArithmeticError("witness verification failed")
    if invariants([t.coeffs for t in target]) != inv:
        raise ArithmeticError("invariants changed under canonicalization")
    params = {k: rat(v) for k, v in params.items()}
    return CanonicalForm(label, params, state.witness, state.steps)


def _case_pt(state: _State):
    f_rows, r_rows = state.f_rows()
    head = f_rows[0]
    if head[PX]:
        state.move(pg.gx(-head[PX]), f"G^x({rat_str(-head[PX])})")
        f_rows, r_rows = state.f_rows()
        head = f_rows[0]
    b1 = head[GX]
    has_i, others = _radical_rows(r_rows)
    n_check = len(r_rows)
    if b1 != 0:
        if b1 < 0:
            state.move(pg.J, "J")
            b1 = -b1
        q = _rational_cbrt(b1)
        if q is None:
            raise IrrationalParameterError("scaling G^x to 1 needs an irrational cube root")
        if q != 1:
            state.move(pg.dil(q), f"D(q={rat_str(q)})")
        f_rows, r_rows = state.f_rows()
        c1 = f_rows[0][II]
        if c1:
            state.move(pg.px(-2 * c1), f"P^x({rat_str(-2 * c1)})")
        return {0: "s1.1", 1: "s2.2", 2: "s3.4"}[n_check], {}
    # b1 = 0
    if n_check == 2:
        return "s3.5", {}
    if n_check == 1 and has_i:
        return "s2.4", {}
    if n_check == 1:
        r = others[0]
        c2 = r[II] / r[PX]
        if c2:
            state.move(pg.gx(2 * c2), f"G^x({rat_str(2 * c2)})")
        f_rows, _ = state.f_rows()
    c1 = f_rows[0][II]
    delta = 0
    if c1 != 0:
        q = _rational_sqrt(abs(c1))
        if q is None:
            raise IrrationalParameterError("scaling I to 1 needs an irrational square root")
        if q != 1:
            state.move(pg.dil(q), f"D(q={rat_str(q)})")
        delta = 1 if c1 > 0 else -1
    return ("s1.2" if n_check == 0 else "s2.3"), {"delta": Fraction(delta)}


def _case_d(state: _State):
    f_rows, _ = state.f_rows()
    head = f_rows[0]
    _r_move(state, (-head[GX], head[PX]), "R move clearing the radical part of D")
    f_rows, r_rows = state.f_rows()
    has_i, others = _radical_rows(r_rows)
    c1 = f_rows[0][II]
    if not r_rows:
        if c1 < 0:
            state.move(pg.K_PRIME, "K'")
            c1 = -c1
        return "s1.3", {"mu": c1}
    if others and others[0][GX] != 0:
        state.move(pg.K_PRIME, "K'")
        f_rows, r_rows = state.f_rows()
        c1 = f_rows[0][II]
    if len(r_rows) == 2:
        return "s3.6", {}
    if has_i:
        return "s2.6", {}
    return "s2.5", {"nu": c1}


def equivalent(S1, S2) -> bool:
    return canonicalize(S1).key() == canonicalize(S2).key()


# ------------------------------------------------------------------ one-dimensional subalgebras of the full algebra


@dataclass(frozen=True)
class EssentialCase:
    label: str
    params: dict


@dataclass(frozen=True)
class CenterCase:
    """<c I + Z(f)> is conjugate to <I> by the shift Z(-f/c)."""
    shift: object
    witness: object


@dataclass(frozen=True)
class LinCase:
    pass


def classify_1d_full(Qhat, f):
    from .heatexpr import SolutionSum

    Qhat = AlgElement.of(Qhat)
    f = SolutionSum.of(f) if f is not None else SolutionSum()
    if Qhat.is_zero() and f.is_zero():
        raise SubalgebraError("zero vector field")
    if Qhat.is_zero():
        return LinCase()
    if all(Qhat[i] == 0 for i in range(5)):
        c = Qhat[II]
        shift = f.scale(Fraction(-1) / c)
        return CenterCase(shift, pg.FullElement(pg.identity(), shift))
    cf = canonicalize([Qhat])
    return EssentialCase(cf.label, cf.params)
