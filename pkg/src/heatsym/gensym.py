"""Linear generalized symmetries: the algebra generated by G = t*D_x + x/2 and D_x.

An element is a finite sum  sum c_kl G^k D_x^l  kept in normal order (all
G factors left of all D_x factors).  Reordering uses  D_x G = G D_x + 1/2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact import RatFunc, rat, rat_str
from .heatexpr import HeatExpr, SolutionSum


class GenSymOp:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        out = {}
        for (k, l), c in (coeffs or {}).items():
            if k < 0 or l < 0:
                raise ValueError("indices must be nonnegative")
            c = rat(c)
            if c:
                out[(int(k), int(l))] = out.get((int(k), int(l)), 0) + c
        self.coeffs = {key: v for key, v in out.items() if v}

    @classmethod
    def q(cls, k: int, l: int, c=1) -> "GenSymOp":
        return cls({(k, l): c})

    @classmethod
    def one(cls) -> "GenSymOp":
        return cls.q(0, 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return GenSymOp(out)

    def __neg__(self):
        return GenSymOp({key: -c for key, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "GenSymOp":
        k = rat(k)
        return GenSymOp({key: k * c for key, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GenSymOp):
            return product(self, other)
        return self.scale(other)

    def __rmul__(self, k):
        return self.scale(k)

    def __eq__(self, other):
        return isinstance(other, GenSymOp) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def terms(self):
        return sorted(self.coeffs.items())

    def to_json(self) -> dict:
        return {"terms": [{"k": k, "l": l, "c": rat_str(c)} for (k, l), c in self.terms()]}

    @classmethod
    def from_json(cls, data) -> "GenSymOp":
        return cls({(int(t["k"]), int(t["l"])): rat(t["c"]) for t in data.get("terms", [])})

    def __repr__(self):
        if not self.coeffs:
            return "GenSymOp(0)"
        return "GenSymOp(" + " + ".join(f"{rat_str(c)}*Q{k}{l}" for (k, l), c in self.terms()) + ")"


@lru_cache(maxsize=None)
def _reorder(b: int, c: int):
    """D^b G^c in normal order, as a tuple of ((k, l), coefficient)."""
    if b == 0 or c == 0:
        return (((c, b), Fraction(1)),)
    # D^b G^c = D^(b-1) (G^c D + (c/2) G^(c-1))
    out = {}
    for (k, l), v in _reorder(b - 1, c):
        out[(k, l + 1)] = out.get((k, l + 1), 0) + v
    for (k, l), v in _reorder(b - 1, c - 1):
        out[(k, l)] = out.get((k, l), 0) + v * Fraction(c, 2)
    return tuple(sorted((key, v) for key, v in out.items() if v))


def product(P: GenSymOp, Q: GenSymOp) -> GenSymOp:
    out = {}
    for (a, b), cp in P.coeffs.items():
        for (c, d), cq in Q.coeffs.items():
            for (k, l), v in _reorder(b, c):
                key = (a + k, l + d)
                out[key] = out.get(key, 0) + cp * cq * v
    return GenSymOp(out)


def op_commutator(P: GenSymOp, Q: GenSymOp) -> GenSymOp:
    return product(P, Q) - product(Q, P)


def vf_bracket(P: GenSymOp, Q: GenSymOp) -> GenSymOp:
    """Bracket of the evolutionary vector fields (Pu) d_u and (Qu) d_u."""
    return product(Q, P) - product(P, Q)


def commutator_closed(k: int, l: int, k2: int, l2: int) -> GenSymOp:
    """The double binomial sum for the bracket of Q^{kl} and Q^{k2 l2}."""
    if min(k, l, k2, l2) < 0:
        raise ValueError("indices must be nonnegative")
    out = {}
    for i in range(min(k, l2) + 1):
        key = (k + k2 - i, l + l2 - i)
        out[key] = out.get(key, 0) + Fraction(factorial(i), 2 ** i) * comb(k, i) * comb(l2, i)
    for i in range(min(k2, l) + 1):
        key = (k + k2 - i, l + l2 - i)
        out[key] = out.get(key, 0) - Fraction(factorial(i), 2 ** i) * comb(k2, i) * comb(l, i)
    return GenSymOp(out)


# ------------------------------------------------------------------ action on solutions


def _apply_g(e: HeatExpr) -> HeatExpr:
    """G e = t e_x + x e/2 written over the same prefactor."""
    t, x = RatFunc.t(), RatFunc.x()
    A = e.A
    newA = t * (A.diff("x") + A * e.g.diff("x")) + x * A / 2
    return HeatExpr(e.c, newA, e.factors, e.g, e.slab)


def _apply_d(e: HeatExpr) -> HeatExpr:
    return e.diff("x")


def _apply_word(k: int, l: int, f: SolutionSum) -> SolutionSum:
    for _ in range(l):
        f = f.map_terms(_apply_d)
    for _ in range(k):
        f = f.map_terms(_apply_g)
    return f


def apply(P: GenSymOp, e) -> SolutionSum:
    f = SolutionSum.of(e)
    if not f.is_solution():
        raise ValueError("input is not a solution of the heat equation")
    out = SolutionSum((), f.slab)
    for (k, l), c in P.terms():
        out = out + _apply_word(k, l, f).scale(c)
    if not out.is_solution():
        raise ArithmeticError("image failed the residual check")
    return out


# ------------------------------------------------------------------ Lie symmetries


def _vector_fields():
    """(tau, xi, eta/u) for each basis field of the essential algebra."""
    t, x = RatFunc.t(), RatFunc.x()
    zero, one = RatFunc.zero(), RatFunc.one()
    return {
        "Pt": (one, zero, zero),
        "D": (2 * t, x, RatFunc.const(Fraction(-1, 2))),
        "K": (t * t, t * x, -(x * x + 2 * t) / 4),
        "Gx": (zero, t, -x / 2),
        "Px": (zero, one, zero),
        "I": (zero, zero, one),
    }


def characteristic(X, e) -> SolutionSum:
    """eta - tau u_t - xi u_x evaluated at the solution u = e."""
    from .liealg import AlgElement, BASIS_NAMES

    X = AlgElement.of(X)
    f = SolutionSum.of(e)
    fields = _vector_fields()
    out = SolutionSum((), f.slab)
    for name, coef in zip(BASIS_NAMES, X.coeffs):
        if not coef:
            continue
        tau, xi, eta = fields[name]
        term = f.map_terms(lambda u: u.times_ratfunc(eta))
        if not tau.is_zero():
            term = term - f.map_terms(lambda u: u.diff("t").times_ratfunc(tau))
        if not xi.is_zero():
            term = term - f.map_terms(lambda u: u.diff("x").times_ratfunc(xi))
        out = out + term.scale(coef)
    return out


# signs fixed by comparing with characteristic() on solutions
_FROM_LIE = {
    "Pt": GenSymOp.q(0, 2, -1),
    "D": GenSymOp({(1, 1): -2, (0, 0): Fraction(-1, 2)}),
    "K": GenSymOp.q(2, 0, -1),
    "Gx": GenSymOp.q(1, 0, -1),
    "Px": GenSymOp.q(0, 1, -1),
    "I": GenSymOp.q(0, 0, 1),
}


def from_lie(X) -> GenSymOp:
    from .liealg import AlgElement, BASIS_NAMES

    X = AlgElement.of(X)
    out = GenSymOp()
    for name, c in zip(BASIS_NAMES, X.coeffs):
        if c:
            out = out + _FROM_LIE[name].scale(c)
    return out


# ------------------------------------------------------------------ heat polynomials and graded pieces


def heat_polynomial(n: int) -> SolutionSum:
    """h_n = 2^n G^n 1: 1, x, x^2+2t, x^3+6tx, ..."""
    f = SolutionSum.of(HeatExpr.from_ratfunc(RatFunc.one()))
    return _apply_word(n, 0, f).scale(2 ** n)


def dim_lambda(n: int):
    """Dimension and basis of the order-n piece, each element checked on h_0..h_{2n}."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    basis = [GenSymOp.q(k, n - k) for k in range(n + 1)]
    polys = [heat_polynomial(m) for m in range(2 * n + 1)]
    for op in basis:
        for h in polys:
            apply(op, h)  # raises on a nonzero residual
    # independence: images on h_0..h_{2n}, as polynomial coefficient vectors
    rows = []
    for op in basis:
        row = {}
        for m, h in enumerate(polys):
            for term in apply(op, h).terms:
                scale = term.c.r * term.A.den.const_value() ** -1
                for (i, j), v in term.A.num.terms.items():
                    row[(m, i, j)] = row.get((m, i, j), 0) + scale * v
        rows.append(row)
    keys = sorted({k for row in rows for k in row})
    from .liealg import rank
    if rank([tuple(row.get(k, 0) for k in keys) for row in rows]) != n + 1:
        raise ArithmeticError("basis operators are not independent on heat polynomials")
    return n + 1, basis
