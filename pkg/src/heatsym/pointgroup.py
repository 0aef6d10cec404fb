"""Point symmetries of the heat equation u_t = u_xx.

An essential element is stored as ``(A, lam, sigma)`` with ``A`` in SL(2) and
acts on points by::

    t~ = (alpha*t + beta)/(gamma*t + delta)
    x~ = (x + lam1*t + lam0)/(gamma*t + delta)
    u~ = sigma*sqrt|gamma*t + delta|
         * exp(gamma*(x + lam1*t + lam0)**2/(4*(gamma*t + delta)) - lam1*x/2 - lam1**2*t/4) * u

Every element factors as ``F(A) o R(lam, sigma)`` where ``F(A) = (A, 0, 1)``
and ``R(lam, sigma) = (E, lam, sigma)``.  Moving R across F gives the
parameter-level group law::

    R(lam, s) o F(B) = F(B) o R(lam*B, s*exp((lam1*lam0 - m1*m0)/4)),  m = lam*B
    R(lam, s) o R(mu, r) = R(lam + mu, s*r*exp(-lam1*mu0/2))

(lam is a row vector).  Both identities are re-derived symbolically in the
test suite by composing the point maps.

Exact elements carry Fractions in ``A`` and ``lam`` and a ScalarExt sigma;
float elements carry Python floats throughout.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import RatFunc, ScalarExt, ScalarSum, rat, rat_power_half, rat_str
from .heatexpr import (
    AffineT,
    DomainError,
    Factor,
    HeatExpr,
    SolutionSum,
    slab_contains,
    slab_around,
)


class ExcludedLocusError(DomainError):
    """The point lies on the locus gamma*t + delta = 0."""


class ExactModeError(ValueError):
    """Exact evaluation was requested for a case that needs transcendental numbers."""


# ------------------------------------------------------------------ elements


def _is_exact_sigma(sigma) -> bool:
    return isinstance(sigma, ScalarExt)


@dataclass(frozen=True)
class EssElement:
    A: tuple
    lam: tuple
    sigma: object

    def __post_init__(self):
        exact = _is_exact_sigma(self.sigma)
        if exact:
            A = tuple(rat(v) for v in self.A)
            lam = tuple(rat(v) for v in self.lam)
            if self.sigma.is_zero():
                raise ValueError("sigma must be nonzero")
            if A[0] * A[3] - A[1] * A[2] != 1:
                raise ValueError("det A must equal 1")
        else:
            A = tuple(float(v) for v in self.A)
            lam = tuple(float(v) for v in self.lam)
            object.__setattr__(self, "sigma", float(self.sigma))
            if self.sigma == 0:
                raise ValueError("sigma must be nonzero")
            if abs(A[0] * A[3] - A[1] * A[2] - 1) > 1e-12:
                raise ValueError("det A must equal 1 within 1e-12")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "lam", lam)

    @property
    def exact(self) -> bool:
        return _is_exact_sigma(self.sigma)

    @property
    def alpha(self):
        return self.A[0]

    @property
    def beta(self):
        return self.A[1]

    @property
    def gamma(self):
        return self.A[2]

    @property
    def delta(self):
        return self.A[3]

    def trace(self):
        return self.A[0] + self.A[3]

    def sigma_sign(self) -> int:
        if self.exact:
            return self.sigma.sign()
        return 1 if self.sigma > 0 else -1

    def to_float(self) -> "EssElement":
        if not self.exact:
            return self
        return EssElement(tuple(float(v) for v in self.A), tuple(float(v) for v in self.lam),
                          float(self.sigma))

    def __repr__(self):
        fmt = rat_str if self.exact else repr
        a = ", ".join(fmt(v) for v in self.A)
        lam = ", ".join(fmt(v) for v in self.lam)
        return f"EssElement(A=({a}), lam=({lam}), sigma={self.sigma!r})"


@dataclass(frozen=True)
class FullElement:
    ess: EssElement
    shift: SolutionSum = field(default_factory=SolutionSum)

    @classmethod
    def of(cls, value) -> "FullElement":
        if isinstance(value, FullElement):
            return value
        return cls(value, SolutionSum())


# ------------------------------------------------------------------ helpers


def _expfac(q, exact: bool):
    return ScalarExt.exp(q) if exact else math.exp(q)


def _one(exact: bool):
    return ScalarExt(1) if exact else 1.0


def _num(v, exact: bool):
    return rat(v) if exact else float(v)


def _matmul(A, B):
    a, b, c, d = A
    e, f, g, h = B
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _matinv(A):
    a, b, c, d = A
    return (d, -b, -c, a)


def _row_times(lam, A):
    l1, l0 = lam
    a, b, c, d = A
    return (l1 * a + l0 * c, l1 * b + l0 * d)


def identity(exact: bool = True) -> EssElement:
    z, o = _num(0, exact), _num(1, exact)
    return EssElement((o, z, z, o), (z, z), _one(exact))


def make(alpha, beta, gamma, delta, lam1=0, lam0=0, sigma=1) -> EssElement:
    """Exact element from rational parameters; sigma may be a ScalarExt."""
    return EssElement((alpha, beta, gamma, delta), (lam1, lam0), ScalarExt.coerce(sigma))


def f_part_element(A, exact: bool = True) -> EssElement:
    return EssElement(tuple(A), (_num(0, exact), _num(0, exact)), _one(exact))


def r_part_element(lam, sigma) -> EssElement:
    exact = _is_exact_sigma(sigma)
    o, z = _num(1, exact), _num(0, exact)
    return EssElement((o, z, z, o), tuple(lam), sigma)


# ------------------------------------------------------------------ group law


def _compose_ess(p: EssElement, q: EssElement) -> EssElement:
    exact = p.exact
    if exact != q.exact:
        raise TypeError("cannot compose exact and float elements")
    A = _matmul(p.A, q.A)
    l1, l0 = p.lam
    m1, m0 = _row_times(p.lam, q.A)
    sigma = p.sigma * q.sigma * _expfac((l1 * l0 - m1 * m0) / 4 - m1 * q.lam[1] / 2, exact)
    lam = (m1 + q.lam[0], m0 + q.lam[1])
    return EssElement(A, lam, sigma)


def _inverse_ess(p: EssElement) -> EssElement:
    exact = p.exact
    l1, l0 = p.lam
    sigma_inv = p.sigma.inverse() if exact else 1.0 / p.sigma
    r_inv = r_part_element((-l1, -l0), sigma_inv * _expfac(-l1 * l0 / 2, exact))
    return _compose_ess(r_inv, f_part_element(_matinv(p.A), exact))


def compose(p, q):
    """p o q: apply q first.  Accepts EssElement or FullElement."""
    if isinstance(p, EssElement) and isinstance(q, EssElement):
        return _compose_ess(p, q)
    p, q = FullElement.of(p), FullElement.of(q)
    ess = _compose_ess(p.ess, q.ess)
    shift = q.shift
    if not p.shift.is_zero():
        shift = shift + apply_solution(_inverse_ess(q.ess), p.shift)
    return FullElement(ess, shift)


def inverse(p):
    if isinstance(p, EssElement):
        return _inverse_ess(p)
    ess_inv = _inverse_ess(p.ess)
    shift = SolutionSum() if p.shift.is_zero() else -apply_solution(p.ess, p.shift)
    return FullElement(ess_inv, shift)


def power(p: EssElement, n: int) -> EssElement:
    if n < 0:
        return power(inverse(p), -n)
    out = identity(p.exact)
    for _ in range(n):
        out = _compose_ess(out, p)
    return out


def elements_equal(p, q, tol: float | None = None) -> bool:
    if isinstance(p, FullElement) or isinstance(q, FullElement):
        p, q = FullElement.of(p), FullElement.of(q)
        return elements_equal(p.ess, q.ess, tol) and p.shift.same_function(q.shift)
    if p.exact and q.exact and tol is None:
        return p == q
    p, q = p.to_float(), q.to_float()
    tol = 1e-9 if tol is None else tol
    vals = list(zip(p.A + p.lam, q.A + q.lam)) + [(p.sigma, q.sigma)]
    return all(abs(a - b) <= tol * max(1.0, abs(a), abs(b)) for a, b in vals)


# ------------------------------------------------------------------ named elements


def pt(eps) -> EssElement:
    """P^t(eps): t -> t + eps."""
    exact = not isinstance(eps, float)
    e, o, z = _num(eps, exact), _num(1, exact), _num(0, exact)
    return f_part_element((o, e, z, o), exact)


def kk(eps) -> EssElement:
    """K(eps): t -> t/(1 - eps*t), x -> x/(1 - eps*t)."""
    exact = not isinstance(eps, float)
    e, o, z = _num(eps, exact), _num(1, exact), _num(0, exact)
    return f_part_element((o, z, -e, o), exact)


def dil(q) -> EssElement:
    """D(eps) with q = e^eps > 0: t -> q^2 t, x -> q x, u -> q^(-1/2) u."""
    exact = not isinstance(q, float)
    q = _num(q, exact)
    if q <= 0:
        raise ValueError("dilation parameter q = e^eps must be positive")
    z = _num(0, exact)
    return f_part_element((q, z, z, 1 / q), exact)


def gx(eps) -> EssElement:
    """G^x(eps): x -> x + eps*t, u -> exp(-(eps^2 t + 2 eps x)/4) u."""
    exact = not isinstance(eps, float)
    return r_part_element((_num(eps, exact), _num(0, exact)), _one(exact))


def px(eps) -> EssElement:
    """P^x(eps): x -> x + eps."""
    exact = not isinstance(eps, float)
    return r_part_element((_num(0, exact), _num(eps, exact)), _one(exact))


def iota(eps) -> EssElement:
    """I(eps): u -> e^eps u."""
    exact = not isinstance(eps, float)
    z = _num(0, exact)
    return r_part_element((z, z), _expfac(_num(eps, exact), exact))


def qplus(c, s) -> EssElement:
    """Q+(eps) given the point (cos eps, sin eps); exact when rational."""
    exact = not (isinstance(c, float) or isinstance(s, float))
    c, s = _num(c, exact), _num(s, exact)
    if exact and c * c + s * s != 1:
        raise ValueError("(c, s) must lie on the unit circle")
    return f_part_element((c, s, -s, c), exact)


def qplus_angle(eps: float) -> EssElement:
    return qplus(math.cos(eps), math.sin(eps))


def quarter_turn(k: int):
    """(cos, sin) of k*pi/2 as exact rationals."""
    return [(1, 0), (0, 1), (-1, 0), (0, -1)][k % 4]


J = make(-1, 0, 0, -1)
K_PRIME = make(0, -1, 1, 0)
I_PRIME = make(1, 0, 0, 1, 0, 0, -1)


# ------------------------------------------------------------------ action on points


def _gauge_exponent(p: EssElement, t, x):
    a, b, c, d = p.A
    l1, l0 = p.lam
    den = c * t + d
    xs = x + l1 * t + l0
    return c * xs * xs / (4 * den) - l1 * x / 2 - l1 * l1 * t / 4


def apply_point(phi, point):
    """Image (t~, x~, u~) of a point.

    Exact elements return rationals for t~, x~ and a ScalarExt for u~ when
    u + h(t, x) is a single monomial; otherwise u~ is returned as a
    ScalarSum certificate.
    """
    phi = FullElement.of(phi)
    p = phi.ess
    t, x, u = point
    exact = p.exact
    if exact:
        t, x = rat(t), rat(x)
        u = ScalarExt.coerce(u) if not isinstance(u, ScalarSum) else u
    else:
        t, x, u = float(t), float(x), float(u)
    a, b, c, d = p.A
    l1, l0 = p.lam
    den = c * t + d
    if den == 0:
        raise ExcludedLocusError("point lies on gamma*t + delta = 0")
    tt = (a * t + b) / den
    xt = (x + l1 * t + l0) / den
    expo = _gauge_exponent(p, t, x)
    if exact:
        pref = p.sigma * ScalarExt.sqrt(den) * ScalarExt.exp(expo)
        total = ScalarSum([u]) if not isinstance(u, ScalarSum) else u
        if not phi.shift.is_zero():
            total = total + phi.shift.evaluate(t, x)
        value = ScalarSum([pref]) * total
        mono = value.as_monomial()
        return tt, xt, (mono if mono is not None else value)
    total = u + (phi.shift.evaluate_float(t, x) if not phi.shift.is_zero() else 0.0)
    return tt, xt, p.sigma * math.sqrt(abs(den)) * math.exp(expo) * total


def jacobian_sign(p, point) -> int:
    """Sign of det d(t~, x~, u~)/d(t, x, u), equal to sgn(sigma) * sgn(gamma*t + delta)."""
    p = p.ess if isinstance(p, FullElement) else p
    t = point[0]
    t = rat(t) if p.exact else float(t)
    den = p.gamma * t + p.delta
    if den == 0:
        raise ExcludedLocusError("point lies on gamma*t + delta = 0")
    return p.sigma_sign() * (1 if den > 0 else -1)


# ------------------------------------------------------------------ action on solutions


def _image_slab(A, slab):
    """Pick the image component of slab under t -> (at+b)/(ct+d)."""
    a, b, c, d = A
    lo, hi = slab
    pieces = []
    if c == 0:
        pieces.append((lo, hi))
    else:
        pole = -d / c
        if slab_contains(slab, pole):
            pieces = [(lo, pole), (pole, hi)]
        else:
            pieces = [(lo, hi)]

    def image(piece):
        l, h = piece
        if c == 0:
            m = lambda s: (a * s + b) / d
            return (None if l is None else m(l), None if h is None else m(h))
        pole = -d / c
        m = lambda s: (a * s + b) / (c * s + d)
        inf_image = a / c
        new_lo = inf_image if l is None else (None if l == pole else m(l))
        new_hi = inf_image if h is None else (None if h == pole else m(h))
        return (new_lo, new_hi)

    images = [image(pc) for pc in pieces]
    for t0 in (Fraction(1), Fraction(-1)):
        for im in images:
            if slab_contains(im, t0):
                return im
    return images[0]


def _apply_r_term(p: EssElement, e: HeatExpr) -> HeatExpr:
    l1, l0 = p.lam
    t, x = RatFunc.t(), RatFunc.x()
    x_sub = x - t * l1 - l0
    A = e.A.subst(t, x_sub)
    g = e.g.subst(t, x_sub) + x * (-l1 / 2) + t * (l1 * l1 / 4)
    c = e.c * p.sigma * ScalarExt.exp(l1 * l0 / 2)
    return HeatExpr(c, A, e.factors, g, e.slab)


def _apply_f_term(A, e: HeatExpr) -> HeatExpr:
    a, b, c, d = A
    if (a, b, c, d) == (1, 0, 0, 1):
        return e
    new_slab = _image_slab(A, e.slab)
    probe = _probe(new_slab)
    t, x = RatFunc.t(), RatFunc.x()
    C = t * (-c) + a  # alpha - gamma t
    T_star = (t * d - b) / C
    X_star = x / C
    newA = e.A.subst(T_star, X_star)
    newg = e.g.subst(T_star, X_star) + (x * x * c) / (C * 4)
    sign_c = 1 if (a - c * probe) > 0 else -1
    base_c = AffineT(-c, a) if c != 0 else AffineT(0, a)
    factors = [Factor(base_c, Fraction(-1, 2), sign_c)]
    for f in e.factors:
        fa, fb = f.base.a, f.base.b
        base_n = AffineT(fa * d - fb * c, fb * a - fa * b)
        factors.append(Factor(base_n, f.s, f.sign * sign_c))
        factors.append(Factor(base_c, -f.s, sign_c))
    return HeatExpr(e.c, newA, factors, newg, new_slab)


def _probe(slab):
    from .heatexpr import slab_point
    return slab_point(slab)


def _apply_ess_sum(p: EssElement, f: SolutionSum) -> SolutionSum:
    if not p.exact:
        raise ExactModeError("symbolic action needs an exact element")
    if f.is_zero():
        return SolutionSum((), _image_slab(p.A, f.slab))
    terms = [_apply_f_term(p.A, _apply_r_term(p, e)) for e in f.terms]
    return SolutionSum(terms)


def apply_solution(phi, f) -> SolutionSum:
    """Transformed counterpart of the solution f under phi.

    The result is checked to have exactly vanishing heat residual.
    """
    phi = FullElement.of(phi)
    f = SolutionSum.of(f)
    if not f.is_solution():
        raise ValueError("input is not a solution of the heat equation")
    src = f if phi.shift.is_zero() else f + phi.shift
    out = _apply_ess_sum(phi.ess, src)
    if not out.is_solution():
        raise ArithmeticError("transformed expression failed the residual check")
    return out


# ------------------------------------------------------------------ structure


def fr_decompose(p: EssElement):
    """(F_part, R_part) with p = F_part o R_part."""
    return f_part_element(p.A, p.exact), r_part_element(p.lam, p.sigma)


def is_central(p: EssElement) -> bool:
    one, zero = (1, 0)
    return p.A == (one, zero, zero, one) and p.lam == (zero, zero)


def is_in_exp_ess(p: EssElement) -> bool:
    """Membership in the image of the exponential map.

    True iff sigma > 0 and (tr A > -2 or A = -E).
    """
    if p.sigma_sign() <= 0:
        return False
    if p.exact:
        return p.trace() > -2 or p.A == (-1, 0, 0, -1)
    a, b, c, d = p.A
    if max(abs(a + 1), abs(b), abs(c), abs(d + 1)) <= 1e-9:
        return True
    return a + d > -2


@dataclass(frozen=True)
class ConjecturalVerdict:
    value: bool
    conjecture_based: bool = True


def is_in_exp_full_conjectural(phi) -> ConjecturalVerdict:
    """Exp-membership for elements with a shift, resting on the conjecture
    that only the essential part matters.  Not a proven criterion."""
    phi = FullElement.of(phi)
    return ConjecturalVerdict(is_in_exp_ess(phi.ess), True)


@dataclass(frozen=True)
class PseudoDiscreteVerdict:
    verdict: str  # "true", "false" or "unknown"
    certificate: str | None = None
    witness: EssElement | None = None
    samples_checked: int = 0


def _random_sl2(rng: random.Random, size: int = 3):
    A = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
    for _ in range(rng.randint(1, 3)):
        kind = rng.randrange(3)
        v = Fraction(rng.randint(-size, size), rng.randint(1, size))
        if kind == 0:
            A = _matmul(A, (1, v, 0, 1))
        elif kind == 1:
            A = _matmul(A, (1, 0, v, 1))
        elif v != 0:
            A = _matmul(A, (abs(v), 0, 0, 1 / abs(v)))
    return tuple(Fraction(a) for a in A)


def random_rational(rng: random.Random, size: int = 3) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_element(rng: random.Random, size: int = 3, positive_sigma: bool = False) -> EssElement:
    A = _random_sl2(rng, size)
    if rng.random() < 0.25:
        A = tuple(-a for a in A)
    lam = (random_rational(rng, size), random_rational(rng, size))
    r = Fraction(rng.randint(1, size), rng.randint(1, size))
    if not positive_sigma and rng.random() < 0.5:
        r = -r
    sigma = ScalarExt(r, rng.choice([1, 1, 2, 3]), random_rational(rng, size))
    return EssElement(A, lam, sigma)


def random_non_exp(rng: random.Random, size: int = 3) -> EssElement:
    """Random element of the identity component outside the exp image."""
    g = _random_sl2(rng, size)
    if rng.random() < 0.5:
        q = Fraction(rng.randint(2, size + 2), rng.randint(1, 2)) if size else Fraction(2)
        if q == 1:
            q = Fraction(2)
        core = (-q, 0, 0, -1 / q)
    else:
        s = random_rational(rng, size) or Fraction(1)
        core = (-1, s, 0, -1)
    A = _matmul(_matmul(g, core), _matinv(g))
    lam = (random_rational(rng, size), random_rational(rng, size))
    sigma = ScalarExt(Fraction(rng.randint(1, size), rng.randint(1, size)), 1, random_rational(rng, size))
    return EssElement(tuple(Fraction(a) for a in A), lam, sigma)


def is_pseudo_discrete(p: EssElement, samples: int = 1000, seed: int = 0) -> PseudoDiscreteVerdict:
    """Semi-decision for g(G_id minus exp) subset exp.

    True with a certificate when sigma > 0 and the F-component is -E;
    False with a witness Psi (outside exp, Psi in G_id) such that p o Psi is
    outside exp; Unknown after ``samples`` random trials found none.
    """
    if not p.exact:
        raise ExactModeError("pseudo-discreteness is decided on exact elements")
    if p.sigma_sign() > 0 and p.A == (-1, 0, 0, -1):
        return PseudoDiscreteVerdict("true", certificate="F-component equals -E and sigma > 0")
    # deterministic first candidates, then seeded random search
    candidates = [make(-2, 0, 0, Fraction(-1, 2)), make(-1, 1, 0, -1), make(-1, -1, 0, -1)]
    rng = random.Random(seed)
    checked = 0
    for cand in candidates:
        checked += 1
        if not is_in_exp_ess(compose(p, cand)):
            return PseudoDiscreteVerdict("false", witness=cand, samples_checked=checked)
    for _ in range(samples):
        cand = random_non_exp(rng)
        checked += 1
        if not is_in_exp_ess(compose(p, cand)):
            return PseudoDiscreteVerdict("false", witness=cand, samples_checked=checked)
    return PseudoDiscreteVerdict("unknown", samples_checked=checked)


# ------------------------------------------------------------------ exponential map


@dataclass(frozen=True)
class LogParam:
    """eps = ln(q), used for exact dilations."""
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", rat(self.q))
        if self.q <= 0:
            raise ValueError("q must be positive")


@dataclass(frozen=True)
class RotParam:
    """eps with (cos eps, sin eps) = (c, s), a rational point of the unit circle."""
    c: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))
        object.__setattr__(self, "s", rat(self.s))
        if self.c ** 2 + self.s ** 2 != 1:
            raise ValueError("(c, s) must lie on the unit circle")

    @classmethod
    def quarter(cls, k: int) -> "RotParam":
        return cls(*quarter_turn(k))

    def angle(self) -> float:
        return math.atan2(self.s, self.c)


def _split(X):
    """Matrix of the f-part and (a, b, c) radical coefficients of X."""
    c6 = tuple(X)
    p_t, d, k, g_x, p_x, i = c6
    M = (d, p_t, -k, -d)
    return M, (g_x, p_x), i


def _poly_eval(coeffs, eps):
    return sum(c * eps ** n for n, c in enumerate(coeffs))


def _exp_nilpotent(M, v, cI, eps) -> EssElement:
    """Closed form for M^2 = 0 and rational eps."""
    one = Fraction(1)
    B = (one + eps * M[0], eps * M[1], eps * M[2], one + eps * M[3])
    # lam(s) = v*s + (v M) s^2/2, as polynomial coefficient lists
    vM = _row_times(v, M)
    lam1 = [Fraction(0), v[0], vM[0] / 2]
    lam0 = [Fraction(0), v[1], vM[1] / 2]
    # (lam M)(s) = (v M) s  since M^2 = 0
    lm1 = [Fraction(0), vM[0]]
    lm0 = [Fraction(0), vM[1]]

    def pmul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    def padd(*ps):
        n = max(len(p) for p in ps)
        return [sum(p[i] if i < len(p) else 0 for p in ps) for i in range(n)]

    integrand = padd([cI], [-v[1] / 2 * c for c in lam1],
                     [-c / 4 for c in padd(pmul(lm1, lam0), pmul(lam1, lm0))])
    integral = [Fraction(0)] + [c / (n + 1) for n, c in enumerate(integrand)]
    lam = (_poly_eval(lam1, eps), _poly_eval(lam0, eps))
    return EssElement(B, lam, ScalarExt.exp(_poly_eval(integral, eps)))


def _exp_dilation(v, cI, q: Fraction) -> EssElement:
    """exp(eps (D + a G^x + b P^x + c I)) with q = e^eps.

    lam = (a(q - 1), b(1 - 1/q)), ln sigma = c eps - a b (q - 1 - eps)/2.
    """
    a, b = v
    power = cI + a * b / 2  # sigma = q^power * exp(-a b (q - 1)/2)
    if (2 * power).denominator != 1:
        raise ExactModeError("sigma would need a non-half-integer power of q")
    sigma = rat_power_half(q, int(2 * power)) * ScalarExt.exp(-a * b * (q - 1) / 2)
    return EssElement((q, Fraction(0), Fraction(0), 1 / q), (a * (q - 1), b * (1 - 1 / q)), sigma)


def _flow_rhs(M, v, cI):
    def rhs(_s, y):
        b11, b12, b21, b22, l1, l0, _ls = y
        dB = (b11 * M[0] + b12 * M[2], b11 * M[1] + b12 * M[3],
              b21 * M[0] + b22 * M[2], b21 * M[1] + b22 * M[3])
        lm1 = l1 * M[0] + l0 * M[2]
        lm0 = l1 * M[1] + l0 * M[3]
        dls = cI - l1 * v[1] / 2 - (lm1 * l0 + l1 * lm0) / 4
        return [*dB, lm1 + v[0], lm0 + v[1], dls]
    return rhs


def exp_float(X, eps: float, tol: float = 1e-10) -> EssElement:
    """exp(eps*X) by integrating the parameter flow
    B' = B M, lam' = lam M + v, (ln sigma)' = c - lam1 b/2 - ((lam M)_1 lam0 + lam1 (lam M)_0)/4."""
    from scipy.integrate import solve_ivp

    M, v, cI = _split([float(c) for c in X])
    y0 = [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]
    if eps == 0:
        return identity(False)
    sol = solve_ivp(_flow_rhs(M, v, cI), (0.0, float(eps)), y0, method="DOP853",
                    rtol=tol * 1e-2, atol=tol * 1e-3)
    if not sol.success:
        raise ArithmeticError(sol.message)
    y = sol.y[:, -1]
    A = tuple(float(c) for c in y[:4])
    # project back onto det = 1 to absorb integration drift
    det = A[0] * A[3] - A[1] * A[2]
    r = 1.0 / math.sqrt(det)
    A = tuple(c * r for c in A)
    return EssElement(A, (float(y[4]), float(y[5])), math.exp(float(y[6])))


def exp_ess(X, eps) -> EssElement:
    """exp(eps*X) for X given by its six coefficients (P^t, D, K, G^x, P^x, I).

    eps may be a Fraction/int (exact, nilpotent f-part), a LogParam (exact,
    f-part equal to D), a RotParam (exact, X = Q+ = P^t + K), or a float.
    """
    coeffs = tuple(X)
    if isinstance(eps, float):
        return exp_float(coeffs, eps)
    coeffs = tuple(rat(c) for c in coeffs)
    M, v, cI = _split(coeffs)
    if isinstance(eps, LogParam):
        if M != (1, 0, 0, -1):
            raise ExactModeError("a log parameter needs the f-part to be exactly D")
        return _exp_dilation(v, cI, eps.q)
    if isinstance(eps, RotParam):
        if coeffs != (1, 0, 1, 0, 0, 0):
            raise ExactModeError("exact rotations are supported for pure Q+ only")
        return qplus(eps.c, eps.s)
    eps = rat(eps)
    det = M[0] * M[3] - M[1] * M[2]
    if det != 0:
        raise ExactModeError("exact mode with a rational parameter needs a nilpotent f-part")
    return _exp_nilpotent(M, v, cI, eps)


# ------------------------------------------------------------------ determining equations


@dataclass(frozen=True)
class DeterminingData:
    T: RatFunc
    X: RatFunc
    U1: HeatExpr


def determining_data(p: EssElement) -> DeterminingData:
    a, b, c, d = p.A
    l1, l0 = p.lam
    t, x = RatFunc.t(), RatFunc.x()
    den = t * c + d
    T = (t * a + b) / den
    xs = x + t * l1 + l0
    X = xs / den
    g = (xs * xs * c) / (den * 4) - x * (l1 / 2) - t * (l1 * l1 / 4)
    roots = [-d / c] if c != 0 else []
    slab = (None, None)
    for t0 in (Fraction(1), Fraction(-1)):
        if t0 not in roots:
            slab = slab_around(roots, t0)
            break
    # |gamma t + delta|^(1/2), oriented to be positive on the slab
    sign = 1 if c * t0 + d > 0 else -1
    U1 = HeatExpr(p.sigma, RatFunc.one(), [Factor(AffineT(c, d), Fraction(1, 2), sign)], g, slab)
    return DeterminingData(T, X, U1)


def verify_determining(data: DeterminingData) -> bool:
    """X_x^2 = T_t, U1_x/U1 = -X_t/(2 X_x), and 1/U1 solves the heat equation."""
    T, X, U1 = data.T, data.X, data.U1
    if T.depends_on_x():
        return False
    Xx = X.diff("x")
    Tt = T.diff("t")
    if Tt.is_zero() or Xx.is_zero() or U1.is_zero():
        return False
    if not (Xx * Xx - Tt).is_zero():
        return False
    log_dx = U1.A.diff("x") / U1.A + U1.g.diff("x")
    if not (log_dx + X.diff("t") / (Xx * 2)).is_zero():
        return False
    return U1.inverse().heat_residual().is_zero()


# ------------------------------------------------------------------ words


def elementary_word(p: EssElement):
    """Factor p as a composition of elementary transformations.

    Returns a list of (name, parameter) pairs with p equal to the
    composition word[0] o word[1] o ... .  Names: 'Kp' (K'), 'K', 'J',
    'D' (parameter q = e^eps), 'Pt', 'Gx', 'Px', 'center' (an R-element with
    lam = 0, parameter sigma).
    """
    exact = p.exact
    word = []
    a, b, c, d = p.A
    A = p.A
    if a == 0:
        word.append(("Kp", None))
        A = _matmul(_matinv(K_PRIME.A if exact else tuple(float(v) for v in K_PRIME.A)), A)
        a, b, c, d = A
    # A = [[1,0],[c/a,1]] diag(a, 1/a) [[1, b/a],[0,1]]
    word.append(("K", -c / a))
    if a < 0:
        word.append(("J", None))
    word.append(("D", abs(a)))
    word.append(("Pt", b / a))
    l1, l0 = p.lam
    word.append(("Gx", l1))
    word.append(("Px", l0))
    word.append(("center", p.sigma * _expfac(l1 * l0 / 2, exact)))
    return word


def word_element(name, param, exact: bool = True) -> EssElement:
    if name == "Kp":
        return K_PRIME if exact else K_PRIME.to_float()
    if name == "J":
        return J if exact else J.to_float()
    if name == "K":
        return kk(param)
    if name == "D":
        return dil(param)
    if name == "Pt":
        return pt(param)
    if name == "Gx":
        return gx(param)
    if name == "Px":
        return px(param)
    if name == "center":
        return r_part_element((_num(0, exact), _num(0, exact)), param)
    raise ValueError(f"unknown elementary transformation {name!r}")


def compose_word(word, exact: bool = True) -> EssElement:
    out = identity(exact)
    for name, param in word:
        out = _compose_ess(out, word_element(name, param, exact))
    return out


# ------------------------------------------------------------------ JSON


def ess_to_json(p) -> dict:
    full = FullElement.of(p)
    e = full.ess
    if e.exact:
        out = {
            "A": [[rat_str(e.A[0]), rat_str(e.A[1])], [rat_str(e.A[2]), rat_str(e.A[3])]],
            "lambda": [rat_str(e.lam[0]), rat_str(e.lam[1])],
            "sigma": e.sigma.to_json(),
        }
    else:
        out = {"A": [[e.A[0], e.A[1]], [e.A[2], e.A[3]]], "lambda": list(e.lam), "sigma": e.sigma}
    from .heatexpr import print_expr
    out["shift"] = [print_expr(t) for t in full.shift.terms]
    return out


def ess_from_json(data, as_float: bool = False):
    from .heatexpr import parse_solution
    try:
        (a, b), (c, d) = data["A"]
        l1, l0 = data.get("lambda", [0, 0])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed element: {exc}") from None
    sigma_raw = data.get("sigma", 1)
    if as_float:
        if isinstance(sigma_raw, dict):
            sigma = float(ScalarExt.from_json(sigma_raw))
        else:
            sigma = float(rat(sigma_raw)) if isinstance(sigma_raw, str) else float(sigma_raw)
        fl = lambda v: float(rat(v)) if isinstance(v, str) else float(v)
        ess = EssElement((fl(a), fl(b), fl(c), fl(d)), (fl(l1), fl(l0)), sigma)
    else:
        ess = EssElement((a, b, c, d), (l1, l0), ScalarExt.from_json(sigma_raw))
    shift = data.get("shift") or []
    if not shift:
        return ess
    total = SolutionSum()
    for text in shift:
        total = total + parse_solution(text)
    return FullElement(ess, total)
