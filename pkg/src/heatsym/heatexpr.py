"""Closed symbolic class of heat-equation solutions.

A :class:`HeatExpr` stands for ``c * A(t,x) * prod (sign_i*B_i(t))**s_i * exp(g(t,x))``
with ``A`` and ``g`` rational functions, ``B_i`` affine in t and ``c`` an exact
:class:`~heatsym.exact.ScalarExt`.  The class is closed under the derivatives,
the point symmetry group and the recursion operators, so residuals are exact
rational functions.

Normal form used throughout:

* every affine base is monic (``t + b``), its half-integer power is folded
  to ``-1/2`` with the integer part moved into ``A``;
* ``A`` has monic numerator and denominator, its leading coefficient lives in ``c``;
* a polynomial ``g`` has no constant term (the constant lives in ``c``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .exact import Poly2, RatFunc, ScalarExt, rat, rat_power_half, rat_str, format_poly

HALF = Fraction(1, 2)


class ExprSyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class OutsideClassError(ValueError):
    """The expression is well formed but does not belong to the solution class."""


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class AffineT:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "b", rat(self.b))
        if self.a == 0 and self.b == 0:
            raise ValueError("affine factor must not vanish identically")

    def __call__(self, t):
        return self.a * t + self.b

    def root(self):
        return None if self.a == 0 else -self.b / self.a

    def as_ratfunc(self) -> RatFunc:
        return RatFunc(Poly2.affine_t(self.a, self.b))


@dataclass(frozen=True)
class Factor:
    base: AffineT
    s: Fraction
    sign: int


Slab = tuple  # (lo, hi) with None for an infinite end


def slab_point(slab) -> Fraction:
    """A deterministic interior point of an open t-interval."""
    lo, hi = slab
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def slab_contains(slab, t) -> bool:
    lo, hi = slab
    return (lo is None or t > lo) and (hi is None or t < hi)


def slab_intersect(a, b):
    lo = a[0] if b[0] is None else b[0] if a[0] is None else max(a[0], b[0])
    hi = a[1] if b[1] is None else b[1] if a[1] is None else min(a[1], b[1])
    if lo is not None and hi is not None and lo >= hi:
        raise DomainError("empty domain component")
    return (lo, hi)


def slab_around(roots, t0):
    lo = max((r for r in roots if r < t0), default=None)
    hi = min((r for r in roots if r > t0), default=None)
    return (lo, hi)


def default_slab(roots):
    """Component containing t=1 when legal, else t=-1."""
    for t0 in (Fraction(1), Fraction(-1)):
        if t0 not in roots:
            return slab_around(roots, t0)
    raise DomainError("cannot pick a default domain; add a {t>c} tag")


def format_slab(slab) -> str:
    lo, hi = slab
    parts = []
    if lo is not None:
        parts.append(f"t>{rat_str(lo)}")
    if hi is not None:
        parts.append(f"t<{rat_str(hi)}")
    return "{" + ", ".join(parts) + "}" if parts else ""


class HeatExpr:
    __slots__ = ("c", "A", "factors", "g", "slab")

    def __init__(self, c=1, A=None, factors=(), g=None, slab=None):
        c = ScalarExt.coerce(c)
        A = RatFunc.one() if A is None else _rf(A)
        g = RatFunc.zero() if g is None else _rf(g)
        if c.is_zero() or A.is_zero():
            self.c, self.A, self.factors, self.g = ScalarExt(0), RatFunc.zero(), (), RatFunc.zero()
            self.slab = slab if slab is not None else (None, None)
            return

        # affine bases: monic, merged, constants into c
        merged = {}
        raw = []
        for f in factors:
            if isinstance(f, Factor):
                raw.append((f.base, rat(f.s), f.sign))
            else:
                base, s, sign = f
                raw.append((base if isinstance(base, AffineT) else AffineT(*base), rat(s), sign))
        for base, s, sign in raw:
            if s.denominator not in (1, 2):
                raise OutsideClassError("only half-integer powers of affine factors are allowed")
            if s == 0:
                continue
            if base.a == 0:
                value = base.b if sign is None else sign * base.b
                if value <= 0:
                    raise DomainError("constant factor must be positive")
                c = c * rat_power_half(value, int(2 * s))
                continue
            key = base.b / base.a
            new_sign = None if sign is None else sign * (1 if base.a > 0 else -1)
            c = c * rat_power_half(abs(base.a), int(2 * s))
            if key in merged:
                old_sign, old_s = merged[key]
                if old_sign is not None and new_sign is not None and old_sign != new_sign:
                    raise DomainError("incompatible signs for the same factor")
                merged[key] = (old_sign if old_sign is not None else new_sign, old_s + s)
            else:
                merged[key] = (new_sign, s)

        roots = [-b for b in merged]
        if slab is None:
            signed = [(b, sg) for b, (sg, _) in merged.items() if sg is not None]
            if signed and len(signed) == len(merged):
                slab = _slab_from_signs(merged)
            else:
                slab = default_slab(roots)
        for r in roots:
            if slab_contains(slab, r):
                raise DomainError("domain component crosses a factor root")
        probe = slab_point(slab)

        final = []
        for b, (sign, s) in sorted(merged.items()):
            actual = 1 if probe + b > 0 else -1
            if sign is not None and sign != actual:
                raise DomainError("factor sign does not match the domain component")
            sign = actual
            whole = s + HALF  # s = whole - 1/2
            n = math.floor(whole)
            rest = s - n
            if n:
                base_rf = RatFunc(Poly2.affine_t(1, b)) * sign
                A = A * base_rf ** n
            if rest:
                final.append(Factor(AffineT(1, b), rest, sign))

        if A.is_zero():
            self.c, self.A, self.factors, self.g = ScalarExt(0), RatFunc.zero(), (), RatFunc.zero()
            self.slab = slab
            return
        lead = A.num.lc()
        if lead != 1:
            c = c * ScalarExt(lead)
            A = RatFunc(A.num.scale(1 / lead), A.den, reduce_gcd=False)
        # constants in g move into c: kill the numerator coefficient at the
        # denominator's leading monomial (the constant term for polynomials)
        if not g.is_zero():
            mono = g.den.leading()[0]
            k = g.num.terms.get(mono, Fraction(0))
            if k:
                c = c * ScalarExt.exp(k)
                g = g - k
        self.c, self.A, self.factors, self.g, self.slab = c, A, tuple(final), g, tuple(slab)

    # -- basic structure
    @classmethod
    def zero(cls, slab=None) -> "HeatExpr":
        return cls(0, slab=slab)

    @classmethod
    def from_ratfunc(cls, f, slab=None) -> "HeatExpr":
        return cls(1, f, (), None, slab)

    def is_zero(self) -> bool:
        return self.c.is_zero()

    def key(self):
        return (self.c, self.A.num, self.A.den, self.factors, self.g.num, self.g.den, self.slab)

    def __eq__(self, other):
        if not isinstance(other, HeatExpr):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def shape(self):
        """What two terms must share to be merged into one."""
        return (self.factors, self.g.num, self.g.den, self.c.s, self.c.q)

    def with_slab(self, slab) -> "HeatExpr":
        return HeatExpr(self.c, self.A, self.factors, self.g, slab)

    def prefactor_log_derivative(self, var: str) -> RatFunc:
        """d/dvar of log(prod B^s * e^g)."""
        out = self.g.diff(var)
        if var == "t":
            for f in self.factors:
                out = out + RatFunc.const(f.s * f.base.a) / f.base.as_ratfunc()
        return out

    # -- algebra
    def scale(self, k) -> "HeatExpr":
        return HeatExpr(self.c * ScalarExt.coerce(k), self.A, self.factors, self.g, self.slab)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, HeatExpr):
            return self.scale(other)
        slab = slab_intersect(self.slab, other.slab)
        return HeatExpr(self.c * other.c, self.A * other.A,
                        self.factors + other.factors, self.g + other.g, slab)

    def inverse(self) -> "HeatExpr":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero expression")
        facs = tuple(Factor(f.base, -f.s, f.sign) for f in self.factors)
        return HeatExpr(self.c.inverse(), RatFunc.one() / self.A, facs, -self.g, self.slab)

    def times_ratfunc(self, f) -> "HeatExpr":
        return HeatExpr(self.c, self.A * _rf(f), self.factors, self.g, self.slab)

    # -- calculus
    def diff(self, var: str) -> "HeatExpr":
        if var not in ("t", "x"):
            raise ValueError("variable must be 't' or 'x'")
        if self.is_zero():
            return self
        newA = self.A.diff(var) + self.A * self.prefactor_log_derivative(var)
        return HeatExpr(self.c, newA, self.factors, self.g, self.slab)

    def heat_residual(self) -> RatFunc:
        """(u_t - u_xx)/u as an exact rational function (0 for u = 0)."""
        if self.is_zero():
            return RatFunc.zero()
        A = self.A
        gx = self.g.diff("x")
        At = A.diff("t") + A * self.prefactor_log_derivative("t")
        Ax = A.diff("x")
        Axx = Ax.diff("x") + 2 * Ax * gx + A * (gx.diff("x") + gx * gx)
        return (At - Axx) / A

    def is_solution(self) -> bool:
        return self.heat_residual().is_zero()

    # -- evaluation
    def evaluate(self, t, x) -> ScalarExt:
        t, x = rat(t), rat(x)
        if not slab_contains(self.slab, t):
            raise DomainError("point outside the domain component")
        if self.is_zero():
            return ScalarExt(0)
        out = self.c * ScalarExt(self.A.evaluate(t, x))
        for f in self.factors:
            out = out * rat_power_half(f.sign * f.base(t), int(2 * f.s))
        return out * ScalarExt.exp(self.g.evaluate(t, x))

    def evaluate_float(self, t: float, x: float) -> float:
        if self.is_zero():
            return 0.0
        value = float(self.c) * _float_rf(self.A, t, x)
        for f in self.factors:
            value *= (f.sign * (float(f.base.a) * t + float(f.base.b))) ** float(f.s)
        return value * math.exp(_float_rf(self.g, t, x))

    def __str__(self):
        return print_expr(self)

    def __repr__(self):
        return f"HeatExpr({print_expr(self)!r})"


def _float_rf(f: RatFunc, t, x) -> float:
    num = sum(float(c) * t ** i * x ** j for (i, j), c in f.num.terms.items())
    den = sum(float(c) * t ** i * x ** j for (i, j), c in f.den.terms.items())
    return num / den


def _slab_from_signs(merged):
    # the interval where all signed monic bases t+b have the requested sign
    lo, hi = None, None
    for b, (sign, _) in merged.items():
        root = -b
        if sign > 0:
            lo = root if lo is None else max(lo, root)
        else:
            hi = root if hi is None else min(hi, root)
    if lo is not None and hi is not None and lo >= hi:
        raise DomainError("factor signs describe an empty domain")
    return (lo, hi)


def _rf(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, Poly2):
        return RatFunc(value)
    return RatFunc.const(rat(value))


# ---------------------------------------------------------------- sums


class SolutionSum:
    """Finite sum of HeatExpr terms on a common domain component.

    Terms of equal shape (same affine factors, same g, same irrational part
    of the constant) are merged.  Residuals are checked termwise, which is
    exact whenever distinct shapes are independent; the merge guarantees it
    for sums built from a single shape such as heat polynomials.
    """

    __slots__ = ("terms", "slab")

    def __init__(self, terms=(), slab=None):
        terms = [t for t in terms]
        if slab is None:
            slab = (None, None)
            for term in terms:
                slab = slab_intersect(slab, term.slab)
        groups = {}
        order = []
        for term in terms:
            if term.is_zero():
                continue
            term = term if term.slab == slab else term.with_slab(slab)
            k = term.shape()
            if k not in groups:
                groups[k] = []
                order.append(k)
            groups[k].append(term)
        out = []
        for k in order:
            group = groups[k]
            if len(group) == 1:
                out.append(group[0])
                continue
            head = group[0]
            A = RatFunc.zero()
            for term in group:
                A = A + term.A * term.c.r
            merged = HeatExpr(ScalarExt(1, head.c.s, head.c.q), A, head.factors, head.g, slab)
            if not merged.is_zero():
                out.append(merged)
        out.sort(key=_term_sort_key)
        self.terms = tuple(out)
        self.slab = tuple(slab)

    @classmethod
    def of(cls, value) -> "SolutionSum":
        if isinstance(value, SolutionSum):
            return value
        if isinstance(value, HeatExpr):
            return cls([value], value.slab)
        if isinstance(value, str):
            return parse_solution(value)
        return cls([HeatExpr.from_ratfunc(_rf(value))])

    def single(self) -> HeatExpr:
        if len(self.terms) == 1:
            return self.terms[0]
        if not self.terms:
            return HeatExpr.zero(self.slab)
        raise OutsideClassError("sum has more than one term")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = SolutionSum.of(other)
        slab = slab_intersect(self.slab, other.slab)
        return SolutionSum(self.terms + other.terms, slab)

    def __neg__(self):
        return SolutionSum([-t for t in self.terms], self.slab)

    def __sub__(self, other):
        return self + (-SolutionSum.of(other))

    def scale(self, k) -> "SolutionSum":
        return SolutionSum([t.scale(k) for t in self.terms], self.slab)

    def map_terms(self, fn) -> "SolutionSum":
        mapped = [fn(t) for t in self.terms]
        if not mapped:
            return SolutionSum((), self.slab)
        return SolutionSum(mapped)

    def residuals(self):
        return [t.heat_residual() for t in self.terms]

    def is_solution(self) -> bool:
        return all(r.is_zero() for r in self.residuals())

    def same_function(self, other) -> bool:
        other = SolutionSum.of(other)
        return (self - other).is_zero()

    def evaluate(self, t, x):
        from .exact import ScalarSum
        return ScalarSum([term.evaluate(t, x) for term in self.terms])

    def evaluate_float(self, t, x) -> float:
        return sum(term.evaluate_float(t, x) for term in self.terms)

    def __eq__(self, other):
        if not isinstance(other, SolutionSum):
            return NotImplemented
        return self.terms == other.terms and self.slab == other.slab

    def __hash__(self):
        return hash((self.terms, self.slab))

    def __str__(self):
        return print_expr(self)

    def __repr__(self):
        return f"SolutionSum({print_expr(self)!r})"


def _term_sort_key(term: HeatExpr):
    return (str(term.factors), format_poly(term.g.num), format_poly(term.g.den),
            term.c.s, term.c.q, format_poly(term.A.num), format_poly(term.A.den))


# ---------------------------------------------------------------- operations


def he_diff(e: HeatExpr, var: str) -> HeatExpr:
    return e.diff(var)


def heat_residual(e) -> RatFunc:
    if isinstance(e, SolutionSum):
        return e.single().heat_residual() if len(e.terms) <= 1 else _sum_residual(e)
    return e.heat_residual()


def _sum_residual(e: SolutionSum) -> RatFunc:
    # report the first nonzero termwise residual, zero if all vanish
    for r in e.residuals():
        if not r.is_zero():
            return r
    return RatFunc.zero()


def burgers_residual(v: RatFunc) -> RatFunc:
    v = _rf(v)
    return v.diff("t") + v * v.diff("x") - v.diff("x").diff("x")


# ---------------------------------------------------------------- printer


def _format_ratfunc_paren(f: RatFunc) -> str:
    if f.den.is_const():
        return f"({format_poly(f.num.scale(1 / f.den.const_value()))})"
    return f"(({format_poly(f.num)})/({format_poly(f.den)}))"


def _format_term(e: HeatExpr) -> str:
    if e.is_zero():
        return "(0)"
    parts = [f"({rat_str(e.c.r)})"]
    if e.c.s != 1:
        parts.append(f"({e.c.s})^(1/2)")
    if e.c.q:
        parts.append(f"exp({rat_str(e.c.q)})")
    if not (e.A.num.is_const() and e.A.den.is_const()):
        parts.append(_format_ratfunc_paren(e.A))
    for f in e.factors:
        b = f.base.b
        if b == 0:
            base = "t" if f.sign > 0 else "-t"
        else:
            inner = f"t + {rat_str(b)}" if b > 0 else f"t - {rat_str(-b)}"
            base = inner if f.sign > 0 else f"-t {'-' if b > 0 else '+'} {rat_str(abs(b))}"
        parts.append(f"({base})^({rat_str(f.s)})")
    if not e.g.is_zero():
        parts.append(f"exp{_format_ratfunc_paren(e.g)}")
    return "(" + "*".join(parts) + ")"


def print_expr(e) -> str:
    """Fully parenthesized canonical text; parse_expr reads it back."""
    if isinstance(e, HeatExpr):
        body, slab = _format_term(e), e.slab
    else:
        body = " + ".join(_format_term(t) for t in e.terms) if e.terms else "(0)"
        slab = e.slab
    tag = format_slab(slab)
    return f"{body} {tag}" if tag else body


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(\d+)|(exp|t|x)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append((m.group(2), m.group(2), start))
        else:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/^(){}<>,":
                raise ExprSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


class _Term:
    """Intermediate product term: c * A * prod base^s * exp(g), signs pending."""

    __slots__ = ("c", "A", "powers", "g")

    def __init__(self, c, A, powers, g):
        self.c, self.A, self.powers, self.g = c, A, powers, g

    @classmethod
    def const(cls, value):
        return cls(ScalarExt.coerce(value), RatFunc.one(), {}, RatFunc.zero())

    def mul(self, other):
        powers = dict(self.powers)
        for k, s in other.powers.items():
            powers[k] = powers.get(k, 0) + s
            if powers[k] == 0:
                del powers[k]
        return _Term(self.c * other.c, self.A * other.A, powers, self.g + other.g)

    def inverse(self):
        if self.c.is_zero() or self.A.is_zero():
            raise ZeroDivisionError("division by zero")
        return _Term(self.c.inverse(), RatFunc.one() / self.A,
                     {k: -s for k, s in self.powers.items()}, -self.g)

    def is_plain(self):
        return not self.powers and self.g.is_zero() and self.c.is_rational()

    def plain_value(self) -> RatFunc:
        return self.A * self.c.r

    def shape(self):
        return (tuple(sorted(self.powers.items())), self.g.num, self.g.den, self.c.s, self.c.q)


def _sum_terms(terms):
    groups = {}
    order = []
    for term in terms:
        if term.c.is_zero() or term.A.is_zero():
            continue
        k = term.shape()
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(term)
    out = []
    for k in order:
        group = groups[k]
        if len(group) == 1:
            out.append(group[0])
            continue
        A = RatFunc.zero()
        for term in group:
            A = A + term.A * term.c.r
        if not A.is_zero():
            head = group[0]
            out.append(_Term(ScalarExt(1, head.c.s, head.c.q), A, head.powers, head.g))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        terms = self.expr()
        slab = None
        if self.peek()[0] == "{":
            slab = self.domain_tag()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError("unexpected trailing input", tok[2])
        return terms, slab

    def expr(self):
        terms = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            if op == "-":
                rhs = [_Term(-t.c, t.A, t.powers, t.g) for t in rhs]
            terms = _sum_terms(terms + rhs)
        return _sum_terms(terms)

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = _sum_terms([a.mul(b) for a in value for b in rhs])
            else:
                if len(rhs) != 1:
                    raise OutsideClassError("division by a sum is outside the class")
                try:
                    inv = rhs[0].inverse()
                except ZeroDivisionError:
                    raise ExprSyntaxError("division by zero", pos) from None
                value = _sum_terms([a.mul(inv) for a in value])
        return value

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return [_Term(-t.c, t.A, t.powers, t.g) for t in self.unary()]
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            exponent = self.exponent()
            return _power(base, exponent)
        return base

    def exponent(self) -> Fraction:
        tok = self.peek()
        if tok[0] == "(":
            self.take()
            value = self.signed_rational()
            self.take(")")
            return value
        # bare exponents are integers so that x^2/3 reads as (x^2)/3
        sign = 1
        if self.peek()[0] in ("-", "+"):
            sign = -1 if self.take()[0] == "-" else 1
        return Fraction(sign * self.take("int")[1])

    def signed_rational(self) -> Fraction:
        sign = 1
        if self.peek()[0] in ("-", "+"):
            sign = -1 if self.take()[0] == "-" else 1
        num = self.take("int")[1]
        den = 1
        if self.peek()[0] == "/":
            self.take()
            tok = self.take("int")
            den = tok[1]
            if den == 0:
                raise ExprSyntaxError("zero denominator", tok[2])
        return sign * Fraction(num, den)

    def base(self):
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return [_Term.const(value)]
        if kind == "t":
            self.take()
            return [_Term(ScalarExt(1), RatFunc.t(), {}, RatFunc.zero())]
        if kind == "x":
            self.take()
            return [_Term(ScalarExt(1), RatFunc.x(), {}, RatFunc.zero())]
        if kind == "exp":
            self.take()
            self.take("(")
            inner = self.expr()
            self.take(")")
            return [_exp(inner)]
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ExprSyntaxError("expected a number, t, x, exp or '('", pos)

    def domain_tag(self):
        self.take("{")
        slab = (None, None)
        while True:
            self.take("t")
            kind, _, pos = self.take()
            if kind not in ("<", ">"):
                raise ExprSyntaxError("expected '<' or '>'", pos)
            bound = self.signed_rational()
            part = (bound, None) if kind == ">" else (None, bound)
            try:
                slab = slab_intersect(slab, part)
            except DomainError:
                raise ExprSyntaxError("empty domain tag", pos) from None
            if self.peek()[0] == ",":
                self.take()
                continue
            self.take("}")
            return slab


def _exp(inner) -> _Term:
    if not inner:
        return _Term.const(1)
    if len(inner) != 1 or not inner[0].is_plain():
        raise OutsideClassError("exp argument must be a rational function of t and x")
    g = inner[0].plain_value()
    if g.is_const():
        return _Term(ScalarExt.exp(g.const_value()), RatFunc.one(), {}, RatFunc.zero())
    return _Term(ScalarExt(1), RatFunc.one(), {}, g)


def _power(base, exponent: Fraction):
    if exponent.denominator == 1:
        n = exponent.numerator
        if len(base) != 1:
            if n < 0:
                raise OutsideClassError("negative power of a sum is outside the class")
            out = [_Term.const(1)]
            for _ in range(n):
                out = _sum_terms([a.mul(b) for a in out for b in base])
            return out
        term = base[0]
        if n < 0:
            term = term.inverse()
            n = -n
        out = _Term.const(1)
        for _ in range(n):
            out = out.mul(term)
        return [out]
    if exponent.denominator != 2:
        raise OutsideClassError("only half-integer exponents are allowed")
    if len(base) != 1:
        raise OutsideClassError("fractional power of a sum is outside the class")
    term = base[0]
    if term.powers or not term.g.is_zero() or term.c.s != 1:
        raise OutsideClassError("fractional power of this base is outside the class")
    twice = exponent.numerator
    A = term.A
    c = term.c
    if A.depends_on_x() or not A.is_poly() or A.num.degree_t() > 1:
        raise OutsideClassError("fractional powers need a base affine in t")
    poly = A.num.scale(1 / A.den.const_value())
    if c.r < 0:
        poly, c = -poly, -c
    ce = rat_power_half(c.r, twice) * ScalarExt.exp(c.q * exponent)
    if poly.degree_t() <= 0:
        value = poly.const_value()
        if value <= 0:
            raise OutsideClassError("fractional power of a non-positive constant")
        return [_Term(ce * rat_power_half(value, twice), RatFunc.one(), {}, RatFunc.zero())]
    a = poly.terms.get((1, 0), Fraction(0))
    b = poly.terms.get((0, 0), Fraction(0))
    return [_Term(ce, RatFunc.one(), {(a, b): exponent}, RatFunc.zero())]


def _finish(terms, slab):
    roots = set()
    for term in terms:
        for (a, b) in term.powers:
            roots.add(-b / a)
    if slab is None:
        slab = default_slab(sorted(roots))
    out = []
    for term in terms:
        factors = [(AffineT(a, b), s, None) for (a, b), s in sorted(term.powers.items())]
        out.append(HeatExpr(term.c, term.A, factors, term.g, slab))
    return out, slab


def parse_solution(text: str) -> SolutionSum:
    terms, slab = _Parser(text).parse()
    exprs, slab = _finish(terms, slab)
    return SolutionSum(exprs, slab)


def parse_expr(text: str):
    """Parse one expression; returns a HeatExpr, or a SolutionSum when the
    text is a sum of terms of different shape."""
    s = parse_solution(text)
    if len(s.terms) == 1:
        return s.terms[0]
    if not s.terms:
        return HeatExpr.zero(s.slab)
    return s
