"""Exact arithmetic over Q: bivariate polynomials in (t, x), rational
functions, and the scalar extension r * sqrt(s) * exp(q).

Rationals are plain :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from sympy import QQ
from sympy.polys.rings import ring

Rat = Fraction

_RING, _T, _X = ring("t,x", QQ)

# Trial division bound for squarefree extraction.  Any square of a prime
# above this bound that is not itself caught by the perfect-square check on
# the cofactor stays inside s; equality stays exact because normalization is
# deterministic.
SQUAREFREE_TRIAL_BOUND = 10_000


def rat(value) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact rationals; pass a 'p/q' string")
    return Fraction(value)


def rat_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------- polynomials


class Poly2:
    """Polynomial in t and x with rational coefficients.

    ``terms`` maps ``(deg_t, deg_x)`` to a nonzero Fraction.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = rat(coeff)
                if coeff:
                    i, j = mono
                    if i < 0 or j < 0:
                        raise ValueError("negative degree in polynomial")
                    clean[(int(i), int(j))] = coeff
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c) -> "Poly2":
        return cls({(0, 0): rat(c)})

    @classmethod
    def t(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def x(cls) -> "Poly2":
        return cls({(0, 1): 1})

    @classmethod
    def affine_t(cls, a, b) -> "Poly2":
        return cls({(1, 0): rat(a), (0, 0): rat(b)})

    # predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def degree_x(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def degree_t(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def depends_on_x(self) -> bool:
        return any(j for _, j in self.terms)

    def leading(self):
        """Leading (monomial, coefficient) under graded lex with t > x."""
        if not self.terms:
            return None
        mono = max(self.terms, key=lambda m: (m[0] + m[1], m[0], m[1]))
        return mono, self.terms[mono]

    def lc(self) -> Fraction:
        lead = self.leading()
        return lead[1] if lead else Fraction(0)

    # arithmetic
    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return Poly2(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly2":
        c = rat(c)
        return Poly2({m: c * v for m, v in self.terms.items()})

    def diff(self, var: str) -> "Poly2":
        out = {}
        for (i, j), c in self.terms.items():
            if var == "t" and i:
                out[(i - 1, j)] = c * i
            elif var == "x" and j:
                out[(i, j - 1)] = c * j
        return Poly2(out)

    def evaluate(self, t, x):
        total = 0
        for (i, j), c in self.terms.items():
            total += c * t ** i * x ** j
        return total

    def compose(self, t_sub: "RatFunc", x_sub: "RatFunc") -> "RatFunc":
        """Substitute rational functions for t and x (Horner-free but with
        a common denominator to avoid repeated normalization)."""
        if not self.terms:
            return RatFunc.zero()
        dt = self.degree_t()
        dx = self.degree_x()
        tn, td = t_sub.num, t_sub.den
        xn, xd = x_sub.num, x_sub.den
        tn_pows = [Poly2.const(1)]
        td_pows = [Poly2.const(1)]
        for _ in range(dt):
            tn_pows.append(tn_pows[-1] * tn)
            td_pows.append(td_pows[-1] * td)
        xn_pows = [Poly2.const(1)]
        xd_pows = [Poly2.const(1)]
        for _ in range(dx):
            xn_pows.append(xn_pows[-1] * xn)
            xd_pows.append(xd_pows[-1] * xd)
        num = Poly2()
        for (i, j), c in self.terms.items():
            num = num + (tn_pows[i] * td_pows[dt - i] * xn_pows[j] * xd_pows[dx - j]).scale(c)
        den = td_pows[dt] * xd_pows[dx]
        return RatFunc(num, den)

    def content(self) -> Fraction:
        """Positive rational g with self/g having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = reduce(math.gcd, nums)
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), dens)
        return Fraction(abs(g), lcm)

    # sympy bridge, used for gcd only
    def _to_ring(self):
        return _RING({m: QQ(c.numerator, c.denominator) for m, c in self.terms.items()})

    @classmethod
    def _from_ring(cls, p) -> "Poly2":
        return cls({m: Fraction(int(c.numerator), int(c.denominator)) for m, c in p.terms()})

    # comparisons
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly2({format_poly(self)!r})"


def _as_poly(value) -> Poly2:
    if isinstance(value, Poly2):
        return value
    return Poly2.const(value)


def _monomial_text(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("t" if i == 1 else f"t^{i}")
    if j:
        parts.append("x" if j == 1 else f"x^{j}")
    return "*".join(parts)


def format_poly(p: Poly2) -> str:
    """Text form accepted by the expression parser, e.g. ``x^2 + 2*t``."""
    if p.is_zero():
        return "0"
    pieces = []
    for (i, j), c in p.sorted_terms():
        mono = _monomial_text(i, j)
        mag = abs(c)
        if not mono:
            body = rat_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{rat_str(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------- rational functions


class RatFunc:
    """Quotient num/den of polynomials in (t, x).

    Canonical form: common factors removed (sympy gcd), the denominator is
    monic under graded lex order and has integer-free scaling.  Zero tests
    never rely on the gcd: a quotient is zero iff its numerator is zero.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduce_gcd: bool = True):
        num = _as_poly(num)
        den = Poly2.const(1) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly2(), Poly2.const(1)
        else:
            if reduce_gcd and not den.is_const():
                num, den = _cancel(num, den)
            lc = den.lc()
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls(Poly2())

    @classmethod
    def one(cls) -> "RatFunc":
        return cls(Poly2.const(1))

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly2.const(c))

    @classmethod
    def t(cls) -> "RatFunc":
        return cls(Poly2.t())

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(Poly2.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num.const_value() / self.den.const_value()

    def is_poly(self) -> bool:
        return self.den.is_const()

    def depends_on_x(self) -> bool:
        return self.num.depends_on_x() or self.den.depends_on_x()

    def __add__(self, other):
        other = _as_ratfunc(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce_gcd=False)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return _as_ratfunc(other) - self

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfunc(other) / self

    def __pow__(self, n: int):
        if n >= 0:
            return RatFunc(self.num ** n, self.den ** n)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RatFunc(self.den ** (-n), self.num ** (-n))

    def diff(self, var: str) -> "RatFunc":
        n, d = self.num, self.den
        if d.is_const():
            return RatFunc(n.diff(var), d)
        return RatFunc(n.diff(var) * d - n * d.diff(var), d * d)

    def subst(self, t_sub: "RatFunc", x_sub: "RatFunc") -> "RatFunc":
        num = self.num.compose(t_sub, x_sub)
        den = self.den.compose(t_sub, x_sub)
        if den.is_zero():
            raise ZeroDivisionError("substitution makes the denominator vanish identically")
        return num / den

    def evaluate(self, t, x):
        d = self.den.evaluate(t, x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.evaluate(t, x) / d

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly2)):
            other = _as_ratfunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        # hash must agree with cross-multiplied equality; canonical forms
        # coincide whenever sympy's gcd is exact, which it is over Q[t,x]
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __str__(self):
        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r})"


def _as_ratfunc(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, Poly2):
        return RatFunc(value)
    return RatFunc.const(value)


def _cancel(num: Poly2, den: Poly2):
    p, q = num._to_ring(), den._to_ring()
    g = p.gcd(q)
    if g != 1 and not g.is_ground:
        p = p.exquo(g)
        q = q.exquo(g)
        return Poly2._from_ring(p), Poly2._from_ring(q)
    return num, den


def format_ratfunc(f: RatFunc) -> str:
    if f.den.is_const():
        return format_poly(f.num.scale(1 / f.den.const_value()))
    return f"({format_poly(f.num)})/({format_poly(f.den)})"


def ratfunc_arith(op: str, f: RatFunc, g: RatFunc) -> RatFunc:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def ratfunc_diff(f: RatFunc, var: str) -> RatFunc:
    if var not in ("t", "x"):
        raise ValueError("variable must be 't' or 'x'")
    return f.diff(var)


def ratfunc_subst(f: RatFunc, t_sub: RatFunc, x_sub: RatFunc) -> RatFunc:
    return f.subst(t_sub, x_sub)


# ------------------------------------------------------------ scalar extension


def squarefree_split(n: int):
    """Return (k, s) with n == k*k*s and s squarefree up to the trial bound."""
    if n <= 0:
        raise ValueError("squarefree_split expects a positive integer")
    k, s = 1, 1
    p = 2
    while p <= SQUAREFREE_TRIAL_BOUND and p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            k *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    root = math.isqrt(n)
    if root * root == n:
        k *= root
    else:
        s *= n
    return k, s


class ScalarExt:
    """The exact real number r * sqrt(s) * exp(q).

    r is rational, s a positive squarefree integer and q rational.  Zero is
    stored as (0, 1, 0).
    """

    __slots__ = ("r", "s", "q")

    def __init__(self, r=1, s=1, q=0):
        r = rat(r)
        q = rat(q)
        s = rat(s)
        if s <= 0:
            raise ValueError("s must be positive")
        if r == 0:
            self.r, self.s, self.q = Fraction(0), 1, Fraction(0)
            return
        # sqrt(a/b) = sqrt(a*b)/b
        num = s.numerator * s.denominator
        k, sf = squarefree_split(num)
        self.r = r * Fraction(k, s.denominator)
        self.s = sf
        self.q = q

    @classmethod
    def one(cls) -> "ScalarExt":
        return cls(1)

    @classmethod
    def zero(cls) -> "ScalarExt":
        return cls(0)

    @classmethod
    def exp(cls, q) -> "ScalarExt":
        return cls(1, 1, q)

    @classmethod
    def sqrt(cls, value) -> "ScalarExt":
        """sqrt(|value|) for a rational value."""
        value = abs(rat(value))
        if value == 0:
            return cls(0)
        return cls(1, value, 0)

    @classmethod
    def coerce(cls, value) -> "ScalarExt":
        if isinstance(value, ScalarExt):
            return value
        return cls(rat(value))

    def is_zero(self) -> bool:
        return self.r == 0

    def is_rational(self) -> bool:
        return self.s == 1 and self.q == 0

    def sign(self) -> int:
        return (self.r > 0) - (self.r < 0)

    def __mul__(self, other):
        if not isinstance(other, ScalarExt):
            other = ScalarExt(rat(other))
        if self.is_zero() or other.is_zero():
            return ScalarExt(0)
        g = math.gcd(self.s, other.s)
        # sqrt(s1)*sqrt(s2) = g*sqrt(s1/g * s2/g)
        return ScalarExt(self.r * other.r * g, (self.s // g) * (other.s // g), self.q + other.q)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarExt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        # 1/(r sqrt s) = sqrt(s)/(r s)
        return ScalarExt(1 / (self.r * self.s), self.s, -self.q)

    def __truediv__(self, other):
        if not isinstance(other, ScalarExt):
            other = ScalarExt(rat(other))
        return self * other.inverse()

    def __neg__(self):
        return ScalarExt(-self.r, self.s, self.q)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ScalarExt(1)
        for _ in range(n):
            out = out * self
        return out

    def __abs__(self):
        return ScalarExt(abs(self.r), self.s, self.q)

    def __float__(self):
        return float(self.r) * math.sqrt(self.s) * math.exp(float(self.q))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarExt(other)
        if not isinstance(other, ScalarExt):
            return NotImplemented
        return (self.r, self.s, self.q) == (other.r, other.s, other.q)

    def __hash__(self):
        return hash((self.r, self.s, self.q))

    def to_json(self) -> dict:
        return {"r": rat_str(self.r), "s": str(self.s), "q": rat_str(self.q)}

    @classmethod
    def from_json(cls, data) -> "ScalarExt":
        if isinstance(data, (int, str)):
            return cls(rat(data))
        return cls(rat(data.get("r", 1)), rat(data.get("s", 1)), rat(data.get("q", 0)))

    def __str__(self):
        parts = [rat_str(self.r)]
        if self.s != 1:
            parts.append(f"sqrt({self.s})")
        if self.q:
            parts.append(f"exp({rat_str(self.q)})")
        return "*".join(parts)

    def __repr__(self):
        return f"ScalarExt({rat_str(self.r)}, {self.s}, {rat_str(self.q)})"


def scalar_mul(a: ScalarExt, b: ScalarExt) -> ScalarExt:
    return a * b


def rat_power_half(base: Fraction, twice_exponent: int) -> ScalarExt:
    """base**(twice_exponent/2) for a positive rational base."""
    base = rat(base)
    if base <= 0:
        raise ValueError("half-integer power needs a positive base")
    whole, odd = divmod(twice_exponent, 2)
    out = ScalarExt(base ** whole)
    if odd:
        out = out * ScalarExt.sqrt(base)
    return out


class ScalarSum:
    """Finite sum of ScalarExt monomials, kept as {(s, q): r}.

    Distinct (s, q) pairs are linearly independent over Q (square roots of
    distinct squarefree integers times exponentials of distinct rationals),
    so this representation is canonical and equality is exact.
    """

    __slots__ = ("terms",)

    def __init__(self, items=()):
        acc = {}
        for item in items:
            item = ScalarExt.coerce(item)
            if item.is_zero():
                continue
            key = (item.s, item.q)
            acc[key] = acc.get(key, 0) + item.r
        self.terms = {k: v for k, v in acc.items() if v}

    def __add__(self, other):
        other = other if isinstance(other, ScalarSum) else ScalarSum([other])
        return ScalarSum(list(self.monomials()) + list(other.monomials()))

    __radd__ = __add__

    def __mul__(self, other):
        other = other if isinstance(other, ScalarSum) else ScalarSum([other])
        return ScalarSum([a * b for a in self.monomials() for b in other.monomials()])

    __rmul__ = __mul__

    def monomials(self):
        for (s, q), r in sorted(self.terms.items()):
            yield ScalarExt(r, s, q)

    def is_zero(self) -> bool:
        return not self.terms

    def as_monomial(self):
        """The single ScalarExt equal to this sum, or None."""
        if not self.terms:
            return ScalarExt(0)
        if len(self.terms) == 1:
            return next(self.monomials())
        return None

    def __float__(self):
        return sum(float(m) for m in self.monomials())

    def __eq__(self, other):
        if isinstance(other, ScalarExt):
            other = ScalarSum([other])
        if not isinstance(other, ScalarSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def to_json(self):
        return [m.to_json() for m in self.monomials()]

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in self.monomials())
