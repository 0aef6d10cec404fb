"""The six-dimensional essential algebra spanned by (P^t, D, K, G^x, P^x, I).

Brackets are brackets of vector fields.  The Levi factor f = <P^t, D, K> is
mirrored by 2x2 traceless matrices via

    p*P^t + d*D + k*K  <->  [[d, p], [-k, -d]]

under which the vector-field bracket is minus the matrix commutator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import ScalarExt, rat, rat_str
from . import pointgroup as pg

BASIS_NAMES = ("Pt", "D", "K", "Gx", "Px", "I")
PT, DD, KK, GX, PX, II = range(6)


@dataclass(frozen=True)
class AlgElement:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(self.coeffs)
        if len(c) != 6:
            raise ValueError("an algebra element has six coefficients")
        if any(isinstance(v, float) for v in c):
            c = tuple(float(v) for v in c)
        else:
            c = tuple(rat(v) for v in c)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, i: int) -> "AlgElement":
        return cls(tuple(1 if j == i else 0 for j in range(6)))

    @classmethod
    def zero(cls) -> "AlgElement":
        return cls((0,) * 6)

    @classmethod
    def of(cls, value) -> "AlgElement":
        if isinstance(value, AlgElement):
            return value
        if isinstance(value, dict):
            return cls.from_json(value)
        return cls(tuple(value))

    @property
    def exact(self) -> bool:
        return not isinstance(self.coeffs[0], float)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __add__(self, other):
        return AlgElement(tuple(a + b for a, b in zip(self.coeffs, AlgElement.of(other).coeffs)))

    def __sub__(self, other):
        return self + (-AlgElement.of(other))

    def __neg__(self):
        return AlgElement(tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        return AlgElement(tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def to_json(self) -> dict:
        fmt = rat_str if self.exact else float
        return {name: fmt(v) for name, v in zip(BASIS_NAMES, self.coeffs)}

    @classmethod
    def from_json(cls, data) -> "AlgElement":
        unknown = set(data) - set(BASIS_NAMES)
        if unknown:
            raise ValueError(f"unknown basis names: {sorted(unknown)}")
        return cls(tuple(rat(data.get(n, 0)) for n in BASIS_NAMES))

    def __str__(self):
        parts = []
        for name, v in zip(BASIS_NAMES, self.coeffs):
            if v:
                parts.append(f"{rat_str(v) if self.exact else v}*{name}")
        return " + ".join(parts) if parts else "0"


E_PT, E_D, E_K, E_GX, E_PX, E_I = (AlgElement.basis(i) for i in range(6))
Q_PLUS = E_PT + E_K
Q_MINUS = E_PT - E_K


# nonzero brackets of basis elements, one orientation each
_TABLE = {
    (DD, PT): {PT: -2},
    (DD, KK): {KK: 2},
    (PT, KK): {DD: 1},
    (PT, GX): {PX: 1},
    (DD, GX): {GX: 1},
    (DD, PX): {PX: -1},
    (KK, PX): {GX: -1},
    (GX, PX): {II: Fraction(1, 2)},
}


def structure_constants():
    """c[i][j] = bracket of basis i and j as a dict index -> coefficient."""
    c = [[{} for _ in range(6)] for _ in range(6)]
    for (i, j), out in _TABLE.items():
        c[i][j] = {k: Fraction(v) for k, v in out.items()}
        c[j][i] = {k: -Fraction(v) for k, v in out.items()}
    return c


_C = structure_constants()


def bracket(X, Y) -> AlgElement:
    X, Y = AlgElement.of(X), AlgElement.of(Y)
    out = [0] * 6
    for i, a in enumerate(X.coeffs):
        if not a:
            continue
        for j, b in enumerate(Y.coeffs):
            if not b:
                continue
            for k, v in _C[i][j].items():
                out[k] += a * b * v
    return AlgElement(tuple(out))


def ad_matrix(X):
    """6x6 matrix whose column j is bracket(X, basis_j)."""
    X = AlgElement.of(X)
    cols = [bracket(X, AlgElement.basis(j)).coeffs for j in range(6)]
    return [[cols[j][i] for j in range(6)] for i in range(6)]


def ad_matrix_group(X):
    """Adjoint matrix in the group convention, so that Ad(exp(eps X)) = expm(eps * ad_group X).

    The vector fields generate a left action, so their bracket is opposite
    to the bracket of the abstract group algebra.
    """
    return [[-v for v in row] for row in ad_matrix(X)]


def matvec(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


# ------------------------------------------------------------------ matrix picture


def f_matrix(X):
    p, d, k = X[PT], X[DD], X[KK]
    return (d, p, -k, -d)


def from_parts(M, gp, c) -> AlgElement:
    d, p, mk, _ = M
    return AlgElement((p, d, -mk, gp[0], gp[1], c))


def pushforward_closed(phi, X) -> AlgElement:
    """Ad(phi) X from the factorization phi = F(A) o R(lam, sigma).

    Ad R(lam): M fixed, (g, p) -> (g, p) + lam M,
               c -> c + (g lam0 - p lam1)/2 + ((lam M)_1 lam0 - lam1 (lam M)_0)/4
    Ad F(A):   M -> A M A^-1, (g, p) -> (g, p) A^-1, c fixed.
    """
    X = AlgElement.of(X)
    phi = phi.ess if isinstance(phi, pg.FullElement) else phi
    M = f_matrix(X)
    g, p, c = X[GX], X[PX], X[II]
    l1, l0 = phi.lam
    lm = pg._row_times((l1, l0), M)
    c = c + (g * l0 - p * l1) / 2 + (lm[0] * l0 - l1 * lm[1]) / 4
    gp = (g + lm[0], p + lm[1])
    A = phi.A
    Ainv = pg._matinv(A)
    M2 = pg._matmul(pg._matmul(A, M), Ainv)
    gp2 = pg._row_times(gp, Ainv)
    return from_parts(M2, gp2, c)


# ------------------------------------------------------------------ pushforward tables


def _vec(**kw):
    out = [0] * 6
    for name, v in kw.items():
        out[BASIS_NAMES.index(name)] = v
    return tuple(out)


def elementary_images(name, param):
    """Images of the six basis elements under the pushforward by one
    elementary transformation, as listed in the classical tables."""
    e = param
    one = 1 if not isinstance(e, float) else 1.0
    ident = [_vec(**{n: one}) for n in BASIS_NAMES]
    img = list(ident)
    if name == "Pt":
        img[DD] = _vec(D=one, Pt=-2 * e)
        img[KK] = _vec(K=one, D=-e, Pt=e * e)
        img[GX] = _vec(Gx=one, Px=-e)
    elif name == "K":
        img[DD] = _vec(D=one, K=2 * e)
        img[PT] = _vec(Pt=one, D=e, K=e * e)
        img[PX] = _vec(Px=one, Gx=e)
    elif name == "D":  # parameter q = e^eps
        q = e
        img[PT] = _vec(Pt=q * q)
        img[KK] = _vec(K=1 / (q * q))
        img[GX] = _vec(Gx=1 / q)
        img[PX] = _vec(Px=q)
    elif name == "Gx":
        img[PT] = _vec(Pt=one, Px=e, I=-e * e / 4)
        img[DD] = _vec(D=one, Gx=e)
        img[PX] = _vec(Px=one, I=-e / 2)
    elif name == "Px":
        img[DD] = _vec(D=one, Px=-e)
        img[KK] = _vec(K=one, Gx=-e, I=-e * e / 4)
        img[GX] = _vec(Gx=one, I=e / 2)
    elif name == "J":
        img[GX] = _vec(Gx=-one)
        img[PX] = _vec(Px=-one)
    elif name == "Kp":
        img[PT] = _vec(K=one)
        img[DD] = _vec(D=-one)
        img[KK] = _vec(Pt=one)
        img[GX] = _vec(Px=one)
        img[PX] = _vec(Gx=-one)
    elif name == "Qp":  # parameter (cos eps, sin eps)
        c, s = e
        c2, s2 = c * c - s * s, 2 * s * c
        # Q- -> c2 Q- + s2 D, D -> -s2 Q- + c2 D, Q+ fixed
        img[PT] = _vec(Pt=(1 + c2) / 2, D=s2 / 2, K=(1 - c2) / 2)
        img[KK] = _vec(Pt=(1 - c2) / 2, D=-s2 / 2, K=(1 + c2) / 2)
        img[DD] = _vec(Pt=-s2, D=c2, K=s2)
        img[PX] = _vec(Px=c, Gx=s)
        img[GX] = _vec(Px=-s, Gx=c)
    elif name in ("center", "I", "Ip"):
        pass
    else:
        raise ValueError(f"no pushforward table for {name!r}")
    return img


def push_elementary(name, param, X) -> AlgElement:
    X = AlgElement.of(X)
    img = elementary_images(name, param)
    out = [0] * 6
    for i, a in enumerate(X.coeffs):
        if a:
            for k in range(6):
                out[k] += a * img[i][k]
    return AlgElement(tuple(out))


def pushforward(phi, X) -> AlgElement:
    """Ad(phi) X by chaining the elementary tables along a word for phi."""
    phi = phi.ess if isinstance(phi, pg.FullElement) else phi
    X = AlgElement.of(X)
    if not phi.exact:
        X = AlgElement(tuple(float(v) for v in X.coeffs))
    for name, param in reversed(pg.elementary_word(phi)):
        X = push_elementary(name, param, X)
    return X


def push_span(phi, vectors):
    return [pushforward(phi, v) for v in vectors]


# ------------------------------------------------------------------ rational linear algebra


def rref(rows, order=None):
    """Reduced row echelon form over the rationals.

    ``order`` lists the column indices in pivot-search order.  Returns
    (rows, pivots) with each row normalized to 1 at its pivot.
    """
    rows = [list(map(rat, r)) for r in rows]
    ncols = len(rows[0]) if rows else 0
    order = list(range(ncols)) if order is None else list(order)
    pivots = []
    r = 0
    for col in order:
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rank(rows) -> int:
    if not rows:
        return 0
    return len(rref([tuple(r) for r in rows])[0])


def in_span(v, rows) -> bool:
    return rank(list(rows) + [tuple(v)]) == rank(rows)


def same_span(a, b) -> bool:
    a = [tuple(v) for v in a]
    b = [tuple(v) for v in b]
    ra = rank(a)
    return ra == rank(b) and rank(a + b) == ra


# ------------------------------------------------------------------ structure report


def _rho(n, which):
    size = n + 1
    M = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if which == "Pt" and i == j + 1:
                M[i][j] = Fraction(n - j)
            elif which == "D" and i == j:
                M[i][j] = Fraction(n - 2 * j)
            elif which == "-K" and i + 1 == j:
                M[i][j] = Fraction(j)
    return M


def structure_predicates() -> dict:
    """Structural facts checked from the structure constants."""
    basis = [AlgElement.basis(i) for i in range(6)]
    f_idx, r_idx = (PT, DD, KK), (GX, PX, II)
    report = {}

    def in_indices(v, idx):
        return all(v[k] == 0 for k in range(6) if k not in idx)

    report["radical_is_ideal"] = all(in_indices(bracket(basis[i], basis[j]), r_idx)
                                     for i in range(6) for j in r_idx)
    derived = [bracket(basis[i], basis[j]) for i in r_idx for j in r_idx]
    report["derived_radical_is_center_line"] = (
        all(in_indices(v, (II,)) for v in derived) and any(not v.is_zero() for v in derived))
    report["levi_factor_sl2"] = (
        bracket(E_D, E_PT) == -2 * E_PT and bracket(E_D, E_K) == 2 * E_K
        and bracket(E_PT, E_K) == E_D
        and all(in_indices(bracket(basis[i], basis[j]), f_idx) for i in f_idx for j in f_idx))
    report["center_is_I"] = all(bracket(E_I, b).is_zero() for b in basis)
    # representation on (G^x, P^x) and on I
    rho_ok = True
    for name, X in (("Pt", E_PT), ("D", E_D), ("-K", -E_K)):
        M = _rho(1, name)
        for j, col_idx in enumerate((GX, PX)):
            img = bracket(X, basis[col_idx])
            if (img[GX], img[PX]) != (M[0][j], M[1][j]) or img[II] != 0:
                rho_ok = False
        if not bracket(X, E_I).is_zero():
            rho_ok = False
    report["levi_action_rho1_plus_rho0"] = rho_ok
    jac = True
    for i in range(6):
        for j in range(6):
            for k in range(6):
                a, b, c = basis[i], basis[j], basis[k]
                s = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
                jac &= s.is_zero()
    report["jacobi"] = jac
    report["antisymmetry"] = all((bracket(basis[i], basis[j]) + bracket(basis[j], basis[i])).is_zero()
                                 for i in range(6) for j in range(6))
    return report


# ------------------------------------------------------------------ float helpers


def expm_apply(M, v, eps: float):
    """expm(eps*M) v in binary64."""
    import numpy as np
    from scipy.linalg import expm

    Mf = np.array([[float(a) for a in row] for row in M])
    return tuple(expm(eps * Mf) @ np.array([float(a) for a in v]))


def scalarext_coeffs(X) -> tuple:
    """Coefficients as ScalarExt values, for callers that mix in sqrt/exp factors."""
    return tuple(ScalarExt.coerce(v) for v in AlgElement.of(X).coeffs)
