"""Acceptance checks shared by the test suite and ``heatsym selftest``.

Each check returns a ``Check(name, passed, detail)``.  All sampling is
seeded; the seed defaults to the HEATSYM_SEED environment variable.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import ScalarExt
from . import burgers as bg
from . import gensym as gs
from . import liealg as la
from . import pointgroup as pg
from . import subalg as sa
from .heatexpr import parse_solution


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def default_seed() -> int:
    return int(os.environ.get("HEATSYM_SEED", "0"))


def kernel():
    return parse_solution("t^(-1/2)*exp(-x^2/(4*t))")


# ------------------------------------------------------------------ 1


def check_group_law(seed=None) -> Check:
    kp2 = pg.compose(pg.K_PRIME, pg.K_PRIME)
    j2 = pg.compose(pg.J, pg.J)
    ok = kp2 == pg.J and j2 == pg.identity()
    return Check("1 exact group law", ok, f"K'^2 = {kp2!r}; J^2 = {j2!r}")


# ------------------------------------------------------------------ 2


def one_parameter_samples():
    """(family, element) pairs built through exp_ess with exact parameters."""
    out = []
    for name in ("Pt", "K", "Gx", "Px", "I"):
        X = la.AlgElement.basis(la.BASIS_NAMES.index(name))
        for eps in (Fraction(1), Fraction(-1, 2), Fraction(2)):
            out.append((f"{name}({eps})", pg.exp_ess(X, eps)))
    for q in (Fraction(2), Fraction(3), Fraction(1, 2)):
        out.append((f"D(q={q})", pg.exp_ess(la.E_D, pg.LogParam(q))))
    for k in range(4):
        out.append((f"Q+({k}pi/2)", pg.exp_ess(la.Q_PLUS, pg.RotParam.quarter(k))))
    return out


def check_residual_preservation(seed=None) -> Check:
    funcs = [gs.heat_polynomial(n) for n in range(5)] + [kernel()]
    cases = 0
    failures = []
    for label, elem in one_parameter_samples():
        for f in funcs:
            img = pg.apply_solution(elem, f)
            cases += 1
            if not all(r.is_zero() for r in img.residuals()):
                failures.append(label)
    return Check("2 residual preservation", not failures and cases >= 36,
                 f"{cases} cases, {len(failures)} failures")


# ------------------------------------------------------------------ 3


def check_determining(seed=None) -> Check:
    rng = random.Random(default_seed() if seed is None else seed)
    bad = 0
    for _ in range(50):
        d = pg.determining_data(pg.random_element(rng))
        Xx = d.X.diff("x")
        if not (Xx * Xx - d.T.diff("t")).is_zero() or not pg.verify_determining(d):
            bad += 1
    return Check("3 determining equations", bad == 0, f"50 elements, {bad} failures")


# ------------------------------------------------------------------ 4


def table_identities():
    """(description, element, input, expected image) for every table entry."""
    E = {n: la.AlgElement.basis(i) for i, n in enumerate(la.BASIS_NAMES)}
    e = Fraction(3, 2)
    q = Fraction(2)
    c, s = Fraction(3, 5), Fraction(4, 5)
    c2, s2 = c * c - s * s, 2 * s * c
    Qm = la.Q_MINUS
    rows = [
        ("Q+ Q-", pg.qplus(c, s), Qm, c2 * Qm + s2 * E["D"]),
        ("Q+ D", pg.qplus(c, s), E["D"], -s2 * Qm + c2 * E["D"]),
        ("Q+ Px", pg.qplus(c, s), E["Px"], c * E["Px"] + s * E["Gx"]),
        ("Q+ Gx", pg.qplus(c, s), E["Gx"], -s * E["Px"] + c * E["Gx"]),
        ("Pt D", pg.pt(e), E["D"], E["D"] - 2 * e * E["Pt"]),
        ("Pt K", pg.pt(e), E["K"], E["K"] - e * E["D"] + e * e * E["Pt"]),
        ("Pt Gx", pg.pt(e), E["Gx"], E["Gx"] - e * E["Px"]),
        ("K D", pg.kk(e), E["D"], E["D"] + 2 * e * E["K"]),
        ("K Pt", pg.kk(e), E["Pt"], E["Pt"] + e * E["D"] + e * e * E["K"]),
        ("K Px", pg.kk(e), E["Px"], E["Px"] + e * E["Gx"]),
        ("D Pt", pg.dil(q), E["Pt"], q * q * E["Pt"]),
        ("D K", pg.dil(q), E["K"], E["K"] * (1 / (q * q))),
        ("D Gx", pg.dil(q), E["Gx"], E["Gx"] * (1 / q)),
        ("D Px", pg.dil(q), E["Px"], q * E["Px"]),
        ("Gx Pt", pg.gx(e), E["Pt"], E["Pt"] + e * E["Px"] - e * e / 4 * E["I"]),
        ("Gx D", pg.gx(e), E["D"], E["D"] + e * E["Gx"]),
        ("Gx Px", pg.gx(e), E["Px"], E["Px"] - e / 2 * E["I"]),
        ("Px D", pg.px(e), E["D"], E["D"] - e * E["Px"]),
        ("Px K", pg.px(e), E["K"], E["K"] - e * E["Gx"] - e * e / 4 * E["I"]),
        ("Px Gx", pg.px(e), E["Gx"], E["Gx"] + e / 2 * E["I"]),
    ]
    jrow = ("J (Gx, Px)", pg.J, [E["Gx"], E["Px"]], [-E["Gx"], -E["Px"]])
    krow = ("K' (Pt, D, K, Gx, Px)", pg.K_PRIME,
            [E["Pt"], E["D"], E["K"], E["Gx"], E["Px"]],
            [E["K"], -E["D"], E["Pt"], E["Px"], -E["Gx"]])
    return rows, [jrow, krow]


def exact_ad_exp(X, param):
    """expm(eps * ad_group X) as an exact matrix for the reparametrized directions."""
    idx = [i for i, v in enumerate(X.coeffs) if v]
    name = la.BASIS_NAMES[idx[0]] if len(idx) == 1 else None
    if X == la.Q_PLUS:
        c, s = param.c, param.s
        imgs = la.elementary_images("Qp", (c, s))
    elif name == "D":
        imgs = la.elementary_images("D", param.q)
    else:
        N = la.ad_matrix_group(X)
        eps = Fraction(param)
        size = 6
        result = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
        term = [row[:] for row in result]
        for k in range(1, 8):
            term = [[sum(term[i][m] * N[m][j] for m in range(size)) * eps / k for j in range(size)]
                    for i in range(size)]
            result = [[result[i][j] + term[i][j] for j in range(size)] for i in range(size)]
        return result
    return [[Fraction(imgs[j][i]) for j in range(6)] for i in range(6)]


def check_ad_exp(seed=None) -> Check:
    rng = random.Random(default_seed() if seed is None else seed)
    rows, multi = table_identities()
    table_bad = []
    count = 0
    for desc, elem, X, expected in rows:
        count += 1
        if la.pushforward(elem, X) != expected or la.pushforward_closed(elem, X) != expected:
            table_bad.append(desc)
    for desc, elem, Xs, exps in multi:
        count += 1
        for X, exp_ in zip(Xs, exps):
            if la.pushforward(elem, X) != exp_ or la.pushforward_closed(elem, X) != exp_:
                table_bad.append(desc)
    # exact Ad-exp on reparametrized one-parameter subgroups
    exact_bad = 0
    for i in range(6):
        X = la.AlgElement.basis(i)
        for _ in range(20):
            if la.BASIS_NAMES[i] == "D":
                param = pg.LogParam(Fraction(rng.randint(1, 9), rng.randint(1, 9)))
            else:
                param = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            g = pg.exp_ess(X, param)
            M = exact_ad_exp(X, param)
            for j in range(6):
                Y = la.AlgElement.basis(j)
                if la.pushforward(g, Y).coeffs != tuple(M[r][j] for r in range(6)):
                    exact_bad += 1
    for k in range(4):
        param = pg.RotParam.quarter(k)
        g = pg.exp_ess(la.Q_PLUS, param)
        M = exact_ad_exp(la.Q_PLUS, param)
        for j in range(6):
            if la.pushforward(g, la.AlgElement.basis(j)).coeffs != tuple(M[r][j] for r in range(6)):
                exact_bad += 1
    # binary64 check
    worst = 0.0
    for i in range(6):
        X = la.AlgElement.basis(i)
        Xf = tuple(float(v) for v in X.coeffs)
        for _ in range(20):
            eps = rng.uniform(-2.0, 2.0)
            g = pg.exp_ess(Xf, eps)
            for j in range(6):
                Y = la.AlgElement.basis(j)
                got = la.pushforward(g, Y).coeffs
                want = la.expm_apply(la.ad_matrix_group(X), Y.coeffs, eps)
                worst = max(worst, max(abs(a - b) for a, b in zip(got, want)))
    ok = bool(not table_bad and exact_bad == 0 and worst <= 1e-9)
    return Check("4 Ad-exp consistency", ok,
                 f"{count} table identities ({len(table_bad)} bad), exact Ad-exp bad {exact_bad}, "
                 f"float max error {worst:.2e}")


# ------------------------------------------------------------------ 5


def _random_nilpotent_direction(rng):
    g = pg._random_sl2(rng)
    kappa = pg.random_rational(rng) or Fraction(1)
    M = pg._matmul(pg._matmul(g, (0, kappa, 0, 0)), pg._matinv(g))
    d, p, k = M[0], M[1], -M[2]
    return la.AlgElement((p, d, k, pg.random_rational(rng), pg.random_rational(rng),
                          pg.random_rational(rng)))


def exp_samples(rng, n_exact=250, n_float=250):
    out = []
    while len(out) < n_exact:
        kind = rng.randrange(3)
        if kind == 0:
            X = _random_nilpotent_direction(rng)
            out.append(pg.exp_ess(X, pg.random_rational(rng, 5)))
        elif kind == 1:
            a, b = pg.random_rational(rng), pg.random_rational(rng)
            c = Fraction(rng.randint(-6, 6), 2) - a * b / 2
            q = Fraction(rng.randint(1, 7), rng.randint(1, 7))
            out.append(pg.exp_ess(la.AlgElement((0, 1, 0, a, b, c)), pg.LogParam(q)))
        else:
            m, n = rng.randint(1, 6), rng.randint(0, 6)
            c, s = Fraction(m * m - n * n, m * m + n * n), Fraction(2 * m * n, m * m + n * n)
            if rng.random() < 0.5:
                s = -s
            out.append(pg.exp_ess(la.Q_PLUS, pg.RotParam(c, s)))
    for _ in range(n_float):
        X = tuple(rng.uniform(-1.5, 1.5) for _ in range(6))
        out.append(pg.exp_ess(X, rng.uniform(-3.0, 3.0)))
    return out


def negative_trace_samples(rng, n=20):
    out = []
    while len(out) < n:
        e = pg.random_non_exp(rng)
        if e.trace() <= -2 and e.A != (-1, 0, 0, -1):
            out.append(e)
    return out


def check_exp_membership(seed=None) -> Check:
    rng = random.Random(default_seed() if seed is None else seed)
    samples = exp_samples(rng)
    pos_bad = sum(not pg.is_in_exp_ess(e) for e in samples)
    negs = negative_trace_samples(rng)
    neg_bad = sum(pg.is_in_exp_ess(e) for e in negs)
    ok = pos_bad == 0 and neg_bad == 0 and pg.is_in_exp_ess(pg.J) and not pg.is_in_exp_ess(pg.I_PRIME)
    return Check("5 exp membership", ok,
                 f"{len(samples)} exp outputs ({pos_bad} rejected), {len(negs)} negatives ({neg_bad} accepted)")


# ------------------------------------------------------------------ 6


def family_samples():
    return sa.canonical_entries(nu_samples=(Fraction(0), Fraction(3, 2), Fraction(-2)),
                                mu_samples=(Fraction(0), Fraction(1, 3), Fraction(5)))


def _random_recombination(rng, vecs):
    n = len(vecs)
    while True:
        R = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        out = [tuple(sum(R[i][j] * vecs[j][k] for j in range(n)) for k in range(6)) for i in range(n)]
        if la.rank(out) == n:
            return out


def check_subalgebra_roundtrip(seed=None, conjugations: int = 100) -> Check:
    rng = random.Random(default_seed() if seed is None else seed)
    bad = []
    total = 0
    entries = family_samples()
    for label, params in entries:
        base = [v.coeffs for v in sa.canonical_basis(label, params)]
        expected = (label, tuple(sorted((k, Fraction(v)) for k, v in params.items())))
        for _ in range(conjugations):
            phi = pg.random_element(rng)
            S = _random_recombination(rng, [la.pushforward(phi, v).coeffs for v in base])
            total += 1
            try:
                cf = sa.canonicalize(S)
            except Exception as exc:  # reported as a failure
                bad.append(f"{label}: {exc}")
                continue
            target = [v.coeffs for v in sa.canonical_basis(cf.label, cf.params)]
            pushed = [la.pushforward_closed(cf.witness, v).coeffs for v in S]
            if cf.key() != expected or not la.same_span(pushed, target):
                bad.append(f"{label} -> {cf.label}")
    labels = {label for label, _ in entries}
    return Check("6 subalgebra round trip", not bad and len(labels) == 27,
                 f"{len(labels)} labels, {len(entries)} representatives, {total} conjugations, {len(bad)} failures")


# ------------------------------------------------------------------ 7


def check_weyl(seed=None) -> Check:
    bad = 0
    for k in range(5):
        for l in range(5):
            for k2 in range(5):
                for l2 in range(5):
                    if gs.commutator_closed(k, l, k2, l2) != gs.vf_bracket(gs.GenSymOp.q(k, l),
                                                                          gs.GenSymOp.q(k2, l2)):
                        bad += 1
    dims_ok = all(gs.dim_lambda(n)[0] == n + 1 for n in range(7))
    return Check("7 Weyl algebra oracle", bad == 0 and dims_ok,
                 f"625 identities ({bad} bad), dim_lambda(n) = n+1 for n <= 6: {dims_ok}")


# ------------------------------------------------------------------ 8


def check_hopf_cole(seed=None) -> Check:
    rng = random.Random(default_seed() if seed is None else seed)
    sols = [gs.heat_polynomial(n) for n in range(5)] + [kernel(), parse_solution("exp(2*x+4*t)")]
    inter_bad = 0
    for _ in range(20):
        phi = pg.random_element(rng)
        u = rng.choice(sols)
        lhs = bg.hopf_cole(pg.apply_solution(phi, u))
        rhs = bg.apply_solution_b(bg.rho_project(phi), bg.hopf_cole(u))
        if lhs != rhs:
            inter_bad += 1
    hom_bad = 0
    for _ in range(100):
        p, q = pg.random_element(rng), pg.random_element(rng)
        if bg.rho_project(pg.compose(p, q)) != bg.compose_b(bg.rho_project(p), bg.rho_project(q)):
            hom_bad += 1
    ker_bad = 0
    for i in range(200):
        if i % 2:
            phi = pg.random_element(rng)
        else:
            phi = pg.r_part_element((0, 0), ScalarExt(pg.random_rational(rng) or 1, rng.choice([1, 2, 3]),
                                                      pg.random_rational(rng)))
        if (bg.rho_project(phi) == bg.IDENTITY_B) != pg.is_central(phi):
            ker_bad += 1
    ok = inter_bad == 0 and hom_bad == 0 and ker_bad == 0
    return Check("8 Hopf-Cole intertwining", ok,
                 f"intertwining bad {inter_bad}/20, homomorphism bad {hom_bad}/100, kernel bad {ker_bad}/200")


# ------------------------------------------------------------------ 9


def check_burgers_connected(seed=None) -> Check:
    report = bg.connectedness_report(seed=default_seed() if seed is None else seed)
    ok = all(report.values())
    failed = [k for k, v in report.items() if not v]
    return Check("9 Burgers connectedness", ok, "all facts hold" if ok else f"failed: {failed}")


# ------------------------------------------------------------------ 10


def check_pseudo_discrete(seed=None) -> Check:
    seed = default_seed() if seed is None else seed
    vj = pg.is_pseudo_discrete(pg.J, samples=1000, seed=seed)
    vid = pg.is_pseudo_discrete(pg.identity(), samples=1000, seed=seed)
    rng = random.Random(seed)
    sample = [pg.K_PRIME] + [pg.random_element(rng, positive_sigma=True) for _ in range(5)]
    deterministic = all(pg.is_pseudo_discrete(e, 1000, seed) == pg.is_pseudo_discrete(e, 1000, seed)
                        for e in sample)
    ok = (vj.verdict == "true" and vj.certificate is not None
          and vid.verdict == "false" and vid.witness is not None
          and not pg.is_in_exp_ess(pg.compose(pg.identity(), vid.witness))
          and deterministic)
    return Check("10 pseudo-discrete", ok,
                 f"J: {vj.verdict}; id: {vid.verdict}; seed-deterministic: {deterministic}")


CHECKS = (check_group_law, check_residual_preservation, check_determining, check_ad_exp,
          check_exp_membership, check_subalgebra_roundtrip, check_weyl, check_hopf_cole,
          check_burgers_connected, check_pseudo_discrete)


def run_all(seed=None, parallel: int = 1):
    if parallel > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(parallel) as pool:
            futures = [pool.submit(fn, seed) for fn in CHECKS]
            return [f.result() for f in futures]
    return [fn(seed) for fn in CHECKS]


def format_table(results) -> str:
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    return "\n".join(lines)

