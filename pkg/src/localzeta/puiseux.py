"""Newton-Puiseux factorization of the polynomial part and the invariant
mu_0: the largest multiplicity among real branches (including the x-axis
factor).

The factorization

    f(t^N, y) = u(t^N, y) * t^(N*m0) * prod_j (y - phi_j(t))^m_j

is computed by the classical polygon iteration.  Multiplicities come from an
exact square-free decomposition over Q (each square-free factor has simple
Puiseux roots), so the expansion itself only ever continues simple roots.
Coefficients stay exact rationals for as long as every chosen edge root is
rational; the first irrational root switches the affected branch to certified
ball arithmetic.  Branch realness is decided at the finitely many root
choices: exact isolation certifies real algebraic roots, exact root counts
certify complex ones, and an implicit-function-theorem tail computed from
real data is real outright.

mu_0 is the maximum multiplicity over *real places* of the curve.  Real
places tangent to the y-axis are invisible in the y-over-x factorization of
f(x, y) itself (their y-branches come in complex pairs) but appear as real
branches of f(-x, y); mu_0 therefore takes the maximum over both
orientations, which is what makes it match the coordinate-free definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import mpmath

from .arith import (
    DEFAULT_PREC,
    MAX_PREC,
    Ball,
    BivariateFunction,
    BivariatePolynomial,
    RealStatus,
    TruncatedSeries,
    cadd,
    cdiv,
    certify_real,
    cmul,
    cneg,
    coeff_is_nonzero,
    cpow,
    csub,
    is_exact_zero,
)
from .errors import FlatInput, PrecisionExhausted, TruncationUnderflow
from .newton import staircase_hull

_MAX_DEPTH = 64


# ---------------------------------------------------------------------------
# public data types
# ---------------------------------------------------------------------------


@dataclass
class PuiseuxBranch:
    """One factor (y - phi_j(t))^(m_j): ramified truncated series with a
    multiplicity, a realness verdict, and an optional flat tag."""

    series: TruncatedSeries
    multiplicity: int
    realness: RealStatus
    flat_tag: object | None = None

    def to_json_dict(self):
        coeffs = []
        for c in self.series.coeffs:
            if isinstance(c, Fraction):
                coeffs.append({"mid": [str(c), "0"], "rad": 0.0})
            else:
                coeffs.append(
                    {"mid": [mpmath.nstr(c.re, 20), mpmath.nstr(c.im, 20)], "rad": c.rad}
                )
        return {
            "N": self.series.ramification,
            "coeffs": coeffs,
            "multiplicity": self.multiplicity,
            "realness": self.realness.value,
        }


@dataclass
class Factorization:
    ramification: int
    x_multiplicity: int
    branches: list
    unit_constant: object
    truncation: int

    def to_json_dict(self):
        return {
            "N": self.ramification,
            "m0": self.x_multiplicity,
            "unit_constant": str(self.unit_constant),
            "branches": [b.to_json_dict() for b in self.branches],
        }


@dataclass(frozen=True)
class RealIndexSet:
    """Indices of real branches: ``certain`` always real (0 is the x-axis
    slot), ``possible`` adds the unresolved ones."""

    certain: frozenset
    possible: frozenset

    @property
    def exact(self):
        return self.certain == self.possible


# ---------------------------------------------------------------------------
# coefficient-list helpers (series as plain lists, index = exponent)
# ---------------------------------------------------------------------------


def _list_mul(a, b, cap):
    out = [Fraction(0)] * (cap + 1)
    for i, ca in enumerate(a):
        if i > cap or is_exact_zero(ca):
            continue
        for j in range(0, cap + 1 - i):
            if j >= len(b):
                break
            cb = b[j]
            if is_exact_zero(cb):
                continue
            out[i + j] = cadd(out[i + j], cmul(ca, cb))
    return out


def _list_inv(b, cap):
    c0 = b[0]
    if not coeff_is_nonzero(c0):
        raise PrecisionExhausted("series inversion at a non-unit")
    out = [cdiv(Fraction(1), c0)] + [Fraction(0)] * cap
    for n in range(1, cap + 1):
        acc = Fraction(0)
        for i in range(1, n + 1):
            if i < len(b) and not is_exact_zero(b[i]):
                acc = cadd(acc, cmul(b[i], out[n - i]))
        out[n] = cneg(cdiv(acc, c0))
    return out


def _eval_poly_at_list(F, ylist, cap):
    """F(s, y(s)) as a coefficient list mod s^(cap+1), by Horner in y."""
    degy = F.degree_y()
    rows = {}
    for (j, k), c in F.terms.items():
        if j <= cap:
            row = rows.setdefault(k, [Fraction(0)] * (cap + 1))
            row[j] = cadd(row[j], c)
    res = rows.get(degy, [Fraction(0)] * (cap + 1))
    for k in range(degy - 1, -1, -1):
        res = _list_mul(res, ylist, cap)
        row = rows.get(k)
        if row:
            res = [cadd(a, b) for a, b in zip(res, row)]
    return res


def _implicit_tail(F, B):
    """Solve F(s, y(s)) = 0 for y with y(0) = 0 when the root is simple
    (ord_y F(0, .) = 1), to order B, by Newton iteration with order doubling.
    Returns the coefficient list of y."""
    if B < 0:
        return []
    dF = F.diff_y()
    y = [Fraction(0)] * (B + 1)
    correct = 1
    while correct <= B:
        cap = min(2 * correct, B)
        Gv = _eval_poly_at_list(F, y, cap)
        Dv = _eval_poly_at_list(dF, y, cap)
        corr = _list_mul(Gv, _list_inv(Dv, cap), cap)
        y = [csub(a, b) for a, b in zip(y[: cap + 1], corr)] + y[cap + 1 :]
        correct = cap if cap > correct else B + 1
    resid = _eval_poly_at_list(F, y, B)
    for c in resid:
        if coeff_is_nonzero(c):
            raise PrecisionExhausted("implicit series solve did not converge")
    return y


# ---------------------------------------------------------------------------
# root finding for edge polynomials
# ---------------------------------------------------------------------------


def _roots_exact(coeffs, prec):
    """Roots of an exact rational univariate polynomial, with multiplicity
    and realness certificates.  coeffs[i] multiplies z^i; constant term
    nonzero by construction."""
    import sympy

    z = sympy.Symbol("z")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * z**k for k, c in enumerate(coeffs)
    )
    out = []
    for fac, mult in sympy.factor_list(sympy.Poly(expr, z))[1]:
        deg = fac.degree()
        if deg == 1:
            a1, a0 = fac.all_coeffs()
            r = sympy.Rational(-a0, a1)
            out.append((Fraction(int(r.p), int(r.q)), mult, RealStatus.REAL))
            continue
        # isolate the real roots exactly
        eps = sympy.Rational(1, sympy.Integer(2) ** prec)
        real_balls = []
        for (a, b), _m in fac.intervals():
            a2, b2 = fac.refine_root(a, b, eps=eps)
            real_balls.append(
                Ball.from_real_interval(
                    Fraction(int(a2.p), int(a2.q)), Fraction(int(b2.p), int(b2.q)), prec
                )
            )
        n_real = len(real_balls)
        for rb in real_balls:
            out.append((rb, mult, RealStatus.REAL))
        n_complex = deg - n_real
        if n_complex:
            with mpmath.workprec(prec + 32):
                mp_coeffs = [
                    mpmath.mpf(int(sympy.Rational(c).p)) / int(sympy.Rational(c).q)
                    for c in fac.all_coeffs()
                ]
                roots = mpmath.polyroots(mp_coeffs, maxsteps=200, extraprec=prec)
            # drop the numeric copies of the isolated real roots: keep the
            # n_complex roots of largest |Im|
            roots = sorted(roots, key=lambda r: -abs(mpmath.im(r)))[:n_complex]
            if len(roots) != n_complex:
                raise PrecisionExhausted("complex root count mismatch")
            rad = _root_radius_bound(mp_coeffs, roots, prec)
            for r in roots:
                ball = Ball.from_mpc(r, rad, prec, real_cert=False)
                ball.nonreal_cert = True
                out.append((ball, mult, RealStatus.NONREAL))
    return _sorted_roots(out)


def _root_radius_bound(mp_coeffs, roots, prec):
    """Heuristic-but-generous enclosure radius: residual bound
    (|p(z)|/|lc|)^(1/n) maximized over the computed roots, floored at the
    working epsilon."""
    n = len(mp_coeffs) - 1
    lc = abs(mp_coeffs[0])
    worst = 0.0
    with mpmath.workprec(prec + 32):
        for r in roots:
            val = abs(mpmath.polyval(mp_coeffs, r)) / lc
            worst = max(worst, float(val) ** (1.0 / n) if val > 0 else 0.0)
    scale = max((abs(complex(r)) for r in roots), default=1.0) or 1.0
    return max(worst * 4.0, scale * 2.0 ** (8 - prec))


def _interval_newton_real(coeffs, x0, r, prec):
    """Certify a unique real root of a real-ball-coefficient polynomial in
    [x0 - r, x0 + r]; returns a real-certified Ball or None."""
    X = Ball(mpmath.mpf(x0), mpmath.mpf(0), r, prec, real_cert=True)
    dcoeffs = [cmul(c, Fraction(k)) for k, c in enumerate(coeffs)][1:]
    dX = _horner_ball(dcoeffs, X, prec)
    if not dX.is_nonzero():
        return None
    mid = Ball(mpmath.mpf(x0), mpmath.mpf(0), 0.0, prec, real_cert=True)
    pm = _horner_ball(coeffs, mid, prec)
    newt = mid - pm / dX
    if abs(float(newt.re) - float(x0)) + newt.rad < r:
        return Ball(newt.re, mpmath.mpf(0), newt.rad, prec, real_cert=True)
    return None


def _horner_ball(coeffs, X, prec):
    acc = Ball.from_fraction(Fraction(0), prec)
    for c in reversed(coeffs):
        if isinstance(c, Fraction):
            c = Ball.from_fraction(c, prec)
        acc = acc * X + c
    return acc


def _roots_ball(coeffs, prec):
    """Roots of a ball-coefficient polynomial via midpoint polyroots with
    cluster detection.  Realness: interval Newton (real-certified
    coefficients) or imaginary-part exclusion; otherwise UNRESOLVED."""
    all_real = True
    with mpmath.workprec(prec + 32):
        mp_coeffs = []
        for c in reversed(coeffs):
            if isinstance(c, Fraction):
                mp_coeffs.append(mpmath.mpf(c.numerator) / c.denominator)
            else:
                all_real = all_real and c.real_cert
                mp_coeffs.append(mpmath.mp.make_mpc((c._re, c._im)))
        if not coeff_is_nonzero(coeffs[-1]):
            raise PrecisionExhausted("leading edge coefficient not certified nonzero")
        roots = mpmath.polyroots(mp_coeffs, maxsteps=200, extraprec=prec)
    rad = _root_radius_bound(mp_coeffs, roots, prec)
    # coefficient uncertainty contributes too
    coeff_rad = max((c.rad for c in coeffs if isinstance(c, Ball)), default=0.0)
    rad = max(rad, coeff_rad * 4.0)
    # cluster roots within mutual distance 4*rad
    clusters = []
    for r in sorted(roots, key=lambda w: (float(mpmath.re(w)), float(mpmath.im(w)))):
        for cl in clusters:
            if abs(complex(r) - complex(cl[0][0])) <= 4.0 * rad:
                cl.append((r,))
                break
        else:
            clusters.append([(r,)])
    out = []
    for cl in clusters:
        zs = [mpmath.mpc(t[0]) for t in cl]
        center = sum(zs) / len(zs)
        spread = max((abs(z - center) for z in zs), default=0.0)
        crad = float(spread) + rad
        mu = len(zs)
        status = RealStatus.UNRESOLVED
        ball = Ball.from_mpc(center, crad, prec)
        if abs(float(ball.im)) > crad:
            status = RealStatus.NONREAL
            ball.nonreal_cert = True
        elif all_real and mu == 1:
            certified = _interval_newton_real(
                coeffs, float(mpmath.re(center)), max(crad * 8.0, 2.0 ** (6 - prec)), prec
            )
            if certified is not None:
                ball = certified
                status = RealStatus.REAL
        out.append((ball, mu, status))
    return _sorted_roots(out)


def _sorted_roots(roots):
    def key(item):
        c = item[0]
        if isinstance(c, Fraction):
            return (0, float(c), 0.0)
        return (1, float(c.re), float(c.im))

    return sorted(roots, key=key)


def _qth_roots(z0, q, prec, status):
    """All q-th roots of an edge root, with realness certificates."""
    if q == 1:
        return [(z0, status)]
    out = []
    if isinstance(z0, Fraction) and status is RealStatus.REAL:
        root = _exact_qth_root(z0, q)
        if root is not None:
            out.append((root, RealStatus.REAL))
            if q % 2 == 0:
                out.append((-root, RealStatus.REAL))
            reals = [r for r, _ in out]
            out.extend(_complex_qth_roots(z0, q, prec, reals))
            return out
    # numeric path
    if status is RealStatus.REAL:
        pos = (z0 > 0) if isinstance(z0, Fraction) else (float(z0.re) > 0)
        with mpmath.workprec(prec + 16):
            mag = (
                mpmath.mpf(abs(z0.numerator)) / z0.denominator
                if isinstance(z0, Fraction)
                else abs(mpmath.mpc(z0.re, z0.im))
            )
            rr = mpmath.root(mag, q)
        base_rad = _qth_root_radius(z0, rr, q)
        reals = []
        if pos:
            reals.append(Ball(rr, mpmath.mpf(0), base_rad, prec, real_cert=True))
            if q % 2 == 0:
                reals.append(Ball(-rr, mpmath.mpf(0), base_rad, prec, real_cert=True))
        else:
            if q % 2 == 1:
                reals.append(Ball(-rr, mpmath.mpf(0), base_rad, prec, real_cert=True))
        for r in reals:
            out.append((r, RealStatus.REAL))
        out.extend(_complex_qth_roots(z0, q, prec, [r for r, _ in out]))
        return out
    # z0 nonreal or unresolved: no real q-th root can exist for nonreal z0
    with mpmath.workprec(prec + 16):
        z = (
            mpmath.mpc(mpmath.mpf(z0.numerator) / z0.denominator)
            if isinstance(z0, Fraction)
            else mpmath.mpc(z0.re, z0.im)
        )
        base = mpmath.root(z, q)
        rad = _qth_root_radius(z0, abs(base), q)
        for m in range(q):
            w = base * mpmath.exp(2j * mpmath.pi * m / q)
            b = Ball.from_mpc(w, rad, prec)
            if status is RealStatus.NONREAL:
                b.nonreal_cert = True
            out.append((b, status))
    return out


def _exact_qth_root(z0, q):
    """Rational q-th root of a rational number, or None."""
    if z0 == 0:
        return Fraction(0)
    sign = 1
    if z0 < 0:
        if q % 2 == 0:
            return None
        sign = -1
        z0 = -z0
    num = _iroot(z0.numerator, q)
    den = _iroot(z0.denominator, q)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def _iroot(n, q):
    r = round(n ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == n:
            return cand
    return None


def _complex_qth_roots(z0, q, prec, known_reals):
    """The non-real q-th roots: all q-th roots except those matching a known
    real one.  Roots at angle 2*pi*m/q off a real base are real only for
    m = 0 or m = q/2, so the exclusion is structural."""
    out = []
    real_count = len(known_reals)
    with mpmath.workprec(prec + 16):
        z = (
            mpmath.mpc(mpmath.mpf(z0.numerator) / z0.denominator, 0)
            if isinstance(z0, Fraction)
            else mpmath.mpc(z0.re, z0.im)
        )
        base = mpmath.root(z, q)
        rad = _qth_root_radius(z0, abs(base), q)
        taken = 0
        for m in range(q):
            w = base * mpmath.exp(2j * mpmath.pi * m / q)
            near_real = abs(mpmath.im(w)) < 8 * rad + abs(base) * 1e-20
            if near_real and taken < real_count:
                taken += 1
                continue
            b = Ball.from_mpc(w, rad, prec)
            b.nonreal_cert = True
            out.append((b, RealStatus.NONREAL))
    return out


def _qth_root_radius(z0, root_mag, q):
    z_rad = 0.0 if isinstance(z0, Fraction) else z0.rad
    mag = float(root_mag) or 1.0
    z_mag = mag**q
    rel = (z_rad / z_mag if z_mag > 0 else 0.0) / q
    return (rel * mag + mag * 2.0 ** (10 - 53)) * 1.0000001 + mag * 1e-28


# ---------------------------------------------------------------------------
# the polygon recursion
# ---------------------------------------------------------------------------


def _certified_support(F):
    pts = [key for key, c in F.terms.items() if coeff_is_nonzero(c)]
    if not pts and F.terms:
        raise PrecisionExhausted("no certified-nonzero support")
    return pts


def _compact_edges(F):
    """Edges of the lower polygon over the certified support; returns a list
    of (q, p, edge_points) with theta = p/q the branch exponent."""
    hull = staircase_hull(_certified_support(F))
    edges = []
    for a, b in zip(hull, hull[1:]):
        dj = b[0] - a[0]
        dk = a[1] - b[1]
        g = math.gcd(dj, dk)
        l1, l2 = dk // g, dj // g
        edges.append((l1, l2, a, b))
    return edges


def _edge_poly(F, l1, l2, a, b):
    """Edge polynomial E(z) with z standing for c^l1 (c the branch leading
    coefficient); E has nonzero constant and leading terms."""
    level = l1 * a[0] + l2 * a[1]
    k1 = b[1]
    D = (a[1] - b[1]) // l1
    coeffs = [Fraction(0)] * (D + 1)
    for (j, k), c in F.terms.items():
        if l1 * j + l2 * k == level and b[0] >= j >= a[0] and (k - k1) % l1 == 0:
            coeffs[(k - k1) // l1] = cadd(coeffs[(k - k1) // l1], c)
    if not coeff_is_nonzero(coeffs[0]) or not coeff_is_nonzero(coeffs[-1]):
        raise PrecisionExhausted("edge endpoint coefficient not certified nonzero")
    return coeffs


def _transform(F, q, p, c, mu, cap):
    """G(s, y) = F(s^q, s^p * (c + y)) / s^v truncated at s-order cap.

    The returned polynomial has ord_y G(0, .) = mu; the structurally-zero
    coefficients (0, k) with k < mu are removed after a containment check.
    """
    rows = {}
    for (j, k), coeff in F.terms.items():
        base = q * j + p * k  # s-order of x^j y^k before the (c+y)^k split
        for i in range(0, k + 1):
            comb = Fraction(math.comb(k, i))
            term = cmul(comb, cpow(c, k - i)) if k - i else comb
            val = cmul(coeff, term)
            key = (base, i)
            cur = rows.get(key)
            rows[key] = cadd(cur, val) if cur is not None else val
    poly = BivariatePolynomial(rows)
    # shift down by the minimal s-order v with a certified-nonzero coefficient
    v = None
    for (e, _i), coeff in poly.terms.items():
        if coeff_is_nonzero(coeff):
            v = e if v is None else min(v, e)
    if v is None:
        raise PrecisionExhausted("transform produced no certified coefficients")
    out = {}
    for (e, i), coeff in poly.terms.items():
        if e - v > cap:
            continue
        if e < v:
            if coeff_is_nonzero(coeff):
                raise PrecisionExhausted("transform valuation not certified")
            continue
        out[(e - v, i)] = coeff
    G = BivariatePolynomial(out)
    # structural zeros below the known y-order
    for k in range(mu):
        cc = G.terms.get((0, k))
        if cc is not None:
            if coeff_is_nonzero(cc):
                raise PrecisionExhausted("transform lost the root structure")
            del G.terms[(0, k)]
    return G


def _expand(F, budget, T, prec, depth=0):
    """All Puiseux expansions y(x), y(0) = 0, of the square-free F.

    ``budget`` is the maximal useful exponent in the *current* parameter
    (exponents beyond it land past the global truncation T in every possible
    final ramification, since the final parameter only refines the current
    one).  Returns a list of (terms, status) with terms a list of
    (Fraction exponent, coefficient, status); every expansion is simple.
    """
    if depth > _MAX_DEPTH:
        raise PrecisionExhausted("expansion recursion too deep")
    out = []
    kY = F.y_order()
    if kY > 0:
        if kY != 1:
            raise PrecisionExhausted("square-free input with multiple y-factor")
        out.append(([], RealStatus.REAL))
        F = F.shift_y(-1)
    support = _certified_support(F)
    if not support:
        return out
    if not any(j == 0 for j, _k in support):
        raise PrecisionExhausted("x divides a transformed polynomial unexpectedly")
    n = min(k for j, k in support if j == 0)
    if n == 0:
        return out
    produced = 0
    for l1, l2, a, b in _compact_edges(F):
        theta = Fraction(l2, l1)
        E = _edge_poly(F, l1, l2, a, b)
        exact = all(isinstance(cc, Fraction) for cc in E)
        roots = _roots_exact(E, prec) if exact else _roots_ball(E, prec)
        # sub-parameter s has x_cur = s^l1; useful s-exponents stay <= T
        sub_budget = min(l1 * budget, T) - l2
        for z0, mu, status in roots:
            for c, cstat in _qth_roots(z0, l1, prec, status):
                produced += mu
                if sub_budget < 0:
                    if mu > 1:
                        raise TruncationUnderflow(
                            "budget too small to separate a multiple branch"
                        )
                    out.append(([(theta, c, cstat)], cstat))
                    continue
                G = _transform(F, l1, l2, c, mu, sub_budget + 1)
                prefix = [(theta, c, cstat)]
                if mu == 1:
                    tail = _implicit_tail(G, sub_budget)
                    terms = list(prefix)
                    for e, coeff in enumerate(tail):
                        if e == 0 or is_exact_zero(coeff):
                            continue
                        terms.append(
                            (theta + Fraction(e, l1), coeff, certify_real(coeff))
                        )
                    st = _combine_status([cstat] + [t[2] for t in terms[1:]])
                    out.append((terms, st))
                else:
                    subs = _expand(G, sub_budget, T, prec, depth + 1)
                    if len(subs) != mu:
                        raise PrecisionExhausted(
                            "edge root of multiplicity %d split into %d branches"
                            % (mu, len(subs))
                        )
                    for sub_terms, sub_status in subs:
                        terms = list(prefix)
                        for se, sc, sstat in sub_terms:
                            terms.append((theta + se / l1, sc, sstat))
                        st = _combine_status([cstat, sub_status])
                        out.append((terms, st))
    if produced != n:
        raise PrecisionExhausted(
            "branch count mismatch: polygon promised %d, produced %d" % (n, produced)
        )
    return out


def _combine_status(statuses):
    if any(s is RealStatus.NONREAL for s in statuses):
        return RealStatus.NONREAL
    if any(s is RealStatus.UNRESOLVED for s in statuses):
        return RealStatus.UNRESOLVED
    return RealStatus.REAL


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _sqf_factors(poly):
    """Square-free decomposition over Q as [(BivariatePolynomial, int)]."""
    import sympy

    x, y = sympy.symbols("x y")
    expr = poly.to_sympy(x, y)
    _c, factors = sympy.sqf_list(sympy.Poly(expr, x, y))
    out = []
    for fac, mult in factors:
        out.append((BivariatePolynomial.from_sympy(fac.as_expr(), x, y), int(mult)))
    return out


def expansions_with_mult(poly, T, prec=DEFAULT_PREC, max_prec=MAX_PREC):
    """Raw branch expansions of a polynomial with multiplicities.

    Returns (m0, branches) with branches a list of (terms, multiplicity,
    status) where terms is a list of (Fraction exponent, coefficient,
    status); exponents are in x-units.  Precision escalates on failure.
    """
    m0 = poly.x_order()
    F = poly.shift_x(-m0)
    last_exc = None
    p = prec
    cur_T = T
    while True:
        try:
            out = []
            for S, e in _sqf_factors(F):
                if S.degree_y() == 0 and S.degree_x() == 0:
                    continue
                for terms, status in _expand(S, cur_T, cur_T, p):
                    out.append((terms, e, status))
            return m0, out
        except TruncationUnderflow as exc:
            last_exc = exc
            if cur_T >= 1024:
                raise
            cur_T *= 2
        except PrecisionExhausted as exc:
            last_exc = exc
            if p * 2 > max_prec:
                raise
            p *= 2


def newton_puiseux(f, T=64, prec=DEFAULT_PREC, max_prec=MAX_PREC):
    """Puiseux factorization of the polynomial part of ``f``.

    Precision escalates (doubling up to ``max_prec``) whenever a realness or
    separation decision stays uncertified; surviving UNRESOLVED verdicts are
    reported, not raised.
    """
    if isinstance(f, BivariateFunction):
        f.require_nonflat()
        poly = f.polynomial
    else:
        poly = f
        if poly.is_zero():
            raise FlatInput("polynomial part is zero")
    last_exc = None
    p = prec
    while p <= max_prec:
        try:
            fac = _newton_puiseux_once(poly, T, p)
        except PrecisionExhausted as exc:
            last_exc = exc
            p *= 2
            continue
        if any(b.realness is RealStatus.UNRESOLVED for b in fac.branches) and p * 2 <= max_prec:
            p *= 2
            continue
        return fac
    if last_exc is not None:
        raise last_exc
    raise PrecisionExhausted("puiseux factorization failed at maximal precision")


def _newton_puiseux_once(poly, T, prec):
    m0 = poly.x_order()
    F = poly.shift_x(-m0)
    expansions = []
    for S, e in _sqf_factors(F):
        if S.degree_y() == 0 and S.degree_x() == 0:
            continue
        for terms, status in _expand(S, T, T, prec):
            expansions.append((terms, e, status))
    # global ramification
    N = 1
    for terms, _e, _s in expansions:
        for exp, _c, _st in terms:
            N = _lcm(N, exp.denominator)
    branches = []
    for terms, mult, status in expansions:
        coeffs = [Fraction(0)] * (T + 1)
        for exp, c, _st in terms:
            texp = exp * N
            assert texp.denominator == 1
            if texp <= T:
                coeffs[int(texp)] = c
        series = TruncatedSeries(N, coeffs, T)
        branches.append(PuiseuxBranch(series, mult, status))
    branches.sort(key=_branch_sort_key)
    # unit constant: coefficient of y^n0 in F(0, y), n0 = total branch mult
    n0 = sum(b.multiplicity for b in branches)
    unit = F.terms.get((0, n0), Fraction(0))
    if not coeff_is_nonzero(unit):
        raise PrecisionExhausted("unit constant not certified nonzero")
    return Factorization(N, m0, branches, unit, T)


def _branch_sort_key(b):
    vals = []
    for c in b.series.coeffs[:8]:
        if isinstance(c, Fraction):
            vals.append((float(c), 0.0))
        else:
            vals.append((float(c.re), float(c.im)))
    return (b.series.ramification, vals, b.multiplicity)


def real_branch_indices(fac):
    """{0} union {j : branch j certified real}; the ``possible`` field adds
    unresolved branches (downstream mu_0 then reports a range)."""
    certain = {0}
    possible = {0}
    for j, b in enumerate(fac.branches, start=1):
        if b.realness is RealStatus.REAL:
            certain.add(j)
            possible.add(j)
        elif b.realness is RealStatus.UNRESOLVED:
            possible.add(j)
    return RealIndexSet(frozenset(certain), frozenset(possible))


def _mu0_one_side(poly, T, prec):
    m0, branches = expansions_with_mult(poly, T, prec)
    lo = m0
    hi = m0
    for _terms, mult, status in branches:
        if status is RealStatus.REAL:
            lo = max(lo, mult)
            hi = max(hi, mult)
        elif status is RealStatus.UNRESOLVED:
            hi = max(hi, mult)
    return lo, hi


def mu0(f, T=8, prec=DEFAULT_PREC):
    """Largest multiplicity among the real places of the Taylor zero set.

    Combines the y-over-x Puiseux data of f(x, y) and f(-x, y): a real place
    tangent to the y-axis (x = -t^e flavor) has no real y-branch over x > 0
    but does over x < 0, and the coordinate-invariance of mu_0 (and the
    adaptedness test built on it) depends on seeing it.  Returns an int, or
    a (lower, upper) pair when realness stayed unresolved.
    """
    if isinstance(f, BivariateFunction):
        poly = f.polynomial
    else:
        poly = f
    if poly.is_zero():
        return math.inf
    if (0, 0) in poly.terms:
        return 0
    lo1, hi1 = _mu0_one_side(poly, T, prec)
    lo2, hi2 = _mu0_one_side(poly.negate_x(), T, prec)
    lo = max(lo1, lo2)
    hi = max(hi1, hi2)
    if lo == hi:
        return lo
    return (lo, hi)
