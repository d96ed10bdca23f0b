"""Exact and certified arithmetic kernel.

Coefficients throughout the library live in one of two domains:

* exact rationals, represented by :class:`fractions.Fraction` (the fast path
  that every named textbook example stays on), and
* :class:`Ball` -- a complex ball (midpoint at a fixed mpmath precision plus
  a rigorous radius) used once an irrational algebraic number enters a
  computation.

The two mix freely: the ``c*`` helper functions dispatch on type, Fractions
are only demoted to balls when an operation forces it.  On top of the
coefficient domain the module provides dense-dict bivariate polynomials,
truncated univariate (possibly ramified) series, and the explicit flat-term
family ``c * x^a * y^b * exp(-1/|x|^p)`` together with the closed "flat tail"
algebra the blowup bookkeeping needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

from .errors import FlatInput, PrecisionExhausted, TruncationUnderflow

DEFAULT_PREC = 128
MAX_PREC = 2048

# Multiplicative slack applied to every float radius update; it dominates the
# rounding error of the float64 radius arithmetic itself.
_INFL = 1.0 + 1e-9


def _mpf(value, prec):
    with mpmath.workprec(prec):
        if isinstance(value, Fraction):
            return mpmath.mpf(value.numerator) / value.denominator
        return mpmath.mpf(value)


class RealStatus(Enum):
    REAL = "REAL"
    NONREAL = "NONREAL"
    UNRESOLVED = "UNRESOLVED"


from mpmath import libmp as _lm

_RND = "n"
_FZERO = _lm.fzero


def _raw(value, prec):
    """Coerce to a raw libmp mpf tuple without re-rounding mpf inputs."""
    if isinstance(value, tuple):
        return value
    if isinstance(value, int):
        return _lm.from_int(value)
    if isinstance(value, float):
        return _lm.from_float(value)
    if isinstance(value, Fraction):
        return _lm.from_rational(value.numerator, value.denominator, prec, _RND)
    mpf_val = getattr(value, "_mpf_", None)
    if mpf_val is not None:
        return mpf_val
    return mpmath.mpf(value)._mpf_


class Ball:
    """Complex ball: midpoint ``re + i*im`` (arbitrary-precision floats at
    ``prec`` bits, stored as raw libmp values) and a radius that rigorously
    bounds all rounding performed so far.

    ``real_cert`` records a construction-time certificate that the enclosed
    number is real (exact rational embeddings, isolated real algebraic roots,
    and anything computed from those by +,-,*,/).  A ball with ``real_cert``
    keeps its imaginary midpoint exactly zero.  ``nonreal_cert`` is the dual
    certificate, set when an exact real-root count proves the enclosed
    algebraic number complex even though the ball may touch the real axis;
    it is never propagated by arithmetic.
    """

    __slots__ = ("_re", "_im", "fre", "fim", "rad", "prec", "real_cert", "nonreal_cert")

    def __init__(self, re, im, rad, prec, real_cert=False, nonreal_cert=False):
        self._re = _raw(re, prec)
        self._im = _raw(im, prec)
        self.fre = _lm.to_float(self._re, strict=False)
        self.fim = _lm.to_float(self._im, strict=False)
        self.rad = float(rad)
        self.prec = prec
        self.real_cert = bool(real_cert)
        self.nonreal_cert = bool(nonreal_cert)

    @property
    def re(self):
        return mpmath.mp.make_mpf(self._re)

    @property
    def im(self):
        return mpmath.mp.make_mpf(self._im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_fraction(q, prec=DEFAULT_PREC):
        q = Fraction(q)
        mid = _lm.from_rational(q.numerator, q.denominator, prec, _RND)
        err = abs(_lm.to_float(mid, strict=False)) * 2.0 ** (1 - prec)
        return Ball(mid, _FZERO, err * _INFL, prec, real_cert=True)

    @staticmethod
    def from_real_interval(lo, hi, prec=DEFAULT_PREC):
        """Enclosure of a real number isolated in the rational interval
        [lo, hi]; certified real."""
        lo = Fraction(lo)
        hi = Fraction(hi)
        mid = (lo + hi) / 2
        m = _lm.from_rational(mid.numerator, mid.denominator, prec, _RND)
        err = abs(_lm.to_float(m, strict=False)) * 2.0 ** (1 - prec) + float(hi - lo) / 2.0
        return Ball(m, _FZERO, err * _INFL, prec, real_cert=True)

    @staticmethod
    def from_mpc(z, rad, prec, real_cert=False):
        if hasattr(z, "_mpf_"):
            return Ball(z._mpf_, _FZERO, rad, prec, real_cert)
        return Ball(z.real._mpf_, z.imag._mpf_, rad, prec, real_cert)

    # -- magnitude helpers --------------------------------------------

    def mag_upper(self):
        """Float upper bound for |midpoint|."""
        return (abs(self.fre) + abs(self.fim)) * _INFL

    def mag_lower(self):
        """Float lower bound for |midpoint|."""
        return max(abs(self.fre), abs(self.fim)) / _INFL

    def abs_upper(self):
        return self.mag_upper() + self.rad

    def abs_lower(self):
        return max(0.0, self.mag_lower() - self.rad)

    def contains_zero(self):
        return self.mag_lower() <= self.rad

    def is_nonzero(self):
        return self.mag_lower() > self.rad

    def im_excludes_zero(self):
        return abs(self.fim) / _INFL > self.rad

    def is_exact(self):
        return self.rad == 0.0

    # -- arithmetic ----------------------------------------------------

    def __neg__(self):
        out = Ball.__new__(Ball)
        out._re = _lm.mpf_neg(self._re)
        out._im = _lm.mpf_neg(self._im)
        out.fre = -self.fre
        out.fim = -self.fim
        out.rad = self.rad
        out.prec = self.prec
        out.real_cert = self.real_cert
        out.nonreal_cert = False
        return out

    def __add__(self, other):
        if not isinstance(other, Ball):
            other = as_ball(other, self.prec)
        prec = self.prec if self.prec >= other.prec else other.prec
        out = Ball.__new__(Ball)
        out._re = _lm.mpf_add(self._re, other._re, prec, _RND)
        out._im = _lm.mpf_add(self._im, other._im, prec, _RND)
        out.fre = _lm.to_float(out._re, strict=False)
        out.fim = _lm.to_float(out._im, strict=False)
        mag = abs(out.fre) + abs(out.fim)
        out.rad = (self.rad + other.rad + mag * 2.0 ** (2 - prec)) * _INFL
        out.prec = prec
        out.real_cert = self.real_cert and other.real_cert
        out.nonreal_cert = False
        return out

    def __sub__(self, other):
        if not isinstance(other, Ball):
            other = as_ball(other, self.prec)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Ball):
            other = as_ball(other, self.prec)
        prec = self.prec if self.prec >= other.prec else other.prec
        out = Ball.__new__(Ball)
        ac = _lm.mpf_mul(self._re, other._re, prec, _RND)
        bd = _lm.mpf_mul(self._im, other._im, prec, _RND)
        ad = _lm.mpf_mul(self._re, other._im, prec, _RND)
        bc = _lm.mpf_mul(self._im, other._re, prec, _RND)
        out._re = _lm.mpf_sub(ac, bd, prec, _RND)
        out._im = _lm.mpf_add(ad, bc, prec, _RND)
        out.fre = _lm.to_float(out._re, strict=False)
        out.fim = _lm.to_float(out._im, strict=False)
        mag = abs(out.fre) + abs(out.fim)
        smag = abs(self.fre) + abs(self.fim)
        omag = abs(other.fre) + abs(other.fim)
        out.rad = (
            (smag * _INFL + self.rad) * other.rad
            + omag * _INFL * self.rad
            + mag * 2.0 ** (4 - prec)
        ) * _INFL
        out.prec = prec
        out.real_cert = self.real_cert and other.real_cert
        out.nonreal_cert = False
        return out

    def __truediv__(self, other):
        if not isinstance(other, Ball):
            other = as_ball(other, self.prec)
        prec = self.prec if self.prec >= other.prec else other.prec
        denom_low = other.abs_lower()
        if denom_low <= 0.0:
            raise PrecisionExhausted("division by a ball containing zero")
        d = _lm.mpf_add(
            _lm.mpf_mul(other._re, other._re, prec, _RND),
            _lm.mpf_mul(other._im, other._im, prec, _RND),
            prec,
            _RND,
        )
        re_num = _lm.mpf_add(
            _lm.mpf_mul(self._re, other._re, prec, _RND),
            _lm.mpf_mul(self._im, other._im, prec, _RND),
            prec,
            _RND,
        )
        im_num = _lm.mpf_sub(
            _lm.mpf_mul(self._im, other._re, prec, _RND),
            _lm.mpf_mul(self._re, other._im, prec, _RND),
            prec,
            _RND,
        )
        out = Ball.__new__(Ball)
        out._re = _lm.mpf_div(re_num, d, prec, _RND)
        out._im = _lm.mpf_div(im_num, d, prec, _RND)
        out.fre = _lm.to_float(out._re, strict=False)
        out.fim = _lm.to_float(out._im, strict=False)
        mag = abs(out.fre) + abs(out.fim)
        out.rad = (
            (self.rad + mag * _INFL * other.rad) / denom_low + mag * 2.0 ** (5 - prec)
        ) * _INFL
        out.prec = prec
        out.real_cert = self.real_cert and other.real_cert
        out.nonreal_cert = False
        return out

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("integer power expected")
        out = Ball.from_fraction(1, self.prec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return Ball(self._re, _lm.mpf_neg(self._im), self.rad, self.prec, self.real_cert)

    def to_complex(self):
        return complex(self.fre, self.fim)

    def __repr__(self):
        return "Ball(%.9g%+.9gj +/- %.3g)" % (self.fre, self.fim, self.rad)


def as_ball(c, prec=DEFAULT_PREC):
    if isinstance(c, Ball):
        return c
    if isinstance(c, (int, Fraction)):
        return Ball.from_fraction(Fraction(c), prec)
    raise TypeError("cannot coerce %r to Ball" % (c,))


# ---------------------------------------------------------------------------
# mixed coefficient helpers: Fraction stays Fraction until a Ball forces it
# ---------------------------------------------------------------------------


def _coerce_pair(a, b):
    if isinstance(a, (int, Fraction)):
        a = Ball.from_fraction(Fraction(a), b.prec)
    elif isinstance(b, (int, Fraction)):
        b = Ball.from_fraction(Fraction(b), a.prec)
    return a, b


def cadd(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    a, b = _coerce_pair(a, b)
    return a + b


def csub(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    a, b = _coerce_pair(a, b)
    return a - b


def cmul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    a, b = _coerce_pair(a, b)
    return a * b


def cdiv(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    a, b = _coerce_pair(a, b)
    return a / b


def cneg(a):
    return -a


def cpow(a, n):
    if isinstance(a, Fraction):
        return a**n
    return a**n


def is_exact_zero(c):
    if isinstance(c, Fraction):
        return c == 0
    return c.is_exact() and float(c.re) == 0.0 and float(c.im) == 0.0


def coeff_contains_zero(c):
    if isinstance(c, Fraction):
        return c == 0
    return c.contains_zero()


def coeff_is_nonzero(c):
    """Certified nonzero (exact nonzero rational, or ball excluding 0)."""
    if isinstance(c, Fraction):
        return c != 0
    return c.is_nonzero()


def coeff_to_float(c):
    if isinstance(c, Fraction):
        return float(c)
    return float(c.re)


def coeff_to_complex(c):
    if isinstance(c, Fraction):
        return complex(float(c), 0.0)
    return c.to_complex()


def certify_real(c, start_prec=DEFAULT_PREC, max_prec=MAX_PREC):
    """Decide whether a coefficient is real.

    REAL requires an exact rational or a construction certificate
    (conjugation-fixed root choice); NONREAL requires the imaginary ball to
    exclude zero.  The escalation schedule is advisory here: a bare ball
    cannot be sharpened after the fact, so the caller re-runs its pipeline at
    doubled precision and calls again.  UNRESOLVED is a value, not an error.
    """
    if isinstance(c, Fraction):
        return RealStatus.REAL
    if c.real_cert:
        return RealStatus.REAL
    if c.nonreal_cert or c.im_excludes_zero():
        return RealStatus.NONREAL
    return RealStatus.UNRESOLVED


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------


class BivariatePolynomial:
    """Polynomial in (x, y) as a map (j, k) -> coefficient.

    Invariants: no stored zero coefficients (exact zeros are dropped; uncertain
    ball coefficients are kept), exponents nonnegative.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for (j, k), c in terms.items():
                if j < 0 or k < 0:
                    raise ValueError("negative exponent in BivariatePolynomial")
                if is_exact_zero(c):
                    continue
                self.terms[(int(j), int(k))] = c

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero():
        return BivariatePolynomial()

    @staticmethod
    def constant(c):
        return BivariatePolynomial({(0, 0): Fraction(c) if isinstance(c, int) else c})

    @staticmethod
    def monomial(j, k, c=Fraction(1)):
        return BivariatePolynomial({(j, k): c})

    @staticmethod
    def from_list(entries):
        """entries: iterable of (j, k, coefficient)."""
        terms = {}
        for j, k, c in entries:
            key = (int(j), int(k))
            if key in terms:
                terms[key] = cadd(terms[key], c)
            else:
                terms[key] = Fraction(c) if isinstance(c, int) else c
        return BivariatePolynomial(terms)

    # -- basic structure -----------------------------------------------

    def is_zero(self):
        return not self.terms

    def support(self):
        return set(self.terms.keys())

    def __eq__(self, other):
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def copy(self):
        return BivariatePolynomial(dict(self.terms))

    def total_degree(self):
        return max((j + k for j, k in self.terms), default=-1)

    def degree_y(self):
        return max((k for _, k in self.terms), default=-1)

    def degree_x(self):
        return max((j for j, _ in self.terms), default=-1)

    def coeff(self, j, k):
        return self.terms.get((j, k), Fraction(0))

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            if key in out:
                s = cadd(out[key], c)
                if is_exact_zero(s):
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
        return BivariatePolynomial(out)

    def __neg__(self):
        return BivariatePolynomial({k: cneg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Ball)):
            if isinstance(other, int):
                other = Fraction(other)
            if is_exact_zero(other):
                return BivariatePolynomial()
            return BivariatePolynomial(
                {k: cmul(c, other) for k, c in self.terms.items()}
            )
        out = {}
        for (j1, k1), c1 in self.terms.items():
            for (j2, k2), c2 in other.terms.items():
                key = (j1 + j2, k1 + k2)
                p = cmul(c1, c2)
                if key in out:
                    out[key] = cadd(out[key], p)
                else:
                    out[key] = p
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = BivariatePolynomial.constant(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus and substitutions ---------------------------------------

    def diff_x(self):
        out = {}
        for (j, k), c in self.terms.items():
            if j > 0:
                out[(j - 1, k)] = cmul(c, Fraction(j))
        return BivariatePolynomial(out)

    def diff_y(self):
        out = {}
        for (j, k), c in self.terms.items():
            if k > 0:
                out[(j, k - 1)] = cmul(c, Fraction(k))
        return BivariatePolynomial(out)

    def x_order(self):
        """Largest power of x dividing the polynomial (0 for the zero poly)."""
        if not self.terms:
            return 0
        return min(j for j, _ in self.terms)

    def y_order(self):
        if not self.terms:
            return 0
        return min(k for _, k in self.terms)

    def shift_x(self, n):
        """Multiply by x^n (n may be negative when divisible)."""
        if n < 0 and self.x_order() < -n:
            raise ValueError("polynomial not divisible by x^%d" % (-n))
        return BivariatePolynomial({(j + n, k): c for (j, k), c in self.terms.items()})

    def shift_y(self, n):
        if n < 0 and self.y_order() < -n:
            raise ValueError("polynomial not divisible by y^%d" % (-n))
        return BivariatePolynomial({(j, k + n): c for (j, k), c in self.terms.items()})

    def swap(self):
        """f(y, x)."""
        return BivariatePolynomial({(k, j): c for (j, k), c in self.terms.items()})

    def negate_x(self):
        """f(-x, y)."""
        return BivariatePolynomial(
            {(j, k): (cneg(c) if j % 2 else c) for (j, k), c in self.terms.items()}
        )

    def eval_fraction(self, x, y):
        """Exact evaluation at rational (x, y); Fraction in, Fraction out."""
        total = Fraction(0)
        for (j, k), c in self.terms.items():
            total += c * x**j * y**k
        return total

    def eval_float(self, x, y):
        total = 0.0
        for (j, k), c in self.terms.items():
            total += coeff_to_float(c) * x**j * y**k
        return total

    def eval_coeff(self, x, y):
        """Evaluation with mixed Fraction/Ball scalars."""
        total = Fraction(0)
        for (j, k), c in self.terms.items():
            total = cadd(total, cmul(c, cmul(cpow(x, j), cpow(y, k))))
        return total

    def substitute(self, sx, sy):
        """Exact composition f(sx(x,y), sy(x,y)) with polynomial arguments.

        Powers of the arguments are cached, so the cost is one polynomial
        product per distinct exponent.
        """
        xpow = {0: BivariatePolynomial.constant(Fraction(1))}
        ypow = {0: BivariatePolynomial.constant(Fraction(1))}

        def _pow(cache, base, n):
            if n not in cache:
                half = _pow(cache, base, n // 2)
                res = half * half
                if n % 2:
                    res = res * base
                cache[n] = res
            return cache[n]

        out = BivariatePolynomial()
        for (j, k), c in self.terms.items():
            term = _pow(xpow, sx, j) * _pow(ypow, sy, k) * c
            out = out + term
        return out

    def subs_y_plus_cxk(self, c, k):
        """f(x, y + c*x^k) -- the adapted-coordinate move."""
        return self.substitute(
            BivariatePolynomial.monomial(1, 0),
            BivariatePolynomial.monomial(0, 1) + BivariatePolynomial.monomial(k, 0, c),
        )

    def to_sympy(self, x, y):
        import sympy

        expr = sympy.Integer(0)
        for (j, k), c in self.terms.items():
            if not isinstance(c, Fraction):
                raise ValueError("sympy conversion needs exact coefficients")
            expr += sympy.Rational(c.numerator, c.denominator) * x**j * y**k
        return expr

    @staticmethod
    def from_sympy(expr, x, y):
        import sympy

        poly = sympy.Poly(expr, x, y)
        terms = {}
        for (j, k), c in poly.terms():
            r = sympy.Rational(c)
            terms[(int(j), int(k))] = Fraction(int(r.p), int(r.q))
        return BivariatePolynomial(terms)

    def is_exact(self):
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "BivariatePolynomial(0)"
        bits = []
        for (j, k) in sorted(self.terms):
            bits.append("(%s)*x^%d*y^%d" % (self.terms[(j, k)], j, k))
        return "BivariatePolynomial(%s)" % " + ".join(bits)


# ---------------------------------------------------------------------------
# truncated univariate series (possibly ramified)
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """Series sum(coeffs[i] * t^i, i=0..T) with x = t^ramification.

    The truncation order ``T`` is fixed per computation run; arithmetic never
    silently extends it.
    """

    __slots__ = ("ramification", "coeffs", "truncation")

    def __init__(self, ramification, coeffs, truncation):
        if ramification < 1:
            raise ValueError("ramification must be positive")
        self.ramification = int(ramification)
        self.truncation = int(truncation)
        coeffs = list(coeffs)
        if len(coeffs) < truncation + 1:
            coeffs = coeffs + [Fraction(0)] * (truncation + 1 - len(coeffs))
        self.coeffs = coeffs[: truncation + 1]

    @staticmethod
    def zero(T, N=1):
        return TruncatedSeries(N, [Fraction(0)] * (T + 1), T)

    @staticmethod
    def from_terms(terms, T, N=1):
        """terms: iterable of (exponent, coefficient) with integer exponents."""
        coeffs = [Fraction(0)] * (T + 1)
        for e, c in terms:
            if 0 <= e <= T:
                coeffs[e] = cadd(coeffs[e], c)
        return TruncatedSeries(N, coeffs, T)

    def copy(self):
        return TruncatedSeries(self.ramification, list(self.coeffs), self.truncation)

    def is_zero_exact(self):
        return all(is_exact_zero(c) for c in self.coeffs)

    def contains_zero_series(self):
        return all(coeff_contains_zero(c) for c in self.coeffs)

    def valuation(self):
        """Index of the first certified-nonzero coefficient, or None."""
        for i, c in enumerate(self.coeffs):
            if coeff_is_nonzero(c):
                return i
        return None

    def constant_term(self):
        return self.coeffs[0]

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(
            self.ramification,
            [cadd(a, b) for a, b in zip(self.coeffs, other.coeffs)],
            self.truncation,
        )

    def __neg__(self):
        return TruncatedSeries(
            self.ramification, [cneg(c) for c in self.coeffs], self.truncation
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Ball)):
            if isinstance(other, int):
                other = Fraction(other)
            return TruncatedSeries(
                self.ramification,
                [cmul(c, other) for c in self.coeffs],
                self.truncation,
            )
        self._check(other)
        T = self.truncation
        out = [Fraction(0)] * (T + 1)
        for i, a in enumerate(self.coeffs):
            if is_exact_zero(a):
                continue
            for j in range(0, T + 1 - i):
                b = other.coeffs[j]
                if is_exact_zero(b):
                    continue
                out[i + j] = cadd(out[i + j], cmul(a, b))
        return TruncatedSeries(self.ramification, out, T)

    __rmul__ = __mul__

    def shift_down(self, n):
        """Divide by t^n.

        The discarded low-order coefficients must all be (certifiably) zero;
        otherwise the operation removed more order than available.
        """
        for c in self.coeffs[:n]:
            if coeff_is_nonzero(c):
                raise TruncationUnderflow(
                    "division by t^%d removes a nonzero coefficient" % n
                )
        return TruncatedSeries(
            self.ramification,
            self.coeffs[n:] + [Fraction(0)] * n,
            self.truncation,
        )

    def shift_up(self, n):
        return TruncatedSeries(
            self.ramification,
            [Fraction(0)] * n + self.coeffs[: self.truncation + 1 - n],
            self.truncation,
        )

    def rescale_ram(self, new_ram):
        """Re-express in a finer parameter: x = s^new_ram, t = s^(new_ram/ram)."""
        if new_ram % self.ramification:
            raise ValueError("new ramification must be a multiple")
        step = new_ram // self.ramification
        out = [Fraction(0)] * (self.truncation + 1)
        for i, c in enumerate(self.coeffs):
            # terms landing beyond the horizon are truncated away
            if i * step <= self.truncation:
                out[i * step] = c
        return TruncatedSeries(new_ram, out, self.truncation)

    def eval_float(self, t):
        total = 0.0
        for c in reversed(self.coeffs):
            total = total * t + coeff_to_float(c)
        return total

    def eval_coeff(self, t):
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = cadd(cmul(total, t), c)
        return total

    def _check(self, other):
        if self.ramification != other.ramification or self.truncation != other.truncation:
            raise ValueError("incompatible series (ramification/truncation)")

    def __repr__(self):
        bits = []
        for i, c in enumerate(self.coeffs):
            if not coeff_contains_zero(c) or (isinstance(c, Fraction) and c != 0):
                bits.append("(%s) t^%d" % (c, i))
            if len(bits) > 6:
                bits.append("...")
                break
        return "TruncatedSeries(N=%d, %s; T=%d)" % (
            self.ramification,
            " + ".join(bits) if bits else "0",
            self.truncation,
        )


def series_compose_poly(f, sx, sy):
    """Substitute univariate truncated series sx(t), sy(t) into f(x, y).

    All series must share ramification and truncation.  Purely polynomial
    inputs (series with Fraction coefficients) give exact output coefficients.
    """
    T = sx.truncation
    one = TruncatedSeries.from_terms([(0, Fraction(1))], T, sx.ramification)
    xcache = {0: one}
    ycache = {0: one}

    def _pow(cache, base, n):
        if n not in cache:
            half = _pow(cache, base, n // 2)
            res = half * half
            if n % 2:
                res = res * base
            cache[n] = res
        return cache[n]

    out = TruncatedSeries.zero(T, sx.ramification)
    for (j, k), c in f.terms.items():
        out = out + _pow(xcache, sx, j) * _pow(ycache, sy, k) * c
    return out


def poly_substitute(f, sx, sy):
    """Spec-level substitution operation.

    Polynomial arguments give an exact polynomial; TruncatedSeries arguments
    give a TruncatedSeries.
    """
    if isinstance(sx, BivariatePolynomial) and isinstance(sy, BivariatePolynomial):
        return f.substitute(sx, sy)
    if isinstance(sx, TruncatedSeries) and isinstance(sy, TruncatedSeries):
        return series_compose_poly(f, sx, sy)
    raise TypeError("substitution targets must both be polynomials or series")


def series_invert_unit(s):
    """1/s for a series with certified-nonzero constant term."""
    T = s.truncation
    c0 = s.coeffs[0]
    if not coeff_is_nonzero(c0):
        raise PrecisionExhausted("series inversion needs a unit constant term")
    inv0 = cdiv(Fraction(1), c0)
    out = [inv0] + [Fraction(0)] * T
    for n in range(1, T + 1):
        acc = Fraction(0)
        for i in range(1, n + 1):
            acc = cadd(acc, cmul(s.coeffs[i], out[n - i]))
        out[n] = cneg(cdiv(acc, c0))
    return TruncatedSeries(s.ramification, out, T)


def series_divide(a, b):
    """a/b for series with b a unit."""
    return a * series_invert_unit(b)


def _mul_coeff_lists(a, b, T):
    out = [Fraction(0)] * (T + 1)
    for i, ca in enumerate(a):
        if i > T or is_exact_zero(ca):
            continue
        for j in range(0, T + 1 - i):
            cb = b[j]
            if is_exact_zero(cb):
                continue
            out[i + j] = cadd(out[i + j], cmul(ca, cb))
    return out


def series_reversion(s):
    """Compositional inverse of a series with valuation exactly 1.

    Returns g with g(s(t)) = t through the shared truncation order.
    """
    T = s.truncation
    c1 = s.coeffs[1]
    if not coeff_is_nonzero(c1) or coeff_is_nonzero(s.coeffs[0]):
        raise PrecisionExhausted("reversion needs valuation exactly 1")
    pows = [[Fraction(1)] + [Fraction(0)] * T]
    for _ in range(T):
        pows.append(_mul_coeff_lists(pows[-1], s.coeffs, T))
    # [t^n] sum_i g_i s^i = delta_{n,1}; solve the triangular system.
    g = [Fraction(0), cdiv(Fraction(1), c1)] + [Fraction(0)] * (T - 1)
    for n in range(2, T + 1):
        acc = Fraction(0)
        for i in range(1, n):
            if not is_exact_zero(g[i]):
                acc = cadd(acc, cmul(g[i], pows[i][n]))
        g[n] = cneg(cdiv(acc, pows[n][n]))
    return TruncatedSeries(s.ramification, g, T)


# ---------------------------------------------------------------------------
# flat terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatTerm:
    """coefficient * x^x_power * y^y_power * exp(-1/|x|^p).

    The value and all derivatives at x = 0 are zero wherever the represented
    function is defined near 0, so flat terms never contribute to Newton data;
    they matter only in numeric evaluation and as opaque tags.  ``x_power``
    may be negative (strict transforms divide by the chart coordinate).
    """

    coefficient: Fraction
    x_power: int
    y_power: int
    p: int

    def __post_init__(self):
        if self.y_power < 0:
            raise ValueError("y_power must be nonnegative")
        if self.p < 1:
            raise ValueError("p must be a positive integer")

    def eval_float(self, x, y):
        if x == 0.0:
            return 0.0
        expo = -1.0 / abs(x) ** self.p
        if expo < -700.0:
            core = 0.0
        else:
            core = math.exp(expo)
        return float(self.coefficient) * x**self.x_power * y**self.y_power * core

    def as_tail(self):
        return FlatTail({(self.x_power, ((self.p, Fraction(1)),)): self.coefficient})


class FlatTail:
    """Finite sum of terms  c * t^m * exp(-sum_q A_q / |t|^q).

    Closed under the operations the blowup bookkeeping performs: addition,
    multiplication, integer powers, scaling by t-monomials (m may go
    negative), which keeps every tail flat.  Keys are (m, exponent profile)
    where the profile is a sorted tuple of (q, A_q) with A_q > 0.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if is_exact_zero(c):
                    continue
                self.terms[key] = c

    @staticmethod
    def zero():
        return FlatTail()

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            if key in out:
                s = cadd(out[key], c)
                if is_exact_zero(s):
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
        return FlatTail(out)

    def __neg__(self):
        return FlatTail({k: cneg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Ball)):
            if isinstance(other, int):
                other = Fraction(other)
            return FlatTail({k: cmul(c, other) for k, c in self.terms.items()})
        out = {}
        for (m1, prof1), c1 in self.terms.items():
            for (m2, prof2), c2 in other.terms.items():
                prof = dict(prof1)
                for q, A in prof2:
                    prof[q] = prof.get(q, Fraction(0)) + A
                key = (m1 + m2, tuple(sorted(prof.items())))
                p = cmul(c1, c2)
                if key in out:
                    out[key] = cadd(out[key], p)
                else:
                    out[key] = p
        return FlatTail(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = FlatTail({(0, ()): Fraction(1)})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift_t(self, n):
        """Multiply by t^n (n negative allowed: flatness survives)."""
        return FlatTail({(m + n, prof): c for (m, prof), c in self.terms.items()})

    def eval_float(self, t):
        if t == 0.0:
            return 0.0
        total = 0.0
        for (m, prof), c in self.terms.items():
            expo = 0.0
            for q, A in prof:
                expo -= float(A) / abs(t) ** q
            if expo < -700.0:
                continue
            total += coeff_to_float(c) * t**m * math.exp(expo)
        return total

    def __repr__(self):
        bits = []
        for (m, prof), c in sorted(self.terms.items()):
            e = "*".join("exp(-%s/|t|^%d)" % (A, q) for q, A in prof) or "1"
            bits.append("(%s) t^%d %s" % (c, m, e))
        return "FlatTail(%s)" % (" + ".join(bits) if bits else "0")


# ---------------------------------------------------------------------------
# the universal input type
# ---------------------------------------------------------------------------


class BivariateFunction:
    """Exact-rational bivariate polynomial plus explicit flat terms.

    The Taylor series at the origin equals the polynomial part; every Newton
    computation ignores the flats by construction.
    """

    __slots__ = ("polynomial", "flats")

    def __init__(self, polynomial, flats=()):
        self.polynomial = polynomial
        self.flats = tuple(flats)

    @staticmethod
    def from_list(entries, flats=()):
        return BivariateFunction(BivariatePolynomial.from_list(entries), flats)

    def require_nonflat(self):
        if self.polynomial.is_zero():
            raise FlatInput("polynomial part is zero: Newton data undefined")

    def eval_float(self, x, y):
        total = self.polynomial.eval_float(x, y)
        for ft in self.flats:
            total += ft.eval_float(x, y)
        return total

    def __repr__(self):
        return "BivariateFunction(%r, flats=%d)" % (self.polynomial, len(self.flats))


def parse_rational(text):
    """Parse "a/b" or "a" decimal strings to Fraction."""
    from .errors import ParseError

    try:
        text = str(text).strip()
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError("bad rational %r" % (text,)) from exc


def format_rational(q):
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)
