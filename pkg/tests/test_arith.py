"""Tests for the coefficient kernel: balls, polynomials, series, flat terms."""

import random
from fractions import Fraction

import pytest

from localzeta.arith import (
    Ball,
    BivariateFunction,
    BivariatePolynomial,
    FlatTerm,
    FlatTail,
    RealStatus,
    TruncatedSeries,
    certify_real,
    is_exact_zero,
    parse_rational,
    poly_substitute,
    series_compose_poly,
    series_divide,
    series_invert_unit,
    series_reversion,
)
from localzeta.errors import TruncationUnderflow


def _rand_fraction(rng, mag=10):
    return Fraction(rng.randint(-mag, mag), rng.randint(1, mag))


# ---------------------------------------------------------------------------
# ball arithmetic soundness: exact value lies inside the ball
# ---------------------------------------------------------------------------


def test_ball_soundness_randomized():
    import mpmath

    rng = random.Random(20240817)
    for _ in range(1000):
        a = _rand_fraction(rng)
        b = _rand_fraction(rng)
        c = _rand_fraction(rng)
        if c == 0:
            c = Fraction(1, 3)
        exact = (a + b) * a - b / c + a * a
        ba, bb, bc = (Ball.from_fraction(q, 64) for q in (a, b, c))
        ball = (ba + bb) * ba - bb / bc + ba * ba
        with mpmath.workprec(256):
            ref = mpmath.mpf(exact.numerator) / exact.denominator
            diff = float(abs(ball.re - ref))
        assert diff <= ball.rad, (a, b, c, ball)
        assert ball.real_cert
        assert float(ball.im) == 0.0


def test_ball_pow_and_nonzero():
    b = Ball.from_fraction(Fraction(3, 2))
    p = b**5
    assert abs(float(p.re) - (1.5**5)) < 1e-20
    assert p.is_nonzero()
    z = b - Ball.from_fraction(Fraction(3, 2))
    assert z.contains_zero()


def test_certify_real():
    assert certify_real(Fraction(3, 2)) is RealStatus.REAL
    import mpmath

    near_i = Ball(mpmath.mpf(0), mpmath.mpf(1), 1e-30, 128, real_cert=False)
    assert certify_real(near_i) is RealStatus.NONREAL
    fuzzy = Ball(mpmath.mpf(0), mpmath.mpf(0), 1e-3, 128, real_cert=False)
    assert certify_real(fuzzy) is RealStatus.UNRESOLVED


# ---------------------------------------------------------------------------
# polynomial substitution (spec examples)
# ---------------------------------------------------------------------------


def _poly(entries):
    return BivariatePolynomial.from_list(entries)


def test_substitute_cusp_chart():
    # f = y^2 - x^3 under (x, y) -> (x, x*y) gives x^2 (y^2 - x)
    f = _poly([(0, 2, 1), (3, 0, -1)])
    sx = BivariatePolynomial.monomial(1, 0)
    sy = BivariatePolynomial.monomial(1, 1)
    got = f.substitute(sx, sy)
    expected = _poly([(2, 2, 1), (3, 0, -1)])
    assert got == expected


def test_substitute_xy():
    f = _poly([(1, 1, 1)])
    sx = BivariatePolynomial.monomial(1, 0)
    sy = BivariatePolynomial.monomial(1, 0)
    assert f.substitute(sx, sy) == _poly([(2, 0, 1)])


def test_substitute_series_cusp_parametrization():
    # y^2 - x^3 at (t^2, t^3) vanishes identically to order T
    T = 24
    f = _poly([(0, 2, 1), (3, 0, -1)])
    sx = TruncatedSeries.from_terms([(2, Fraction(1))], T)
    sy = TruncatedSeries.from_terms([(3, Fraction(1))], T)
    s = poly_substitute(f, sx, sy)
    assert s.is_zero_exact()


def test_substitution_associativity_exact():
    rng = random.Random(7)
    x = BivariatePolynomial.monomial(1, 0)
    y = BivariatePolynomial.monomial(0, 1)
    for _ in range(25):
        f = _poly(
            [
                (rng.randint(0, 3), rng.randint(0, 3), _rand_fraction(rng, 5))
                for _ in range(4)
            ]
        )
        g1 = x + y * y
        g2 = y + BivariatePolynomial.monomial(2, 0, Fraction(3))
        h1 = x * y + x
        h2 = y
        # f((g1,g2) o (h1,h2)) == (f o (g1,g2)) o (h1,h2)
        inner_x = g1.substitute(h1, h2)
        inner_y = g2.substitute(h1, h2)
        lhs = f.substitute(inner_x, inner_y)
        rhs = f.substitute(g1, g2).substitute(h1, h2)
        assert lhs == rhs


# ---------------------------------------------------------------------------
# series helpers
# ---------------------------------------------------------------------------


def test_series_shift_down_underflow():
    s = TruncatedSeries.from_terms([(0, Fraction(1)), (2, Fraction(1))], 8)
    with pytest.raises(TruncationUnderflow):
        s.shift_down(1)
    s2 = TruncatedSeries.from_terms([(2, Fraction(1)), (5, Fraction(3))], 8)
    shifted = s2.shift_down(2)
    assert shifted.coeffs[0] == 1 and shifted.coeffs[3] == 3


def test_series_inverse_and_division():
    T = 12
    s = TruncatedSeries.from_terms([(0, Fraction(2)), (1, Fraction(1))], T)
    inv = series_invert_unit(s)
    prod = s * inv
    assert prod.coeffs[0] == 1
    assert all(c == 0 for c in prod.coeffs[1:])
    q = series_divide(s * s, s)
    assert q.coeffs[: T + 1] == s.coeffs[: T + 1]


def test_series_reversion_roundtrip():
    T = 16
    s = TruncatedSeries.from_terms(
        [(1, Fraction(2)), (2, Fraction(-1)), (5, Fraction(1, 3))], T
    )
    g = series_reversion(s)
    # g(s(t)) == t through order T
    comp = series_compose_poly(
        BivariatePolynomial.from_list([(k, 0, c) for k, c in enumerate(g.coeffs)]),
        s,
        TruncatedSeries.zero(T),
    )
    assert comp.coeffs[1] == 1
    assert all(is_exact_zero(c) for i, c in enumerate(comp.coeffs) if i != 1)


# ---------------------------------------------------------------------------
# flat terms
# ---------------------------------------------------------------------------


def test_flat_term_numeric_flatness():
    # |g(x, 1)| <= |x|^L for x in a shrinking dyadic family, each L in 1..20
    g = FlatTerm(Fraction(3), -2, 1, 2)
    for L in range(1, 21):
        i0 = 6 + L  # shrinking start depending on L
        for i in range(i0, i0 + 11):
            x = 2.0**-i
            assert abs(g.eval_float(x, 1.0)) <= x**L


def test_flat_term_value_at_zero():
    g = FlatTerm(Fraction(1), 0, 0, 1)
    assert g.eval_float(0.0, 5.0) == 0.0


def test_flat_tail_power_sums_cancellation():
    t1 = FlatTerm(Fraction(1), 0, 0, 2).as_tail()
    t2 = FlatTerm(Fraction(-1), 0, 0, 2).as_tail()
    assert (t1 + t2).is_zero()
    sq = t1 * t1 + t2 * t2
    # 2 e^{-2/x^2}
    ((m, prof), c) = next(iter(sq.terms.items()))
    assert c == 2 and m == 0 and prof == ((2, Fraction(2)),)


def test_flat_tail_shift_and_eval():
    tail = FlatTerm(Fraction(1), -3, 0, 2).as_tail()
    sq = tail**2
    ((m, prof), c) = next(iter(sq.terms.items()))
    assert m == -6 and prof == ((2, Fraction(2)),) and c == 1
    # numeric flatness survives the negative power
    for i in range(8, 16):
        x = 2.0**-i
        assert abs(sq.eval_float(x)) <= x**12


def test_newton_data_ignores_flats():
    from localzeta.newton import newton_polygon

    f_plain = BivariateFunction(_poly([(0, 2, 1), (3, 0, -1)]))
    f_flat = BivariateFunction(
        _poly([(0, 2, 1), (3, 0, -1)]),
        (FlatTerm(Fraction(5), 1, 2, 3), FlatTerm(Fraction(-1), 0, 0, 1)),
    )
    assert newton_polygon(f_plain).vertices == newton_polygon(f_flat).vertices


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == Fraction(-7)
    from localzeta.errors import ParseError

    with pytest.raises(ParseError):
        parse_rational("x/y")
