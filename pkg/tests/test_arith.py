import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from frechet_cert.arith import (
    INFINITY,
    PAdicContext,
    QuadraticElement,
    abs_p,
    ball_contains,
    digit_expansion,
    format_rational,
    parse_rational,
    ultrametric_dominance,
    valuation,
)
from frechet_cert.errors import DomainMismatch, PreconditionViolation

from _support import rationals, v_oracle

PRIMES = [2, 3, 5, 7, 11]


def test_valuation_examples():
    assert valuation(50, PAdicContext(5)) == 2
    assert valuation(0, PAdicContext(7)) is INFINITY
    assert valuation(Fraction(1, 3), PAdicContext(3)) == -1


def test_abs_p_examples():
    assert abs_p(50, 5) == Fraction(1, 25)
    # 28/3: numerator prime to 3, one 3 in the denominator
    assert v_oracle(Fraction(28, 3), 3) == -1
    assert abs_p(Fraction(28, 3), 3) == 3
    assert abs_p(0, 2) == 0


@pytest.mark.parametrize(
    "x, p, K, m, digits",
    [
        (Fraction(-1), 3, 4, 0, (2, 2, 2, 2)),
        (Fraction(1, 2), 3, 3, 0, (2, 1, 1)),
        (Fraction(3), 3, 2, 1, (1, 0)),
    ],
)
def test_digit_examples(x, p, K, m, digits):
    view = digit_expansion(x, PAdicContext(p, K))
    assert (view.valuation, view.digits) == (m, digits)
    partial = sum(a * Fraction(p) ** (m + i) for i, a in enumerate(digits))
    v = v_oracle(x - partial, p)
    assert v is None or v >= m + K


def test_digit_rendering():
    assert str(digit_expansion(-1, PAdicContext(3, 4))) == "2 2 2 2·p^0 (p=3)"
    assert str(digit_expansion(0, PAdicContext(3, 2))) == "0 (p=3)"


def test_ultrametric_examples():
    rep = ultrametric_dominance(Fraction(1, 3), 9, PAdicContext(3))
    assert rep.abs_sum == 3 == rep.abs_x and rep.holds
    rep = ultrametric_dominance(5, 25, 5)
    assert rep.abs_sum == Fraction(1, 5) == rep.abs_x
    with pytest.raises(PreconditionViolation):
        ultrametric_dominance(1, 1, 2)


def test_ball_contains_examples():
    assert ball_contains(0, 0, 7, 7)
    assert not ball_contains(0, -1, Fraction(1, 49), 7)
    assert ball_contains(1, 2, 10, 3)


def test_context_rejects_composites():
    with pytest.raises(ValueError):
        PAdicContext(9)
    with pytest.raises(ValueError):
        PAdicContext(5, 0)


def test_rational_serialization():
    assert format_rational(0) == "0/1"
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert parse_rational("-3/2") == Fraction(-3, 2)
    assert parse_rational("7") == 7


def test_arithmetic_against_cross_multiplication():
    rng = random.Random(2024)

    def reduce(n, d):
        g = math.gcd(n, d)
        n, d = n // g, d // g
        return (-n, -d) if d < 0 else (n, d)

    for _ in range(1000):
        a, c = rng.randint(-10 ** 30, 10 ** 30), rng.randint(-10 ** 30, 10 ** 30)
        b, d = rng.randint(1, 10 ** 30), rng.randint(1, 10 ** 30)
        x, y = Fraction(a, b), Fraction(c, d)
        assert (x.numerator, x.denominator) == reduce(a, b)
        assert Fraction(x.numerator, x.denominator) == x
        assert ((x + y).numerator, (x + y).denominator) == reduce(a * d + b * c, b * d)
        assert ((x - y).numerator, (x - y).denominator) == reduce(a * d - b * c, b * d)
        assert ((x * y).numerator, (x * y).denominator) == reduce(a * c, b * d)
        if c:
            assert ((x / y).numerator, (x / y).denominator) == reduce(a * d, b * c)


@given(rationals(nonzero=True), rationals(nonzero=True), st.sampled_from(PRIMES))
def test_valuation_additivity(x, y, p):
    ctx = PAdicContext(p)
    vx, vy = valuation(x, ctx), valuation(y, ctx)
    assert vx == v_oracle(x, p)
    assert valuation(x * y, ctx) == vx + vy
    assert valuation(x + y, ctx) >= min(vx, vy)
    if vx != vy:
        assert valuation(x + y, ctx) == min(vx, vy)
        assert ultrametric_dominance(x, y, ctx).holds


@given(rationals(), st.sampled_from(PRIMES), st.integers(1, 12))
def test_digit_round_trip(x, p, K):
    view = digit_expansion(x, PAdicContext(p, K))
    assert len(view.digits) == K
    assert all(0 <= a < p for a in view.digits)
    if x == 0:
        assert view.valuation is INFINITY
        return
    assert view.digits[0] >= 1
    v = v_oracle(x - view.partial_sum(), p)
    assert v is None or v >= view.valuation + K


@given(rationals(), rationals(), st.integers(-3, 3), st.sampled_from(PRIMES))
def test_ball_membership_matches_valuation(c, x, N, p):
    v = v_oracle(x - c, p)
    assert ball_contains(c, N, x, p) == (v is None or v >= N)


# -- Q(sqrt d) -------------------------------------------------------------

quads = st.builds(QuadraticElement, rationals(1000), rationals(1000))


@given(quads, quads)
def test_quadratic_componentwise(u, w):
    d = 2
    prod = u * w
    assert (prod.a, prod.b) == (u.a * w.a + d * u.b * w.b, u.a * w.b + u.b * w.a)
    # (a + b r)(a' - b' r) against the component formula
    conj = u * w.conjugate()
    assert (conj.a, conj.b) == (u.a * w.a - d * u.b * w.b, u.b * w.a - u.a * w.b)
    assert (u + w) - w == u
    if w != 0:
        assert (u / w) * w == u
    assert (u * u.conjugate()).is_rational()


@given(quads, rationals())
def test_class_stable_under_rational_shift(u, q):
    assert (u + q).is_rational() == u.is_rational()


def test_quadratic_basics():
    r = QuadraticElement.sqrt(2)
    assert r * r == 2
    assert hash(QuadraticElement(Fraction(3, 2))) == hash(Fraction(3, 2))
    assert QuadraticElement(1, 2).to_json() == {"a": "1/1", "b": "2/1", "d": 2}
    assert QuadraticElement.from_json({"a": "1/1", "b": "2/1", "d": 2}) == QuadraticElement(1, 2)
    with pytest.raises(ValueError):
        QuadraticElement(1, 1, 4)
    with pytest.raises(DomainMismatch):
        QuadraticElement(0, 1, 2) + QuadraticElement(0, 1, 3)
