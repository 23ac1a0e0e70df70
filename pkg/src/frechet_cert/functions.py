"""Evaluable test functions and the counterexample checks built on them."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import (
    PAdicContext,
    Q,
    QuadraticElement,
    ball_contains,
    format_rational,
    point_token,
    valuation,
)
from .differences import (
    EqualityReport,
    equal_step_difference,
    forward_difference,
    mixed_difference,
)
from .errors import DomainMismatch, PreconditionViolation


class TestFunction:
    __test__ = False  # not a pytest class

    kind = "abstract"

    def check_point(self, x):
        pass

    def value(self, x):
        raise NotImplementedError

    def __call__(self, x):
        if isinstance(x, int):
            x = Fraction(x)
        self.check_point(x)
        return self.value(x)

    def to_json(self) -> dict:
        return {"variant": self.kind}


def evaluate(f: TestFunction, x):
    return f(x)


@dataclass(frozen=True)
class PolynomialFn(TestFunction):
    """a_0 + a_1 x + ... + a_n x^n over any implemented scalar family."""

    coefficients: tuple
    kind = "polynomial"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Q(c) for c in self.coefficients))

    def value(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coefficients) if c != 0]
        return nz[-1] if nz else -1

    def to_json(self):
        return {"variant": self.kind, "coefficients": [format_rational(c) for c in self.coefficients]}


def monomial(n: int) -> PolynomialFn:
    return PolynomialFn((0,) * n + (1,))


@dataclass(frozen=True)
class BallIndicatorFn(TestFunction):
    """1 on center + p^exponent Z_p, 0 elsewhere; rational arguments only."""

    center: Fraction
    exponent: int
    context: PAdicContext
    kind = "ball-indicator"

    def __post_init__(self):
        object.__setattr__(self, "center", Q(self.center))
        if not isinstance(self.context, PAdicContext):
            object.__setattr__(self, "context", PAdicContext(int(self.context)))

    def check_point(self, x):
        if not isinstance(x, Fraction):
            raise DomainMismatch(f"ball indicator lives on Q inside Q_p, got {x!r}")

    def value(self, x):
        return Fraction(1) if ball_contains(self.center, self.exponent, x, self.context) else Fraction(0)

    def to_json(self):
        return {
            "variant": self.kind,
            "center": format_rational(self.center),
            "exponent": self.exponent,
            "prime": self.context.prime,
        }


def zp_indicator(p: int) -> BallIndicatorFn:
    return BallIndicatorFn(Fraction(0), 0, PAdicContext(p))


@dataclass(frozen=True)
class ClassPiecewiseFn(TestFunction):
    """x on the rationals, x^2 off them, on the carrier Q(sqrt d)."""

    radicand: int = 2
    kind = "class-piecewise"

    def check_point(self, x):
        if not isinstance(x, QuadraticElement) or (x.d != self.radicand and x.b != 0):
            raise DomainMismatch(f"class-piecewise function needs a Q(sqrt {self.radicand}) point, got {x!r}")

    def value(self, x):
        if x.is_rational():
            return QuadraticElement(x.a, 0, self.radicand)
        return x * x

    def to_json(self):
        return {"variant": self.kind, "radicand": self.radicand}


def _hash_rational(seed: int, token: str) -> Fraction:
    digest = hashlib.blake2b(f"{seed}:{token}".encode(), digest_size=8).digest()
    num = int.from_bytes(digest[:4], "big", signed=True)
    den = int.from_bytes(digest[4:], "big") + 1
    return Fraction(num, den)


@dataclass(eq=False)
class TabulatedFn(TestFunction):
    """Arbitrary function given by a seeded hash of the point.

    ``overrides`` pins chosen points to chosen values; everything else comes
    from the hash, so any finite set of values is realizable.
    """

    seed: int
    overrides: dict = field(default_factory=dict)
    kind = "tabulated"

    def __post_init__(self):
        self._memo = {}

    def value(self, x):
        if x in self.overrides:
            return self.overrides[x]
        v = self._memo.get(x)
        if v is None:
            v = _hash_rational(self.seed, point_token(x))
            self._memo[x] = v
        return v

    def to_json(self):
        return {"variant": self.kind, "seed": self.seed, "overrides": len(self.overrides)}


# -- counterexamples -------------------------------------------------------


def _as_quadratic(x, d=2):
    if isinstance(x, QuadraticElement):
        return x
    return QuadraticElement(Q(x), 0, d)


def remark1_vanishing_check(steps: Sequence, x, radicand: int = 2) -> EqualityReport:
    """Mixed third difference of the class-piecewise function for rational steps.

    Rational steps keep every corner in the class of x, so the value is 0.
    """
    steps = tuple(steps)
    if len(steps) != 3:
        raise PreconditionViolation("the vanishing claim is about third differences")
    rational_steps = []
    for h in steps:
        if isinstance(h, QuadraticElement):
            if not h.is_rational():
                raise PreconditionViolation(f"irrational step {h} is outside the claim")
            h = h.a
        rational_steps.append(Q(h))
    f = ClassPiecewiseFn(radicand)
    value = mixed_difference(f, rational_steps, _as_quadratic(x, radicand))
    return EqualityReport(value, Fraction(0))


@dataclass(frozen=True)
class Remark1Witness:
    x: QuadraticElement
    h: QuadraticElement
    s: int
    value: object


# shipped data; the value is always recomputed
REMARK1_WITNESS_INPUT = (Fraction(2), QuadraticElement.sqrt(2), 3)


def remark1_witness(x=None, h=None, s=None) -> Remark1Witness:
    dx, dh, ds = REMARK1_WITNESS_INPUT
    x = _as_quadratic(dx if x is None else x)
    h = _as_quadratic(dh if h is None else h)
    s = ds if s is None else s
    value = equal_step_difference(ClassPiecewiseFn(x.d), h, s, x)
    return Remark1Witness(x, h, s, value)


def ball_indicator_local_flatness(f: BallIndicatorFn, x, h) -> EqualityReport:
    """Delta_h f(x) = 0 whenever h is no larger than the ball radius."""
    if valuation(h, f.context) < f.exponent:
        raise PreconditionViolation(
            f"|h|_p exceeds the ball radius: v(h) = {valuation(h, f.context)} < {f.exponent}"
        )
    return EqualityReport(forward_difference(f, Q(h), Q(x)), Fraction(0))
