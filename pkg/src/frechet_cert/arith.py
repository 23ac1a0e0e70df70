"""Exact scalars: rationals, the quadratic field Q(sqrt d), p-adic views of rationals.

Rationals are plain :class:`fractions.Fraction` objects, which are always
stored reduced with a positive denominator.  Elements of Q_p never appear
directly; every p-adic statement is made about a rational together with a
:class:`PAdicContext`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import DomainMismatch, PreconditionViolation

BigRational = Fraction

# valuation of zero
INFINITY = math.inf


def Q(x) -> Fraction:
    """Coerce an int, Fraction or "num/den" string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x) -> str:
    x = Q(x)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@lru_cache(maxsize=None)
def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


# -- p-adic ---------------------------------------------------------------


@dataclass(frozen=True)
class PAdicContext:
    prime: int
    display_precision: int = 8

    def __post_init__(self):
        if not isinstance(self.prime, int) or not is_prime(self.prime):
            raise ValueError(f"{self.prime!r} is not prime")
        if self.display_precision < 1:
            raise ValueError("display_precision must be >= 1")


def _ctx(ctx) -> PAdicContext:
    return ctx if isinstance(ctx, PAdicContext) else PAdicContext(int(ctx))


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, ctx) -> Union[int, float]:
    """Exponent v with x = p^v * u, u a p-unit; ``INFINITY`` for zero."""
    x = Q(x)
    p = _ctx(ctx).prime
    if x == 0:
        return INFINITY
    return _int_valuation(abs(x.numerator), p) - _int_valuation(x.denominator, p)


def abs_p(x, ctx) -> Fraction:
    v = valuation(x, ctx)
    if v == INFINITY:
        return Fraction(0)
    return Fraction(_ctx(ctx).prime) ** (-v)


@dataclass(frozen=True)
class PAdicView:
    prime: int
    valuation: Union[int, float]
    digits: tuple

    def partial_sum(self) -> Fraction:
        if self.valuation == INFINITY:
            return Fraction(0)
        p = Fraction(self.prime)
        return sum((a * p ** (self.valuation + i) for i, a in enumerate(self.digits)), Fraction(0))

    def __str__(self):
        if self.valuation == INFINITY:
            return f"0 (p={self.prime})"
        body = " ".join(str(a) for a in self.digits)
        return f"{body}·p^{self.valuation} (p={self.prime})"


def digit_expansion(x, ctx) -> PAdicView:
    """First K digits a_m, ..., a_{m+K-1} of x in Q_p (K = display precision)."""
    x = Q(x)
    ctx = _ctx(ctx)
    p, K = ctx.prime, ctx.display_precision
    v = valuation(x, ctx)
    if v == INFINITY:
        return PAdicView(p, INFINITY, tuple([0] * K))
    u = x / Fraction(p) ** v
    digits = []
    for _ in range(K):
        # u is a p-adic integer here: its denominator is prime to p
        a = (u.numerator * pow(u.denominator, -1, p)) % p
        digits.append(a)
        u = (u - a) / p
    return PAdicView(p, v, tuple(digits))


@dataclass(frozen=True)
class DominanceReport:
    abs_x: Fraction
    abs_y: Fraction
    abs_sum: Fraction
    holds: bool


def ultrametric_dominance(x, y, ctx) -> DominanceReport:
    """Check |x+y|_p = max(|x|_p, |y|_p) when the two absolute values differ."""
    ax, ay = abs_p(x, ctx), abs_p(y, ctx)
    if ax == ay:
        raise PreconditionViolation(f"|x|_p = |y|_p = {ax}; dominance is not claimed")
    s = abs_p(Q(x) + Q(y), ctx)
    return DominanceReport(ax, ay, s, s == max(ax, ay))


def ball_contains(center, exponent: int, x, ctx) -> bool:
    """True iff x lies in center + p^exponent Z_p."""
    return valuation(Q(x) - Q(center), ctx) >= exponent


# -- Q(sqrt d) -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuadraticElement:
    """a + b*sqrt(d) with a, b rational and d square-free > 1."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "a", Q(self.a))
        object.__setattr__(self, "b", Q(self.b))
        if self.d <= 1 or not is_squarefree(self.d):
            raise ValueError(f"radicand {self.d} must be square-free and > 1")

    @classmethod
    def sqrt(cls, d: int = 2) -> "QuadraticElement":
        return cls(Fraction(0), Fraction(1), d)

    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self):
        return QuadraticElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def _coerce(self, other):
        if isinstance(other, QuadraticElement):
            if other.d != self.d:
                raise DomainMismatch(f"radicands {self.d} and {other.d} cannot be mixed")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticElement(Fraction(other), Fraction(0), self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(
            self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d)")
        return QuadraticElement(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadraticElement(Fraction(1), Fraction(0), self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadraticElement):
            return (self.a, self.b) == (other.a, other.b) and (self.d == other.d or self.b == 0)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        # rational elements hash like the Fraction they equal
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"

    def __repr__(self):
        return f"QuadraticElement({self.a!s}, {self.b!s}, d={self.d})"

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "d": self.d}

    @classmethod
    def from_json(cls, record: dict) -> "QuadraticElement":
        return cls(parse_rational(record["a"]), parse_rational(record["b"]), int(record["d"]))


Scalar = Union[Fraction, QuadraticElement]


def scalar_family(x) -> str:
    if isinstance(x, QuadraticElement):
        return f"Q(sqrt {x.d})"
    if isinstance(x, (int, Fraction)):
        return "Q"
    raise DomainMismatch(f"{x!r} is not an exact scalar")


def point_key(x) -> tuple:
    """Total order on points used for canonical serialization."""
    if isinstance(x, QuadraticElement):
        return (x.a, x.b)
    return (Q(x), Fraction(0))


def point_token(x) -> str:
    """Stable text form of a point; equal points give equal tokens."""
    if isinstance(x, QuadraticElement):
        if x.b == 0:
            return format_rational(x.a)
        return f"{format_rational(x.a)}+{format_rational(x.b)}r{x.d}"
    return format_rational(x)


def scalar_to_json(x):
    if isinstance(x, QuadraticElement):
        return x.to_json()
    return format_rational(x)


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return QuadraticElement.from_json(obj)
    return parse_rational(obj)
