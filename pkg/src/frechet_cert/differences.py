"""Exact difference operators and their point-mass expansions.

``mixed_difference(f, (h1, ..., hs), x)`` is Delta_{h1} Delta_{h2} ... Delta_{hs} f(x),
``equal_step_difference(f, h, s, x)`` is Delta_h^s f(x).  Every operator also
has a :class:`FormalFunctional` form, a finite map point -> coefficient, so
identities between operators can be checked independently of any f.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

from .arith import Q, format_rational, point_key, scalar_family, scalar_from_json, scalar_to_json
from .errors import DomainMismatch, MalformedPermutation, PreconditionViolation

MIXED = "mixed"
EQUAL_STEP = "equal-step"


def _scalar(x):
    return Fraction(x) if isinstance(x, int) else x


def as_steps(steps: Iterable) -> tuple:
    """Validate a step vector: non-empty, one scalar family."""
    steps = tuple(_scalar(h) for h in steps)
    if not steps:
        raise PreconditionViolation("a step vector needs at least one step")
    # rationals embed in any Q(sqrt d); two different radicands do not mix
    families = {scalar_family(h) for h in steps}
    if len(families - {"Q"}) > 1:
        raise DomainMismatch(f"steps mix scalar families {sorted(families)}")
    return steps


class FormalFunctional:
    """Finite signed combination sum c_i * delta_{x_i} with rational c_i.

    Stored canonically: equal points merged, zero coefficients dropped.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for point, c in items:
                self._add(_scalar(point), Q(c))

    def _add(self, point, c):
        if c == 0:
            return
        new = self._terms.get(point, 0) + c
        if new == 0:
            del self._terms[point]
        else:
            self._terms[point] = new

    @classmethod
    def point_mass(cls, x, c=1):
        return cls({x: c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormalFunctional):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        out = FormalFunctional(self._terms)
        for p, c in other._terms.items():
            out._add(p, c)
        return out

    def __sub__(self, other):
        out = FormalFunctional(self._terms)
        for p, c in other._terms.items():
            out._add(p, -c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "FormalFunctional":
        c = Q(c)
        if c == 0:
            return FormalFunctional()
        out = FormalFunctional()
        out._terms = {p: c * v for p, v in self._terms.items()}
        return out

    def shift(self, t) -> "FormalFunctional":
        out = FormalFunctional()
        out._terms = {p + t: v for p, v in self._terms.items()}
        return out

    def accumulate(self, other, c=1):
        """In-place self += c * other."""
        c = Q(c)
        for p, v in other._terms.items():
            self._add(p, c * v)

    def apply(self, f: Callable):
        total = Fraction(0)
        for p, c in self.sorted_terms():
            total = total + c * f(p)
        return total

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda pc: point_key(pc[0]))

    def to_json(self) -> list:
        return [
            {"point": scalar_to_json(p), "coefficient": format_rational(c)}
            for p, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, records: list) -> "FormalFunctional":
        return cls([(scalar_from_json(r["point"]), Q(r["coefficient"])) for r in records])

    def __repr__(self):
        inner = ", ".join(f"({p}, {c})" for p, c in self.sorted_terms())
        return f"FormalFunctional({{{inner}}})"


@dataclass(frozen=True)
class EqualityReport:
    lhs: object
    rhs: object

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"lhs": scalar_to_json(self.lhs), "rhs": scalar_to_json(self.rhs), "holds": self.holds}


# -- operators -------------------------------------------------------------


def forward_difference(f, h, x):
    h, x = _scalar(h), _scalar(x)
    return f(x + h) - f(x)


def mixed_difference(f, steps: Sequence, x):
    """Alternating sum over the 2^s corners x + sum_{r in S} h_r."""
    steps = as_steps(steps)
    x = _scalar(x)
    s = len(steps)
    total = Fraction(0)
    for mask in range(1 << s):
        point = x
        size = 0
        for r in range(s):
            if mask >> r & 1:
                point = point + steps[r]
                size += 1
        value = f(point)
        total = total + value if (s - size) % 2 == 0 else total - value
    return total


def mixed_difference_recursive(f, steps: Sequence, x):
    """Delta_{h1}(Delta_{h2...hs} f)(x), evaluated by literal recursion."""
    steps = as_steps(steps)
    if len(steps) == 1:
        return forward_difference(f, steps[0], x)
    inner = lambda y: mixed_difference_recursive(f, steps[1:], y)  # noqa: E731
    return forward_difference(inner, steps[0], x)


def equal_step_difference(f, h, s: int, x):
    if s < 1:
        raise PreconditionViolation("order s must be >= 1")
    h, x = _scalar(h), _scalar(x)
    total = Fraction(0)
    for k in range(s + 1):
        c = comb(s, k) * (-1) ** (s - k)
        total = total + c * f(x + k * h)
    return total


# -- functionals -----------------------------------------------------------


def mixed_functional(steps: Sequence, x) -> FormalFunctional:
    steps = as_steps(steps)
    F = FormalFunctional.point_mass(_scalar(x))
    for h in steps:
        F = F.shift(h) - F
    return F


def equal_step_functional(h, s: int, x) -> FormalFunctional:
    if s < 1:
        raise PreconditionViolation("order s must be >= 1")
    h, x = _scalar(h), _scalar(x)
    return FormalFunctional([(x + k * h, comb(s, k) * (-1) ** (s - k)) for k in range(s + 1)])


def functional_expansion(kind: str, steps: Sequence, x) -> FormalFunctional:
    """Point-mass form of a difference instance.

    For ``kind == "equal-step"`` the steps are given as the s repeated values
    (h, ..., h); for ``"mixed"`` they are (h1, ..., hs).
    """
    steps = as_steps(steps)
    if kind == MIXED:
        return mixed_functional(steps, x)
    if kind == EQUAL_STEP:
        if any(h != steps[0] for h in steps):
            raise PreconditionViolation(f"equal-step instance has unequal steps {steps}")
        return equal_step_functional(steps[0], len(steps), x)
    raise ValueError(f"unknown difference kind {kind!r}")


# -- identities ------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonTerm:
    epsilon: tuple
    sign: int
    alpha: object
    beta: object


def epsilon_term(steps: Sequence, epsilon: Sequence[int]) -> EpsilonTerm:
    steps = as_steps(steps)
    zero = steps[0] - steps[0]
    alpha = zero
    beta = zero
    for r, (e, h) in enumerate(zip(epsilon, steps), start=1):
        if e:
            alpha = alpha - h * Fraction(1, r)
            beta = beta + h
    return EpsilonTerm(tuple(epsilon), (-1) ** sum(epsilon), alpha, beta)


def epsilon_terms(steps: Sequence, include_zero: bool = True) -> list:
    s = len(steps)
    out = []
    for eps in itertools.product((0, 1), repeat=s):
        if not include_zero and not any(eps):
            continue
        out.append(epsilon_term(steps, eps))
    return out


def czerwik_functional(steps: Sequence, x) -> FormalFunctional:
    """Right side sum_eps (-1)^|eps| Delta^s_{alpha(eps)} at x + beta(eps), as a functional.

    The eps = 0 term has alpha = 0 and its binomial coefficients cancel, so it
    contributes the empty functional; it is skipped.
    """
    steps = as_steps(steps)
    s = len(steps)
    x = _scalar(x)
    out = FormalFunctional()
    for t in epsilon_terms(steps, include_zero=False):
        out.accumulate(equal_step_functional(t.alpha, s, x + t.beta), t.sign)
    return out


def czerwik_identity_check(f, steps: Sequence, x) -> EqualityReport:
    steps = as_steps(steps)
    s = len(steps)
    x = _scalar(x)
    lhs = mixed_difference(f, steps, x)
    rhs = Fraction(0)
    for t in epsilon_terms(steps, include_zero=False):
        rhs = rhs + t.sign * equal_step_difference(f, t.alpha, s, x + t.beta)
    return EqualityReport(lhs, rhs)


def permute(steps: Sequence, sigma: Sequence[int]) -> tuple:
    """Reorder steps by a 0-based permutation: result[i] = steps[sigma[i]]."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(len(steps))):
        raise MalformedPermutation(f"{sigma} is not a permutation of 0..{len(steps) - 1}")
    return tuple(steps[i] for i in sigma)


def permutation_invariance_check(f, steps: Sequence, x, sigma: Sequence[int]) -> EqualityReport:
    steps = as_steps(steps)
    return EqualityReport(mixed_difference(f, steps, x), mixed_difference(f, permute(steps, sigma), x))


def reflection_identity_check(f, h, s: int, x) -> EqualityReport:
    """Delta^s_{-h} f(x) against (-1)^s Delta^s_h f(x - s h)."""
    h, x = _scalar(h), _scalar(x)
    lhs = equal_step_difference(f, -h, s, x)
    rhs = (-1) ** s * equal_step_difference(f, h, s, x - s * h)
    return EqualityReport(lhs, rhs)
