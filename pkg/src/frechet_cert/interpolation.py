"""Lagrange interpolation and the propagation argument behind the p-adic Frechet theorem.

If Delta_{h0}^{n+1} f vanishes along the line x0 + h0*Z, the degree-<=n
interpolant p0 on x0, x0 + h0, ..., x0 + n*h0 is forced to agree with f on the
whole line; refining the step to h0/p^m gives the same interpolant.  On a
computer only finitely many points of these lines can be visited, so every
report lists exactly which base points were checked.  Continuity of f, used to
pass from the dense set to all of Q_p, is never tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import PAdicContext, Q, scalar_to_json
from .differences import equal_step_difference
from .errors import DuplicateNode, HypothesisViolation, PreconditionViolation

UNTESTED = (
    "continuity of f (density arguments replaced by finite samples)",
    "Delta^(n+1) vanishing beyond the listed base points",
)


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class DensePolynomial:
    """Coefficients constant term first, trailing zeros trimmed."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _trim(self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        a = a + (Fraction(0),) * (n - len(a))
        b = b + (Fraction(0),) * (n - len(b))
        return DensePolynomial(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other):
        if not isinstance(other, DensePolynomial):
            return DensePolynomial(tuple(c * other for c in self.coefficients))
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return DensePolynomial(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return DensePolynomial(tuple(out))

    def to_json(self):
        return [scalar_to_json(c) for c in self.coefficients]


def lagrange_interpolate(nodes: Sequence, values: Sequence) -> DensePolynomial:
    nodes = [Fraction(x) if isinstance(x, int) else x for x in nodes]
    if len(nodes) != len(values):
        raise PreconditionViolation("nodes and values differ in length")
    if len(set(nodes)) != len(nodes):
        raise DuplicateNode(f"interpolation nodes are not distinct: {nodes}")
    result = DensePolynomial(())
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        basis = DensePolynomial((Fraction(1),))
        denom = Fraction(1)
        for j, xj in enumerate(nodes):
            if j != i:
                basis = basis * DensePolynomial((-xj, Fraction(1)))
                denom = denom * (xi - xj)
        result = result + basis * (yi / denom)
    return result


# -- propagation -----------------------------------------------------------


def _check_line(f, x0, h, n, lo, hi) -> list:
    """Check Delta_h^{n+1} f = 0 at the base points needed to reach x0 + k h, lo <= k <= hi.

    Forward base points 0..hi-n-1 first, then backward -1..lo.
    """
    bases = list(range(0, hi - n)) + list(range(-1, lo - 1, -1))
    checked = []
    for k in bases:
        point = x0 + k * h
        value = equal_step_difference(f, h, n + 1, point)
        if value != 0:
            raise HypothesisViolation(point, value, h)
        checked.append(point)
    return checked


@dataclass
class PropagationReport:
    nodes: list
    polynomial: DensePolynomial
    checked_base_points: list
    residuals: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    untested: tuple = UNTESTED

    @property
    def agrees(self) -> bool:
        return not self.residuals and not self.violations

    @property
    def first_discrepancy(self):
        return self.residuals[0] if self.residuals else None

    def to_json(self):
        return {
            "nodes": [scalar_to_json(x) for x in self.nodes],
            "coefficients": self.polynomial.to_json(),
            "checked_base_points": [scalar_to_json(x) for x in self.checked_base_points],
            "residuals": [
                {"point": scalar_to_json(x), "residual": scalar_to_json(r)} for x, r in self.residuals
            ],
            "violations": [
                {"point": scalar_to_json(x), "value": scalar_to_json(v)} for x, v in self.violations
            ],
            "untested": list(self.untested),
        }


def interpolant_on_line(f, x0, h, n) -> tuple:
    nodes = [x0 + k * h for k in range(n + 1)]
    return nodes, lagrange_interpolate(nodes, [f(x) for x in nodes])


def propagation_check(f, x0, h0, n: int, k_range: tuple) -> PropagationReport:
    """Interpolate on x0 + k h0 (k = 0..n) and confirm agreement for k in k_range."""
    x0 = Fraction(x0) if isinstance(x0, int) else x0
    h0 = Fraction(h0) if isinstance(h0, int) else h0
    lo, hi = k_range
    if lo > 0 or hi < n:
        raise PreconditionViolation(f"k_range {k_range} must contain 0..{n}")
    checked = _check_line(f, x0, h0, n, lo, hi)
    nodes, p0 = interpolant_on_line(f, x0, h0, n)
    residuals = []
    for k in range(lo, hi + 1):
        x = x0 + k * h0
        r = f(x) - p0(x)
        if r != 0:
            residuals.append((x, r))
    return PropagationReport(nodes, p0, checked, residuals)


@dataclass
class RefinementReport:
    coarse: DensePolynomial
    fine: DensePolynomial
    fine_step: object
    checked_base_points: list
    untested: tuple = UNTESTED

    @property
    def consistent(self) -> bool:
        return self.coarse == self.fine

    def to_json(self):
        return {
            "coarse_coefficients": self.coarse.to_json(),
            "fine_coefficients": self.fine.to_json(),
            "fine_step": scalar_to_json(self.fine_step),
            "consistent": self.consistent,
            "checked_base_points": [scalar_to_json(x) for x in self.checked_base_points],
            "untested": list(self.untested),
        }


def refinement_consistency(f, x0, h0, n: int, m: int, ctx, k_range=None) -> RefinementReport:
    """Compare the interpolants on the h0-line and the (h0/p^m)-line through x0."""
    if not isinstance(ctx, PAdicContext):
        ctx = PAdicContext(int(ctx))
    x0, h0 = Q(x0), Q(h0)
    fine_step = h0 / Fraction(ctx.prime) ** m
    lo, hi = k_range if k_range is not None else (-(n + 2), 2 * n + 2)
    checked = _check_line(f, x0, h0, n, lo, hi) + _check_line(f, x0, fine_step, n, lo, hi)
    _, coarse = interpolant_on_line(f, x0, h0, n)
    _, fine = interpolant_on_line(f, x0, fine_step, n)
    return RefinementReport(coarse, fine, fine_step, checked)


@dataclass(frozen=True)
class GridSpec:
    """Finite sample x0 + k*h0/p^m of the dense set Gamma_{x0,h0}."""

    x0: Fraction
    h0: Fraction
    m_range: tuple
    k_range: tuple

    def points(self, ctx) -> list:
        if not isinstance(ctx, PAdicContext):
            ctx = PAdicContext(int(ctx))
        p = Fraction(ctx.prime)
        seen = {}
        for m in range(self.m_range[0], self.m_range[1] + 1):
            for k in range(self.k_range[0], self.k_range[1] + 1):
                x = Q(self.x0) + k * Q(self.h0) / p ** m
                seen.setdefault(x, None)
        return list(seen)


def grid_agreement(f, grid: GridSpec, n: int, ctx) -> PropagationReport:
    """Residuals f - p0 over every sampled point of Gamma_{x0,h0}."""
    nodes, p0 = interpolant_on_line(f, Q(grid.x0), Q(grid.h0), n)
    residuals = [(x, f(x) - p0(x)) for x in grid.points(ctx)]
    return PropagationReport(nodes, p0, [], [(x, r) for x, r in residuals if r != 0])


@dataclass
class LocalReport(PropagationReport):
    center: Fraction = Fraction(0)
    exponent: int = 0
    sample: list = field(default_factory=list)

    @property
    def locally_polynomial(self) -> bool:
        return self.agrees

    def to_json(self):
        out = super().to_json()
        out.update({"center": scalar_to_json(self.center), "exponent": self.exponent,
                    "sample_size": len(self.sample)})
        return out


def local_reconstruct(f, a, N: int, n: int, ctx, sample_size: int = 10) -> LocalReport:
    """Degree-<=n interpolant on a + k p^N and its residuals on a + p^N * Z.

    Hypothesis failures are recorded in ``violations`` rather than raised.
    """
    if not isinstance(ctx, PAdicContext):
        ctx = PAdicContext(int(ctx))
    a = Q(a)
    step = Fraction(ctx.prime) ** N
    nodes, p0 = interpolant_on_line(f, a, step, n)
    violations, checked = [], []
    for k in range(-sample_size, sample_size - n):
        x = a + k * step
        value = equal_step_difference(f, step, n + 1, x)
        checked.append(x)
        if value != 0:
            violations.append((x, value))
    sample = [a + k * step for k in range(-sample_size, sample_size + 1)]
    residuals = [(x, f(x) - p0(x)) for x in sample]
    residuals = [(x, r) for x, r in residuals if r != 0]
    return LocalReport(nodes, p0, checked, residuals, violations, UNTESTED, a, N, sample)
