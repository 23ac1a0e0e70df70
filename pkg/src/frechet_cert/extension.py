"""Extension certificates for difference equations with restricted steps.

A certificate writes a target functional, e.g. Delta_h at x with h arbitrary,
as an exact signed combination of difference instances whose steps all lie in
a hypothesis domain.  Any f annihilated by every such instance therefore
annihilates the target.  Generators build certificates; :func:`verify_certificate`
re-expands every instance from scratch and trusts nothing the generator computed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import (
    INFINITY,
    PAdicContext,
    Q,
    format_rational,
    parse_rational,
    point_key,
    scalar_from_json,
    scalar_to_json,
    valuation,
)
from .differences import (
    EQUAL_STEP,
    MIXED,
    FormalFunctional,
    epsilon_terms,
    functional_expansion,
    mixed_functional,
)
from .errors import BudgetExceeded, DegenerateDomain, DomainMismatch, StepInsideBall
from .functions import TabulatedFn

DEFAULT_MAX_INSTANCES = 250_000
DEFAULT_MAX_TELESCOPE = 4096


# -- step domains ----------------------------------------------------------


@dataclass(frozen=True)
class RealOpenInterval:
    a: Fraction
    b: Fraction
    family = "real"

    def __post_init__(self):
        object.__setattr__(self, "a", Q(self.a))
        object.__setattr__(self, "b", Q(self.b))
        if not self.a < self.b:
            raise DegenerateDomain(f"empty interval ({self.a}, {self.b})")

    def contains(self, h) -> bool:
        return isinstance(h, (int, Fraction)) and self.a < h < self.b

    @property
    def midpoint(self) -> Fraction:
        return (self.a + self.b) / 2

    def __str__(self):
        return f"({self.a}, {self.b})"

    def to_json(self):
        return {"variant": "real-open-interval", "a": format_rational(self.a), "b": format_rational(self.b)}


@dataclass(frozen=True)
class PAdicBallComplement:
    """Q_p minus the ball center + p^(-exponent) Z_p, i.e. |h - center|_p > p^exponent."""

    center: Fraction
    exponent: int
    context: PAdicContext
    family = "p-adic"

    def __post_init__(self):
        object.__setattr__(self, "center", Q(self.center))
        if not isinstance(self.context, PAdicContext):
            object.__setattr__(self, "context", PAdicContext(int(self.context)))

    @property
    def prime(self) -> int:
        return self.context.prime

    def contains(self, h) -> bool:
        if not isinstance(h, (int, Fraction)):
            return False
        return valuation(Q(h) - self.center, self.context) < -self.exponent

    def __str__(self):
        return f"Q_{self.prime} \\ ({self.center} + {self.prime}^{-self.exponent} Z_{self.prime})"

    def to_json(self):
        return {
            "variant": "p-adic-ball-complement",
            "center": format_rational(self.center),
            "exponent": self.exponent,
            "prime": self.prime,
        }


@dataclass(frozen=True)
class FullSpace:
    family = None

    def contains(self, h) -> bool:
        return True

    def __str__(self):
        return "everything"

    def to_json(self):
        return {"variant": "full-space"}


@dataclass(frozen=True)
class HypothesisDomain:
    """Where the difference equation is assumed to hold.

    ``mode == "mixed"``: instances Delta_{g1...gs} with g_k in ``domains[k]``.
    ``mode == "equal-step"``: instances Delta_g^s with g in ``domains[0]``.
    """

    mode: str
    domains: tuple
    order: int

    @classmethod
    def mixed(cls, *domains):
        if not domains:
            raise DegenerateDomain("need at least one step domain")
        return cls(MIXED, tuple(domains), len(domains))

    @classmethod
    def equal_step(cls, interval, order: int):
        if order < 1:
            raise DegenerateDomain("order must be >= 1")
        return cls(EQUAL_STEP, (interval,), order)

    def membership_failure(self, kind, steps) -> str | None:
        """None if the instance is admissible, else a description of why not."""
        if kind != self.mode:
            return f"instance kind {kind!r} but hypothesis is {self.mode!r}"
        if len(steps) != self.order:
            return f"instance has {len(steps)} steps, hypothesis order is {self.order}"
        if self.mode == EQUAL_STEP:
            if any(g != steps[0] for g in steps):
                return f"equal-step instance with unequal steps {list(map(str, steps))}"
            if not self.domains[0].contains(steps[0]):
                return f"step {steps[0]} not in {self.domains[0]}"
            return None
        for k, (g, D) in enumerate(zip(steps, self.domains), start=1):
            if not D.contains(g):
                return f"step {k} = {g} not in {D}"
        return None

    def to_json(self):
        return {"mode": self.mode, "order": self.order, "domains": [D.to_json() for D in self.domains]}


def equal_step_hypothesis(delta, order: int, side: str) -> HypothesisDomain:
    delta = Q(delta)
    interval = RealOpenInterval(0, delta) if side == "pos" else RealOpenInterval(-delta, 0)
    return HypothesisDomain.equal_step(interval, order)


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    coefficient: Fraction
    kind: str
    x: object
    steps: tuple

    def to_json(self):
        return {
            "coefficient": format_rational(self.coefficient),
            "kind": self.kind,
            "x": scalar_to_json(self.x),
            "steps": [scalar_to_json(g) for g in self.steps],
        }

    @classmethod
    def from_json(cls, r):
        return cls(parse_rational(r["coefficient"]), r["kind"], scalar_from_json(r["x"]),
                   tuple(scalar_from_json(g) for g in r["steps"]))


def _canonical(instances) -> list:
    """Merge instances with identical (kind, x, steps); keep first-seen order."""
    merged = {}
    for inst in instances:
        key = (inst.kind, inst.x, inst.steps)
        merged[key] = merged.get(key, 0) + inst.coefficient
    return [Instance(Q(c), k, x, s) for (k, x, s), c in merged.items() if c != 0]


@dataclass
class ExtensionCertificate:
    target: FormalFunctional
    instances: list
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.instances)

    def step_values(self):
        for inst in self.instances:
            yield from inst.steps

    def to_json(self):
        return {
            "target": self.target.to_json(),
            "instances": [inst.to_json() for inst in self.instances],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, record):
        return cls(
            FormalFunctional.from_json(record["target"]),
            [Instance.from_json(r) for r in record["instances"]],
            dict(record.get("provenance", {})),
        )


@dataclass
class Verdict:
    accepted: bool
    diagnostics: list
    residual: FormalFunctional

    def __bool__(self):
        return self.accepted

    def to_json(self):
        return {"accepted": self.accepted, "diagnostics": self.diagnostics,
                "residual": self.residual.to_json()}


def verify_certificate(cert: ExtensionCertificate, hyp: HypothesisDomain) -> Verdict:
    diagnostics = []
    for i, inst in enumerate(cert.instances):
        why = hyp.membership_failure(inst.kind, inst.steps)
        if why is not None:
            diagnostics.append(f"instance {i}: {why}")
            break
    total = FormalFunctional()
    for inst in cert.instances:
        total.accumulate(functional_expansion(inst.kind, inst.steps, inst.x), inst.coefficient)
    residual = cert.target - total
    if residual:
        diagnostics.append(f"residual functional has {len(residual)} nonzero terms")
    return Verdict(not diagnostics, diagnostics, residual)


def _difference_target(x, steps) -> FormalFunctional:
    return mixed_functional(steps, x)


# -- order-1 generators ----------------------------------------------------


def real_order1_certificate(x, h, interval: RealOpenInterval) -> ExtensionCertificate:
    """Delta_h at x from steps inside an open interval, by two telescoping chains.

    With k = floor(2|h|/(b-a)) + 1 the steps h2 = mid - h/(2k), h1 = h2 + h/k both
    lie in (a, b), and k*h1 = h + k*h2, so the chains x, x+h1, ..., x+k*h1 and
    x+h, x+h+h2, ..., x+h+k*h2 end at the same point.
    """
    x, h = Q(x), Q(h)
    target = _difference_target(x, (h,))
    prov = {"generator": "real-order1", "x": format_rational(x), "h": format_rational(h),
            "interval": interval.to_json()}
    if interval.contains(h):
        return ExtensionCertificate(target, [Instance(Fraction(1), MIXED, x, (h,))], prov)
    width = interval.b - interval.a
    k = math.floor(2 * abs(h) / width) + 1
    h2 = interval.midpoint - h / (2 * k)
    h1 = h2 + h / k
    instances = [Instance(Fraction(1), MIXED, x + j * h1, (h1,)) for j in range(k)]
    instances += [Instance(Fraction(-1), MIXED, x + h + j * h2, (h2,)) for j in range(k)]
    prov.update(k=k, h1=format_rational(h1), h2=format_rational(h2))
    return ExtensionCertificate(target, _canonical(instances), prov)


def remark3_auxiliary_step(D: PAdicBallComplement) -> Fraction:
    """u = p^(-M) with M = max(N, k0) + 1, k0 = -v(center) (k0 = N when center = 0)."""
    N = D.exponent
    v = valuation(D.center, D.context)
    k0 = N if v == INFINITY else -v
    M = max(N, k0) + 1
    return Fraction(D.prime) ** (-M)


def padic_order1_certificate(x, h, D: PAdicBallComplement) -> ExtensionCertificate:
    """Delta_h[x] = Delta_{u+h}[x] - Delta_u[x+h] with u, u+h outside the ball."""
    x, h = Q(x), Q(h)
    target = _difference_target(x, (h,))
    prov = {"generator": "padic-order1", "x": format_rational(x), "h": format_rational(h),
            "domain": D.to_json()}
    if D.contains(h):
        return ExtensionCertificate(target, [Instance(Fraction(1), MIXED, x, (h,))], prov)
    u = remark3_auxiliary_step(D)
    prov["u"] = format_rational(u)
    instances = [Instance(Fraction(1), MIXED, x, (u + h,)), Instance(Fraction(-1), MIXED, x + h, (u,))]
    return ExtensionCertificate(target, _canonical(instances), prov)


def minimal_telescope_exponent(h, D: PAdicBallComplement, max_length: int = DEFAULT_MAX_TELESCOPE):
    """Smallest m >= 0 with h/p^m in D and p^m <= max_length, or None."""
    h = Q(h)
    if h == 0:
        return None
    m = 0
    while D.prime ** m <= max_length:
        if D.contains(h / Fraction(D.prime) ** m):
            return m
        m += 1
    return None


def telescoping_padic_certificate(x, h, D: PAdicBallComplement, m: int,
                                  max_length: int = DEFAULT_MAX_TELESCOPE) -> ExtensionCertificate:
    """Delta_h[x] = sum_{j < p^m} Delta_{h/p^m}[x + j h/p^m]."""
    x, h = Q(x), Q(h)
    length = D.prime ** m
    if length > max_length:
        raise BudgetExceeded(f"telescope length {length} exceeds budget {max_length}")
    g = h / Fraction(D.prime) ** m
    if not D.contains(g):
        raise StepInsideBall(f"step h/p^m = {g} still lies in the excluded ball (m = {m})")
    instances = [Instance(Fraction(1), MIXED, x + j * g, (g,)) for j in range(length)]
    prov = {"generator": "padic-telescope", "x": format_rational(x), "h": format_rational(h),
            "m": m, "domain": D.to_json()}
    return ExtensionCertificate(_difference_target(x, (h,)), _canonical(instances), prov)


def order1_certificate(x, h, D) -> ExtensionCertificate:
    if isinstance(D, RealOpenInterval):
        return real_order1_certificate(x, h, D)
    if isinstance(D, PAdicBallComplement):
        return padic_order1_certificate(x, h, D)
    if isinstance(D, FullSpace):
        x, h = Q(x), Q(h)
        return ExtensionCertificate(_difference_target(x, (h,)), [Instance(Fraction(1), MIXED, x, (h,))],
                                    {"generator": "full-space"})
    raise TypeError(f"unknown step domain {D!r}")


# -- composite generators --------------------------------------------------


def order1_size(h, D) -> int:
    """Upper bound on len(order1_certificate(x, h, D)) without building it."""
    h = Q(h)
    if isinstance(D, FullSpace) or D.contains(h):
        return 1
    if isinstance(D, RealOpenInterval):
        return 2 * (math.floor(2 * abs(h) / (D.b - D.a)) + 1)
    return 2


def _family(domains) -> str | None:
    families = {D.family for D in domains} - {None}
    if len(families) > 1:
        raise DomainMismatch(f"hypothesis mixes real and p-adic step domains: {sorted(families)}")
    return families.pop() if families else None


def mixed_extension_certificate(x, steps: Sequence, hyp: HypothesisDomain,
                                max_instances: int = DEFAULT_MAX_INSTANCES) -> ExtensionCertificate:
    """Delta_{h1...hs}[x] from mixed instances with step k inside hyp.domains[k].

    Mixed differences are products of commuting shift-difference operators, so
    each coordinate is decomposed on its own with the order-1 generator
    (translation invariant: decomposed once at 0) and the decompositions are
    multiplied out.  This is the coordinate-by-coordinate argument in which a
    permutation brings coordinate k to the front.
    """
    if hyp.mode != MIXED:
        raise ValueError("mixed extension needs a mixed hypothesis")
    x = Q(x)
    steps = tuple(Q(h) for h in steps)
    if len(steps) != hyp.order:
        raise ValueError(f"{len(steps)} target steps for a hypothesis of order {hyp.order}")
    _family(hyp.domains)
    size = math.prod(order1_size(h, D) for h, D in zip(steps, hyp.domains))
    if size > max_instances:
        raise BudgetExceeded(f"certificate would need {size} instances (budget {max_instances})")
    if len(steps) == 1:
        return order1_certificate(x, steps[0], hyp.domains[0])
    parts = []
    for h, D in zip(steps, hyp.domains):
        cert = order1_certificate(0, h, D)
        parts.append([(inst.coefficient, inst.x, inst.steps[0]) for inst in cert.instances])
    merged = {}
    for combo in itertools.product(*parts):
        c = Fraction(1)
        base = x
        g = []
        for coef, offset, step in combo:
            c *= coef
            base += offset
            g.append(step)
        key = (base, tuple(g))
        merged[key] = merged.get(key, 0) + c
    instances = [Instance(Q(c), MIXED, base, g) for (base, g), c in merged.items() if c != 0]
    prov = {"generator": "mixed", "x": format_rational(x), "steps": [format_rational(h) for h in steps],
            "hypothesis": hyp.to_json(), "uncollapsed": size}
    return ExtensionCertificate(_difference_target(x, steps), instances, prov)


def equal_step_extension_certificate(x, steps: Sequence, delta, side: str = "pos",
                                     max_instances: int = DEFAULT_MAX_INSTANCES) -> ExtensionCertificate:
    """Delta_{h1...hs}[x] from equal-step instances Delta_g^s with g in (0, delta) or (-delta, 0).

    1. mixed certificate with every step in (-delta/s, 0);
    2. each mixed instance expanded into equal-step instances with steps
       alpha(eps) = sum eps_r |g_r| / r, which lie in (0, delta) because the
       harmonic sum H_s is at most s; the eps = 0 term is the zero functional;
    3. for ``side == "neg"`` each Delta^s_alpha at y becomes (-1)^s Delta^s_{-alpha}
       at y + s*alpha.
    """
    if side not in ("pos", "neg"):
        raise ValueError(f"side must be 'pos' or 'neg', got {side!r}")
    delta = Q(delta)
    if delta <= 0:
        raise DegenerateDomain(f"delta must be positive, got {delta}")
    x = Q(x)
    steps = tuple(Q(h) for h in steps)
    s = len(steps)
    inner = RealOpenInterval(-delta / s, 0)
    mixed = mixed_extension_certificate(x, steps, HypothesisDomain.mixed(*([inner] * s)), max_instances)
    if len(mixed.instances) * (2 ** s - 1) > max_instances:
        raise BudgetExceeded(
            f"equal-step expansion needs {len(mixed.instances) * (2 ** s - 1)} instances (budget {max_instances})"
        )
    merged = {}
    for inst in mixed.instances:
        for t in epsilon_terms(inst.steps, include_zero=False):
            c = inst.coefficient * t.sign
            base = inst.x + t.beta
            g = t.alpha
            if side == "neg":
                c *= (-1) ** s
                base += s * g
                g = -g
            key = (base, g)
            merged[key] = merged.get(key, 0) + c
    instances = [Instance(Q(c), EQUAL_STEP, base, (g,) * s) for (base, g), c in merged.items() if c != 0]
    prov = {"generator": "equal-step", "x": format_rational(x), "steps": [format_rational(h) for h in steps],
            "delta": format_rational(delta), "side": side, "mixed_instances": len(mixed.instances)}
    return ExtensionCertificate(_difference_target(x, steps), instances, prov)


# -- soundness -------------------------------------------------------------


def _null_function(functionals, seed: int) -> TabulatedFn:
    """A tabulated function annihilated by every functional in ``functionals``.

    Free unknowns take hash-drawn values; the rest solve the linear system exactly.
    """
    base = TabulatedFn(seed)
    pivots = []  # creation order
    pivot_rows = {}
    for F in functionals:
        row = dict(F.terms)
        # earlier pivot rows may mention later pivots, so substitute until stable
        changed = True
        while changed:
            changed = False
            for var in list(row):
                if var in pivot_rows and var in row:
                    c = row.pop(var)
                    for w, d in pivot_rows[var].items():
                        nv = row.get(w, 0) - c * d
                        if nv == 0:
                            row.pop(w, None)
                        else:
                            row[w] = nv
                    changed = True
        if not row:
            continue
        pv = min(row, key=point_key)
        c = row.pop(pv)
        normalized = {w: d / c for w, d in row.items()}
        pivot_rows[pv] = normalized
        pivots.append(pv)
    values = {}
    for pv in reversed(pivots):
        acc = Fraction(0)
        for w, d in pivot_rows[pv].items():
            acc -= d * (values[w] if w in values else base(w))
        values[pv] = acc
    return TabulatedFn(seed, overrides=values)


@dataclass
class SoundnessReport:
    trials: int
    identity_failures: list
    vanishing_failures: list

    @property
    def holds(self) -> bool:
        return not self.identity_failures and not self.vanishing_failures


def soundness_check(cert: ExtensionCertificate, trials: int = 100, seed: int = 0) -> SoundnessReport:
    """Apply an accepted certificate to concrete tabulated functions.

    For arbitrary f the instance values must combine to the target value, and for
    f annihilated by every instance the target value must be 0.
    """
    expansions = [(inst.coefficient, functional_expansion(inst.kind, inst.steps, inst.x))
                  for inst in cert.instances]
    identity_failures, vanishing_failures = [], []
    for t in range(trials):
        f = TabulatedFn(seed * 1_000_003 + 2 * t)
        lhs = cert.target.apply(f)
        rhs = sum((c * F.apply(f) for c, F in expansions), Fraction(0))
        if lhs != rhs:
            identity_failures.append((f.seed, lhs, rhs))
        g = _null_function([F for _, F in expansions], seed * 1_000_003 + 2 * t + 1)
        if any(F.apply(g) != 0 for _, F in expansions):
            vanishing_failures.append((g.seed, "null function construction failed"))
            continue
        value = cert.target.apply(g)
        if value != 0:
            vanishing_failures.append((g.seed, value))
    return SoundnessReport(trials, identity_failures, vanishing_failures)
