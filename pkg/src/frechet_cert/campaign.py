"""Seeded verification suites and the campaign that runs them."""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .arith import (
    PAdicContext,
    QuadraticElement,
    digit_expansion,
    is_prime,
    scalar_to_json,
    ultrametric_dominance,
    valuation,
)
from .differences import (
    czerwik_identity_check,
    equal_step_difference,
    mixed_difference_recursive,
    permutation_invariance_check,
    reflection_identity_check,
)
from .errors import ConfigError, HypothesisViolation
from .extension import (
    DEFAULT_MAX_INSTANCES,
    DEFAULT_MAX_TELESCOPE,
    HypothesisDomain,
    PAdicBallComplement,
    RealOpenInterval,
    equal_step_extension_certificate,
    equal_step_hypothesis,
    minimal_telescope_exponent,
    padic_order1_certificate,
    real_order1_certificate,
    soundness_check,
    telescoping_padic_certificate,
    verify_certificate,
)
from .functions import (
    PolynomialFn,
    TabulatedFn,
    ball_indicator_local_flatness,
    forward_difference,
    monomial,
    remark1_vanishing_check,
    remark1_witness,
    zp_indicator,
)
from .interpolation import DensePolynomial, local_reconstruct, propagation_check, refinement_consistency

SUITES = (
    "identity3",
    "permutation",
    "reflection",
    "annihilation",
    "ultrametric",
    "digits",
    "extend-real",
    "extend-padic",
    "equal-step",
    "interpolation",
    "counterexamples",
)

MAX_FAILURE_PAYLOADS = 20


@dataclass
class Budgets:
    max_certificate_instances: int = DEFAULT_MAX_INSTANCES
    max_telescope_length: int = DEFAULT_MAX_TELESCOPE


@dataclass
class CampaignConfig:
    seed: int = 0
    trials: int = 20
    orders: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    prime: int | None = None
    suites: list = field(default_factory=lambda: list(SUITES))
    budgets: Budgets = field(default_factory=Budgets)
    # sample sizes inside a single trial (tabulated functions per certificate)
    soundness_functions: int = 5

    def __post_init__(self):
        if isinstance(self.budgets, dict):
            self.budgets = Budgets(**self.budgets)
        self.validate()

    def validate(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        if not self.orders or any(not isinstance(s, int) or not 1 <= s <= 6 for s in self.orders):
            raise ConfigError(f"orders must be a non-empty subset of 1..6, got {self.orders!r}")
        if self.prime is not None and not is_prime(self.prime):
            raise ConfigError(f"{self.prime} is not prime")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_file(cls, path, **overrides):
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    def to_json(self):
        return asdict(self)


# -- helpers ---------------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 2 ** 16, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def random_seed(rng: random.Random) -> int:
    return rng.getrandbits(64)


def _q(x):
    return scalar_to_json(x)


class SuiteResult:
    def __init__(self, name):
        self.name = name
        self.passed = 0
        self.failed = 0
        self.failures = []
        self.stats = {}

    def record(self, ok: bool, payload=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_FAILURE_PAYLOADS:
                self.failures.append(payload)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def to_json(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "ok": self.ok,
            "stats": self.stats,
            "failures": self.failures,
        }


def _rng(config: CampaignConfig, name: str) -> random.Random:
    return random.Random(f"{config.seed}:{name}")


def _primes(config):
    return [config.prime] if config.prime else [2, 3, 5, 7]


# -- suites ----------------------------------------------------------------


def suite_identity3(config, rng, res):
    for s in config.orders:
        if s > 5:
            continue
        for _ in range(config.trials):
            seed = random_seed(rng)
            steps = tuple(random_rational(rng) for _ in range(s))
            x = random_rational(rng)
            rep = czerwik_identity_check(TabulatedFn(seed), steps, x)
            res.record(rep.holds, {"s": s, "seed": seed, "steps": [_q(h) for h in steps], "x": _q(x),
                                   "lhs": _q(rep.lhs), "rhs": _q(rep.rhs)})


def suite_permutation(config, rng, res):
    for s in config.orders:
        if s > 4:
            continue
        for _ in range(config.trials):
            seed = random_seed(rng)
            f = TabulatedFn(seed)
            steps = tuple(random_rational(rng) for _ in range(s))
            x = random_rational(rng)
            for sigma in itertools.permutations(range(s)):
                rep = permutation_invariance_check(f, steps, x, sigma)
                res.record(rep.holds, {"s": s, "seed": seed, "steps": [_q(h) for h in steps], "x": _q(x),
                                       "sigma": list(sigma), "lhs": _q(rep.lhs), "rhs": _q(rep.rhs)})


def suite_reflection(config, rng, res):
    for s in config.orders:
        if s > 5:
            continue
        for _ in range(config.trials):
            seed = random_seed(rng)
            h, x = random_rational(rng), random_rational(rng)
            rep = reflection_identity_check(TabulatedFn(seed), h, s, x)
            res.record(rep.holds, {"s": s, "seed": seed, "h": _q(h), "x": _q(x),
                                   "lhs": _q(rep.lhs), "rhs": _q(rep.rhs)})


def suite_annihilation(config, rng, res):
    for n in range(0, 7):
        for _ in range(config.trials):
            coeffs = [random_rational(rng, 1000) for _ in range(n)] + [random_rational(rng, 1000, nonzero=True)]
            f = PolynomialFn(coeffs)
            h, x = random_rational(rng, 1000), random_rational(rng, 1000)
            zero = equal_step_difference(f, h, n + 1, x)
            res.record(zero == 0, {"check": "annihilation", "n": n, "coefficients": [_q(c) for c in coeffs],
                                   "h": _q(h), "x": _q(x), "value": _q(zero)})
            if n == 0:
                continue
            lead = equal_step_difference(monomial(n), h, n, x)
            expected = math.factorial(n) * h ** n
            res.record(lead == expected, {"check": "leading-term", "n": n, "h": _q(h), "x": _q(x),
                                          "value": _q(lead), "expected": _q(expected)})
            if n <= 4:
                brute = mixed_difference_recursive(monomial(n), (h,) * n, x)
                res.record(brute == lead, {"check": "recursion-oracle", "n": n, "h": _q(h), "x": _q(x),
                                           "recursive": _q(brute), "binomial": _q(lead)})


def suite_ultrametric(config, rng, res):
    for p in _primes(config):
        ctx = PAdicContext(p)
        for _ in range(config.trials):
            x = random_rational(rng, nonzero=True) * Fraction(p) ** rng.randint(-4, 4)
            y = random_rational(rng, nonzero=True) * Fraction(p) ** rng.randint(-4, 4)
            vx, vy = valuation(x, ctx), valuation(y, ctx)
            res.record(valuation(x * y, ctx) == vx + vy,
                       {"check": "v(xy)", "p": p, "x": _q(x), "y": _q(y)})
            vs = valuation(x + y, ctx)
            res.record(vs >= min(vx, vy), {"check": "v(x+y)>=min", "p": p, "x": _q(x), "y": _q(y)})
            if vx != vy:
                rep = ultrametric_dominance(x, y, ctx)
                res.record(rep.holds, {"check": "dominance", "p": p, "x": _q(x), "y": _q(y),
                                       "abs_x": _q(rep.abs_x), "abs_y": _q(rep.abs_y),
                                       "abs_sum": _q(rep.abs_sum)})


def suite_digits(config, rng, res):
    for p in _primes(config):
        for _ in range(config.trials):
            K = rng.randint(1, 12)
            ctx = PAdicContext(p, K)
            x = random_rational(rng)
            view = digit_expansion(x, ctx)
            ok = all(0 <= a < p for a in view.digits)
            if x != 0:
                ok = ok and view.digits[0] >= 1 and valuation(x - view.partial_sum(), ctx) >= view.valuation + K
            res.record(ok, {"p": p, "K": K, "x": _q(x), "view": str(view)})


def suite_extend_real(config, rng, res):
    sizes = []
    for _ in range(config.trials):
        a = random_rational(rng, 64)
        b = a + Fraction(rng.randint(1, 64), rng.randint(1, 16))
        h = random_rational(rng, 64, nonzero=True)
        x = random_rational(rng, 64)
        I = RealOpenInterval(a, b)
        cert = real_order1_certificate(x, h, I)
        verdict = verify_certificate(cert, HypothesisDomain.mixed(I))
        k = math.floor(2 * abs(h) / (b - a)) + 1
        expected = 1 if I.contains(h) else 2 * k
        sound = soundness_check(cert, config.soundness_functions, random_seed(rng))
        sizes.append(len(cert))
        res.record(verdict.accepted and len(cert) == expected and sound.holds,
                   {"x": _q(x), "h": _q(h), "interval": [_q(a), _q(b)], "size": len(cert),
                    "expected_size": expected, "verdict": verdict.to_json() if not verdict else True,
                    "soundness": sound.holds})
    res.stats["instances"] = {"total": sum(sizes), "max": max(sizes, default=0)}


def suite_extend_padic(config, rng, res):
    telescoped = 0
    for _ in range(config.trials):
        p = rng.choice(_primes(config))
        a = Fraction(0) if rng.random() < 0.5 else random_rational(rng, 200, nonzero=True)
        N = rng.randint(-3, 3)
        D = PAdicBallComplement(a, N, p)
        x = random_rational(rng, 200)
        h = random_rational(rng, 200, nonzero=True) * Fraction(p) ** rng.randint(-3, 3)
        cert = padic_order1_certificate(x, h, D)
        hyp = HypothesisDomain.mixed(D)
        verdict = verify_certificate(cert, hyp)
        ok = verdict.accepted and len(cert) in (1, 2)
        payload = {"p": p, "center": _q(a), "N": N, "x": _q(x), "h": _q(h), "size": len(cert),
                   "accepted": verdict.accepted}
        m = minimal_telescope_exponent(h, D, config.budgets.max_telescope_length)
        if m is not None:
            tele = telescoping_padic_certificate(x, h, D, m, config.budgets.max_telescope_length)
            tv = verify_certificate(tele, hyp)
            ok = ok and tv.accepted and tele.target == cert.target
            payload.update(telescope_m=m, telescope_accepted=tv.accepted)
            telescoped += 1
        res.record(ok, payload)
    res.stats["telescoped"] = telescoped


def suite_equal_step(config, rng, res):
    for s in config.orders:
        if s not in (1, 2, 3):
            continue
        for side in ("pos", "neg"):
            for _ in range(config.trials):
                delta = Fraction(rng.randint(1, 8), rng.randint(1, 4))
                steps = tuple(random_rational(rng, 4) / 4 for _ in range(s))
                x = random_rational(rng, 64)
                cert = equal_step_extension_certificate(x, steps, delta, side, config.budgets.max_certificate_instances)
                hyp = equal_step_hypothesis(delta, s, side)
                verdict = verify_certificate(cert, hyp)
                lo, hi = (Fraction(0), delta) if side == "pos" else (-delta, Fraction(0))
                strict = all(lo < g < hi for g in cert.step_values())
                res.record(verdict.accepted and strict,
                           {"s": s, "side": side, "delta": _q(delta), "steps": [_q(h) for h in steps],
                            "x": _q(x), "size": len(cert), "accepted": verdict.accepted, "strict": strict})


def suite_interpolation(config, rng, res):
    for n in range(0, 6):
        for _ in range(config.trials):
            p = rng.choice(_primes(config))
            coeffs = [random_rational(rng, 100) for _ in range(n + 1)]
            f = PolynomialFn(coeffs)
            x0 = random_rational(rng, 100)
            h0 = random_rational(rng, 100, nonzero=True)
            rep = propagation_check(f, x0, h0, n, (-20, 20))
            ok = rep.agrees and rep.polynomial == DensePolynomial(tuple(coeffs))
            for m in range(4):
                ref = refinement_consistency(f, x0, h0, n, m, p)
                ok = ok and ref.consistent
            res.record(ok, {"n": n, "p": p, "coefficients": [_q(c) for c in coeffs], "x0": _q(x0), "h0": _q(h0)})
    # negative controls: ball indicators whose lines leave the ball must be flagged
    for p in _primes(config):
        phi = zp_indicator(p)
        try:
            propagation_check(phi, Fraction(0), Fraction(1, p), 0, (-5, 5))
            res.record(False, {"control": "propagation", "p": p, "error": "violation not reported"})
        except HypothesisViolation as exc:
            res.record(exc.point == 0 and exc.value == -1, {"control": "propagation", "p": p})
        try:
            refinement_consistency(phi, 0, 1, 0, 1, p)
            res.record(False, {"control": "refinement", "p": p, "error": "violation not reported"})
        except HypothesisViolation:
            res.record(True)
        local = local_reconstruct(phi, 0, -1, 0, p, 10)
        res.record(not local.agrees, {"control": "local", "p": p})


def suite_counterexamples(config, rng, res):
    for p in _primes(config):
        phi = zp_indicator(p)
        jump = forward_difference(phi, Fraction(1, p), Fraction(0))
        res.record(jump == -1, {"check": "Delta_{1/p} phi(0) = -1", "p": p, "value": _q(jump)})
        for _ in range(config.trials):
            x = random_rational(rng, 500) * Fraction(p) ** rng.randint(-3, 3)
            den = rng.randint(1, 500)
            while den % p == 0:
                den //= p
            h = Fraction(rng.randint(-500, 500), den)
            rep = ball_indicator_local_flatness(phi, x, h)
            res.record(rep.holds, {"check": "flatness", "p": p, "x": _q(x), "h": _q(h), "value": _q(rep.lhs)})
    w = remark1_witness()
    res.record(w.value == 2, {"check": "remark1-witness", "x": _q(w.x), "h": _q(w.h), "s": w.s, "value": _q(w.value)})
    for _ in range(config.trials):
        x = QuadraticElement(random_rational(rng, 500), random_rational(rng, 500) if rng.random() < 0.8 else 0)
        steps = tuple(random_rational(rng, 500) for _ in range(3))
        rep = remark1_vanishing_check(steps, x)
        res.record(rep.holds, {"check": "remark1-vanishing", "x": _q(x), "steps": [_q(h) for h in steps],
                               "value": _q(rep.lhs)})


_SUITE_FUNCS = {
    "identity3": suite_identity3,
    "permutation": suite_permutation,
    "reflection": suite_reflection,
    "annihilation": suite_annihilation,
    "ultrametric": suite_ultrametric,
    "digits": suite_digits,
    "extend-real": suite_extend_real,
    "extend-padic": suite_extend_padic,
    "equal-step": suite_equal_step,
    "interpolation": suite_interpolation,
    "counterexamples": suite_counterexamples,
}


def run_suite(name: str, config: CampaignConfig) -> tuple:
    """Run one suite; returns (report fragment, elapsed seconds)."""
    if name not in _SUITE_FUNCS:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    config.validate()
    res = SuiteResult(name)
    start = time.perf_counter()
    _SUITE_FUNCS[name](config, _rng(config, name), res)
    return res.to_json(), time.perf_counter() - start


def run_campaign(config: CampaignConfig) -> dict:
    suites, timings = [], {}
    for name in config.suites:
        fragment, elapsed = run_suite(name, config)
        suites.append(fragment)
        timings[name] = round(elapsed, 6)
    return {
        "config": config.to_json(),
        "ok": all(s["ok"] for s in suites),
        "suites": suites,
        "timings": timings,
    }


def strip_timings(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timings"}
