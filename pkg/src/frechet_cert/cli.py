"""Command-line entry point.

Exit status: 0 when every check passes, 1 on a verification failure,
2 on a configuration or usage error.  Negative rationals must be attached
to their flag, e.g. ``--h=-1/3``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import PAdicContext, parse_rational, scalar_to_json
from .campaign import SUITES, CampaignConfig, run_campaign, run_suite
from .errors import ConfigError, FrechetCertError, HypothesisViolation
from .extension import (
    DEFAULT_MAX_INSTANCES,
    DEFAULT_MAX_TELESCOPE,
    HypothesisDomain,
    PAdicBallComplement,
    RealOpenInterval,
    equal_step_extension_certificate,
    equal_step_hypothesis,
    mixed_extension_certificate,
    padic_order1_certificate,
    telescoping_padic_certificate,
    verify_certificate,
)
from .functions import BallIndicatorFn, PolynomialFn, TabulatedFn
from .interpolation import propagation_check, refinement_consistency

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} (use num/den or an integer)")


def rational_list(text: str) -> list:
    return [rational(t) for t in text.split(",") if t.strip()]


def int_pair(text: str) -> tuple:
    try:
        lo, hi = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi integers, got {text!r}")
    return lo, hi


def parse_function(spec: str, prime: int):
    """``poly:c0,c1,...`` | ``ball:center,N`` | ``tab:seed``."""
    kind, _, body = spec.partition(":")
    if kind == "poly":
        return PolynomialFn(rational_list(body))
    if kind == "ball":
        center, n = body.split(",")
        return BallIndicatorFn(rational(center), int(n), PAdicContext(prime))
    if kind == "tab":
        return TabulatedFn(int(body))
    raise ConfigError(f"unknown function spec {spec!r}")


def _emit(doc: dict, path=None):
    text = json.dumps(doc, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _certificate_doc(cert, hyp):
    verdict = verify_certificate(cert, hyp)
    return {"hypothesis": hyp.to_json(), "certificate": cert.to_json(), "verdict": verdict.to_json()}, verdict


def cmd_verify(args):
    config = CampaignConfig(
        seed=args.seed,
        trials=args.trials,
        orders=[args.order] if args.order else [1, 2, 3, 4, 5],
        prime=args.prime,
        suites=[args.suite],
    )
    fragment, elapsed = run_suite(args.suite, config)
    _emit({"config": config.to_json(), "ok": fragment["ok"], "suites": [fragment],
           "timings": {args.suite: round(elapsed, 6)}}, args.report)
    return EXIT_OK if fragment["ok"] else EXIT_FAIL


def _steps(values, order):
    if len(values) == 1 and order:
        return values * order
    if order and len(values) != order:
        raise ConfigError(f"{len(values)} steps given for order {order}")
    return values


def cmd_extend_real(args):
    a, b = args.interval
    I = RealOpenInterval(a, b)
    steps = _steps(args.h, args.order)
    hyp = HypothesisDomain.mixed(*([I] * len(steps)))
    cert = mixed_extension_certificate(args.x, steps, hyp, args.max_instances)
    doc, verdict = _certificate_doc(cert, hyp)
    _emit(doc, args.report)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_extend_padic(args):
    D = PAdicBallComplement(args.center, args.exponent, PAdicContext(args.prime))
    hyp = HypothesisDomain.mixed(D)
    if args.telescope is not None:
        cert = telescoping_padic_certificate(args.x, args.h, D, args.telescope, args.max_telescope)
    else:
        cert = padic_order1_certificate(args.x, args.h, D)
    doc, verdict = _certificate_doc(cert, hyp)
    _emit(doc, args.report)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_equal_step(args):
    steps = _steps(args.steps, args.order)
    cert = equal_step_extension_certificate(args.x, steps, args.delta, args.side, args.max_instances)
    hyp = equal_step_hypothesis(args.delta, len(steps), args.side)
    doc, verdict = _certificate_doc(cert, hyp)
    _emit(doc, args.report)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_interpolate(args):
    f = parse_function(args.function, args.prime)
    doc = {"function": f.to_json(), "prime": args.prime}
    try:
        rep = propagation_check(f, args.x0, args.h0, args.degree, args.krange)
        doc["propagation"] = rep.to_json()
        ok = rep.agrees
        if args.refine is not None:
            ref = refinement_consistency(f, args.x0, args.h0, args.degree, args.refine, args.prime, args.krange)
            doc["refinement"] = ref.to_json()
            ok = ok and ref.consistent
    except HypothesisViolation as exc:
        doc["hypothesis_violation"] = {"point": scalar_to_json(exc.point), "value": scalar_to_json(exc.value),
                                       "step": scalar_to_json(exc.step)}
        ok = False
    doc["ok"] = ok
    _emit(doc, args.report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_campaign(args):
    overrides = {"seed": args.seed, "trials": args.trials}
    if args.config:
        config = CampaignConfig.from_file(args.config, **overrides)
    else:
        config = CampaignConfig(**{k: v for k, v in overrides.items() if v is not None})
    report = run_campaign(config)
    _emit(report, args.report)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frechet-cert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--report", help="write the JSON report here instead of stdout")

    p = sub.add_parser("verify", help="run one verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", type=int)
    p.add_argument("--prime", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extend-real", help="certificate from steps in an open interval")
    p.add_argument("--x", type=rational, default=Fraction(0))
    p.add_argument("--h", type=rational_list, required=True, help="one step, or s comma-separated steps")
    p.add_argument("--interval", type=rational_list, required=True, help="a,b")
    p.add_argument("--order", type=int)
    p.add_argument("--max-instances", type=int, default=DEFAULT_MAX_INSTANCES)
    common(p)
    p.set_defaults(func=cmd_extend_real)

    p = sub.add_parser("extend-padic", help="certificate from steps outside a p-adic ball")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--x", type=rational, default=Fraction(0))
    p.add_argument("--h", type=rational, required=True)
    p.add_argument("--center", type=rational, default=Fraction(0))
    p.add_argument("--exponent", type=int, required=True)
    p.add_argument("--telescope", type=int, help="use the p^m-term telescoping chain with this m")
    p.add_argument("--max-telescope", type=int, default=DEFAULT_MAX_TELESCOPE)
    common(p)
    p.set_defaults(func=cmd_extend_padic)

    p = sub.add_parser("equal-step", help="certificate from equal-step differences with small steps")
    p.add_argument("--delta", type=rational, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--side", choices=("neg", "pos"), default="pos")
    p.add_argument("--steps", type=rational_list, required=True)
    p.add_argument("--x", type=rational, default=Fraction(0))
    p.add_argument("--max-instances", type=int, default=DEFAULT_MAX_INSTANCES)
    common(p)
    p.set_defaults(func=cmd_equal_step)

    p = sub.add_parser("interpolate", help="propagate the interpolant along x0 + k*h0")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--x0", type=rational, required=True)
    p.add_argument("--h0", type=rational, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--krange", type=int_pair, required=True)
    p.add_argument("--refine", type=int)
    p.add_argument("--function", default="ball:0,0", help="poly:c0,c1,... | ball:center,N | tab:seed")
    common(p)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("campaign", help="run a full seeded campaign")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    common(p)
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "interval", None) is not None and len(args.interval) != 2:
        parser.error("--interval takes exactly two values a,b")
    try:
        return args.func(args)
    except (ConfigError, FrechetCertError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
