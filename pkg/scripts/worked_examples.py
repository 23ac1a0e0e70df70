"""Print the small worked values the library is expected to reproduce."""

from fractions import Fraction as F

from frechet_cert.arith import PAdicContext, QuadraticElement, abs_p, digit_expansion
from frechet_cert.differences import (
    czerwik_identity_check,
    equal_step_difference,
    forward_difference,
    mixed_difference,
)
from frechet_cert.extension import (
    HypothesisDomain,
    PAdicBallComplement,
    RealOpenInterval,
    equal_step_extension_certificate,
    equal_step_hypothesis,
    mixed_extension_certificate,
    padic_order1_certificate,
    real_order1_certificate,
    verify_certificate,
)
from frechet_cert.functions import ClassPiecewiseFn, monomial, remark1_witness, zp_indicator


def show(label, value):
    print(f"{label:<44} {value}")


def main():
    p3 = PAdicContext(3)
    show("digits of -1 in Q_3", digit_expansion(-1, p3))
    show("digits of 1/2 in Q_3", digit_expansion(F(1, 2), p3))
    show("|28/3|_3", abs_p(F(28, 3), p3))

    cube = monomial(3)
    show("D_1 D_2 x^3 at 0", mixed_difference(cube, [1, 2], 0))
    show("D_1^3 x^3 at 0", equal_step_difference(cube, 1, 3, 0))
    rep = czerwik_identity_check(cube, [1, 2, 5], 0)
    show("mixed difference x^3, steps (1,2,5)", f"{rep.lhs} = {rep.rhs}")

    show("D_{1/3} 1_{Z_3} at 0", forward_difference(zp_indicator(3), F(1, 3), 0))
    show("cubic difference of piecewise fn at 2, h=sqrt2", remark1_witness().value)
    show("  same at x=1", equal_step_difference(ClassPiecewiseFn(2), QuadraticElement.sqrt(2), 3, QuadraticElement(1)))

    I = RealOpenInterval(1, 2)
    cert = real_order1_certificate(0, 10, I)
    show("real certificate h=10 on (1,2)",
         f"k={cert.provenance['k']} h1={cert.provenance['h1']} h2={cert.provenance['h2']} instances={len(cert)}")

    D = PAdicBallComplement(0, 1, p3)
    cert = padic_order1_certificate(0, F(1, 3), D)
    terms = ", ".join(f"{'+' if i.coefficient > 0 else '-'}D_{i.steps[0]}[{i.x}]" for i in cert.instances)
    show("3-adic certificate h=1/3, |h|_3 > 3", terms)

    hyp = HypothesisDomain.mixed(I, I)
    cert = mixed_extension_certificate(0, (10, 10), hyp)
    show("2-D real certificate (10,10)",
         f"{cert.provenance['uncollapsed']} -> {len(cert)} instances, accepted={verify_certificate(cert, hyp).accepted}")

    for side in ("pos", "neg"):
        cert = equal_step_extension_certificate(0, (5, 7), 1, side)
        ok = verify_certificate(cert, equal_step_hypothesis(1, 2, side)).accepted
        show(f"equal-step (5,7), delta=1, side={side}", f"{len(cert)} instances, accepted={ok}")


if __name__ == "__main__":
    main()
