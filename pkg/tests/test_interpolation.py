from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from frechet_cert.errors import DuplicateNode, HypothesisViolation
from frechet_cert.functions import PolynomialFn, TabulatedFn, zp_indicator
from frechet_cert.interpolation import (
    DensePolynomial,
    GridSpec,
    grid_agreement,
    lagrange_interpolate,
    local_reconstruct,
    propagation_check,
    refinement_consistency,
)

from _support import rationals

F = Fraction


def _solve_vandermonde(nodes, values):
    """Independent oracle: exact linear solve of the Vandermonde system."""
    n = len(nodes)
    V = sympy.Matrix(n, n, lambda i, j: sympy.Rational(nodes[i]) ** j)
    c = V.LUsolve(sympy.Matrix([sympy.Rational(v) for v in values]))
    return tuple(F(int(sympy.fraction(ci)[0]), int(sympy.fraction(ci)[1])) for ci in c)


def test_lagrange_examples():
    assert _solve_vandermonde([0, 1, 2], [1, 2, 5]) == (1, 0, 1)
    assert lagrange_interpolate([0, 1, 2], [1, 2, 5]) == DensePolynomial((1, 0, 1))
    assert lagrange_interpolate([7], [4]) == DensePolynomial((4,))
    f = PolynomialFn([3, F(-1, 2), 0, 2])
    nodes = [F(k, 3) for k in range(4)]
    assert lagrange_interpolate(nodes, [f(x) for x in nodes]).coefficients == f.coefficients


def test_duplicate_nodes():
    with pytest.raises(DuplicateNode):
        lagrange_interpolate([1, 2, 1], [0, 0, 0])


@given(st.integers(0, 8), st.data())
def test_interpolation_recovers_polynomials(n, data):
    coeffs = data.draw(st.lists(rationals(100), min_size=n + 1, max_size=n + 1))
    nodes = data.draw(st.lists(rationals(100), min_size=n + 1, max_size=n + 1, unique=True))
    f = PolynomialFn(coeffs)
    assert lagrange_interpolate(nodes, [f(x) for x in nodes]) == DensePolynomial(tuple(coeffs))


def test_interpolation_matches_linear_solve():
    nodes = [F(-2), F(1, 3), F(5, 2), F(4)]
    f = TabulatedFn(12)
    values = [f(x) for x in nodes]
    expected = DensePolynomial(_solve_vandermonde(nodes, values))
    assert lagrange_interpolate(nodes, values) == expected


# -- propagation -----------------------------------------------------------


def test_propagation_polynomial():
    f = PolynomialFn([1, -2, F(1, 3)])
    rep = propagation_check(f, F(1, 2), F(2, 3), 2, (-20, 20))
    assert rep.agrees and rep.polynomial == DensePolynomial(f.coefficients)
    # base points 0..17 forward, -1..-20 backward
    assert len(rep.checked_base_points) == 18 + 20
    assert rep.to_json()["untested"]


def test_propagation_ball_indicator():
    rep = propagation_check(zp_indicator(3), 0, 1, 0, (-5, 5))
    assert rep.agrees and rep.polynomial == DensePolynomial((1,))
    with pytest.raises(HypothesisViolation) as err:
        propagation_check(zp_indicator(3), 0, F(1, 3), 0, (-5, 5))
    assert err.value.point == 0 and err.value.value == -1


@given(st.integers(0, 5), st.data())
def test_propagation_property(n, data):
    coeffs = data.draw(st.lists(rationals(50), min_size=n + 1, max_size=n + 1))
    x0, h0 = data.draw(rationals(50)), data.draw(rationals(50, nonzero=True))
    rep = propagation_check(PolynomialFn(coeffs), x0, h0, n, (-20, 20))
    assert rep.agrees and rep.first_discrepancy is None


def test_propagation_reports_discrepancy():
    # f agrees with a line on 0..1 only if Delta^2 vanishes; tabulated f breaks the hypothesis
    with pytest.raises(HypothesisViolation):
        propagation_check(TabulatedFn(3), 0, 1, 1, (-3, 3))


def test_refinement():
    f = PolynomialFn([2, 0, -1, F(1, 7)])
    for m in range(4):
        rep = refinement_consistency(f, F(1, 3), F(5, 2), 3, m, 3)
        assert rep.consistent
    with pytest.raises(HypothesisViolation):
        refinement_consistency(zp_indicator(3), 0, 1, 0, 1, 3)


def test_refinement_forced_tabulated():
    # tabulated values overridden to agree with a polynomial on both lines
    p = PolynomialFn([1, 1, 1])
    pts = [F(k) for k in range(-5, 10)] + [F(k, 2) for k in range(-5, 10)]
    f = TabulatedFn(1, overrides={x: p(x) for x in pts})
    rep = refinement_consistency(f, 0, 1, 2, 1, 2, k_range=(-5, 9))
    assert rep.consistent and rep.coarse == DensePolynomial((1, 1, 1))


def test_local_reconstruct():
    f = PolynomialFn([0, 3, 1])
    assert local_reconstruct(f, 2, 1, 2, 3, 10).locally_polynomial
    rep = local_reconstruct(zp_indicator(3), 0, 0, 0, 3, 10)
    assert rep.locally_polynomial and rep.polynomial == DensePolynomial((1,))
    rep = local_reconstruct(zp_indicator(3), 0, -1, 0, 3, 10)
    assert not rep.locally_polynomial and rep.residuals and rep.violations
    assert (F(1, 3), -1) in rep.residuals


def test_grid_agreement():
    f = PolynomialFn([F(1, 2), 4])
    grid = GridSpec(F(1), F(2), (-2, 3), (-10, 10))
    assert grid_agreement(f, grid, 1, 3).agrees
    rep = grid_agreement(zp_indicator(3), GridSpec(0, 1, (0, 1), (-3, 3)), 0, 3)
    assert not rep.agrees
