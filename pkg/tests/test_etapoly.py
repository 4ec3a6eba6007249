from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from desk import P_Q, P_R
from mi_racah.etapoly import (
    BoundaryRootError,
    EtaPolynomial,
    NotPolynomialError,
    count_roots,
    fit_eta_polynomial,
    interpolate,
)
from mi_racah.lattice import SingularPointError, eta, off_grid_points, racah_poly

coef = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@settings(max_examples=60, deadline=None)
@given(st.lists(coef, min_size=1, max_size=6))
def test_interpolation_recovers_coefficients(coeffs):
    poly = EtaPolynomial(tuple(coeffs))
    ys = [F(k, 3) for k in range(len(coeffs))]
    got = interpolate(ys, [poly(y) for y in ys])
    want = list(coeffs)
    while len(want) > 1 and want[-1] == 0:
        want.pop()
    assert got == want


def test_fit_classical_polynomials():
    for p in (P_R, P_Q):
        for n in range(4):
            fit = fit_eta_polynomial(lambda x: racah_poly(p, n, x), lambda x: eta(p, x),
                                     list(range(6)) + off_grid_points(p), n)
            assert fit.degree == n
            assert fit(0) == 1


def test_fit_rejects_non_polynomials():
    with pytest.raises(NotPolynomialError):
        fit_eta_polynomial(lambda x: 1 / (1 + x), lambda x: x, range(8), 2)
    with pytest.raises(ValueError, match="usable nodes"):
        fit_eta_polynomial(lambda x: x, lambda x: x, range(2), 2)


def test_fit_skips_singular_and_repeated_nodes():
    def f(x):
        if x == 2:
            raise SingularPointError("pole")
        return x * x
    fit = fit_eta_polynomial(f, lambda x: x * x, [1, -1, 2, 3, 4, 5, 6], 1)
    assert fit.coeffs == (0, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1,
                max_size=5, unique=True), st.fractions(min_value=-4, max_value=0, max_denominator=3),
       st.fractions(min_value=1, max_value=4, max_denominator=3))
def test_sturm_count_matches_sympy(roots, lo, hi):
    if lo in roots or hi in roots:
        return
    y = sp.Symbol("y")
    expr = sp.expand(sp.prod([y - sp.Rational(r.numerator, r.denominator) for r in roots]) * (y**2 + 1))
    coeffs = [F(int(sp.numer(c)), int(sp.denom(c))) for c in reversed(sp.Poly(expr, y).all_coeffs())]
    poly = EtaPolynomial(tuple(coeffs))
    ref = sum(1 for r in roots if lo < r < hi)
    assert count_roots(poly, lo, hi) == ref
    assert sp.Poly(expr, y).count_roots(sp.Rational(lo.numerator, lo.denominator),
                                        sp.Rational(hi.numerator, hi.denominator)) == ref


def test_count_roots_edge_cases():
    assert count_roots(EtaPolynomial((F(3),)), F(0), F(1)) == 0
    with pytest.raises(BoundaryRootError):
        count_roots(EtaPolynomial((F(-1), F(1))), F(0), F(1))
    with pytest.raises(ValueError):
        count_roots(EtaPolynomial((F(0),)), F(0), F(1))
    # double root counted once
    assert count_roots(EtaPolynomial((F(1, 4), F(-1), F(1))), F(0), F(1)) == 1
