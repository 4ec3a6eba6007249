from fractions import Fraction as F
import math

import sympy as sp
from hypothesis import given, settings, strategies as st

from desk import P_Q, P_R
from mi_racah.casoratian import casoratian, det, scale, varphi_M, varphi_M_product
from mi_racah.lattice import QPoint, off_grid_points, varphi_aux

small = st.fractions(min_value=-4, max_value=4, max_denominator=6)
polys = st.lists(small, min_size=1, max_size=5)
points = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def as_func(coeffs):
    def f(x):
        out = F(0)
        for c in reversed(coeffs):
            out = out * x + c
        return out
    return f


def test_small_cases():
    f = as_func([F(2), F(-1), F(1, 3)])
    assert casoratian([], F(1, 2)) == 1
    assert casoratian([f], F(1, 2)) == f(F(1, 2))
    assert casoratian([f, f], F(7, 3)) == 0
    assert det([]) == 1
    assert det([[0, 1], [1, 0]]) == -1


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_bareiss_matches_sympy(rows):
    ref = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in r] for r in rows]).det()
    assert det(rows) == F(int(sp.numer(ref)), int(sp.denom(ref)))


@settings(max_examples=150, deadline=None)
@given(st.lists(polys, min_size=1, max_size=4), polys, points)
def test_common_factor_comes_out(cols, g, x):
    fs = [as_func(c) for c in cols]
    gf = as_func(g)
    n = len(fs)
    lhs = casoratian([scale(gf, f) for f in fs], x)
    assert lhs == math.prod((gf(x + j) for j in range(n)), start=F(1)) * casoratian(fs, x)


@settings(max_examples=150, deadline=None)
@given(st.lists(polys, min_size=2, max_size=4), small, points, st.data())
def test_alternating_and_multilinear(cols, t, x, data):
    fs = [as_func(c) for c in cols]
    i, j = data.draw(st.permutations(range(len(fs))))[:2]
    swapped = list(fs)
    swapped[i], swapped[j] = fs[j], fs[i]
    assert casoratian(swapped, x) == -casoratian(fs, x)
    added = list(fs)
    added[i] = lambda y, a=fs[i], b=fs[j]: a(y) + t * b(y)
    assert casoratian(added, x) == casoratian(fs, x)


@settings(max_examples=150, deadline=None)
@given(st.lists(polys, min_size=0, max_size=2), polys, polys, points)
def test_sylvester_identity(base, g, h, x):
    """W[W[F,g], W[F,h]](x) = W[F](x+1) W[F,g,h](x)."""
    fs = [as_func(c) for c in base]
    gf, hf = as_func(g), as_func(h)
    u = lambda y: casoratian(fs + [gf], y)
    v = lambda y: casoratian(fs + [hf], y)
    assert casoratian([u, v], x) == casoratian(fs, x + 1) * casoratian(fs + [gf, hf], x)


@given(st.integers(1, 4), points)
def test_monomials_give_superfactorial(n, x):
    fs = [as_func([0] * k + [1]) for k in range(n)]
    assert casoratian(fs, x) == math.prod(math.factorial(k) for k in range(n))


def test_casoratian_on_qpoints():
    x = QPoint(F(1, 3), F(1, 2))
    f = lambda y: y.z
    g = lambda y: y.z ** 2
    # W[z, z^2] = z * (qz)^2 - z^2 * qz = q(q-1) z^3
    assert casoratian([f, g], x) == F(1, 2) * F(-1, 2) * F(1, 27)


def test_varphi_forms():
    for p in (P_R, P_Q):
        for x in off_grid_points(p) + [0, 1, 2]:
            assert varphi_M(p, 0, x) == varphi_M(p, 1, x) == 1
            assert varphi_M(p, 2, x) == varphi_aux(p, x)
            for M in (2, 3, 4):
                assert varphi_M(p, M, x) == varphi_M_product(p, M, x)
