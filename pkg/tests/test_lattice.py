from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from desk import P_Q, P_R
import oracle
from mi_racah.lattice import (
    B,
    D,
    QPoint,
    apply_difference_op,
    backward_shift,
    completeness_residuals,
    dual_value,
    energy,
    eta,
    forward_shift,
    ground_weight_sq,
    ground_weight_sq_product,
    hamiltonian_matrix,
    involution,
    mp_from_fraction,
    norm_sq,
    off_grid_points,
    orthonormal_matrix,
    potentials,
    racah_poly,
    reflect,
    shift_backward,
    shift_forward,
    varphi_aux,
)
from mi_racah.params import ParameterError, mirror_params, shift


def test_qpoint_arithmetic():
    x = QPoint(F(1, 3), F(1, 2))
    assert (x + 2).z == F(1, 12)
    assert (x - 1).z == F(2, 3)
    assert (1 + x).z == F(1, 6)
    assert reflect(P_Q, QPoint(F(1, 8), F(1, 2))).z == 1
    assert involution(P_Q, QPoint(F(1, 3), F(1, 2))).z == 6


def test_potential_boundaries():
    assert B(P_R, 3) == 0
    assert B(P_R, 0) == 9
    for p in (P_R, P_Q):
        assert D(p, 0) == 0
        assert B(p, p.N) == 0
        Bg, Dg = potentials(p)
        assert all(v > 0 for v in Bg.values[:-1])
        assert all(v > 0 for v in Dg.values[1:])


def test_eta_energy_values():
    for p in (P_R, P_Q):
        assert eta(p, 0) == 0 and energy(p, 0) == 0 and varphi_aux(p, 0) == 1
    assert eta(P_R, 1) == 2
    assert energy(P_R, 1) == F(17, 2)
    assert eta(P_Q, 1) == F(3, 4)


def test_racah_poly_normalisation_and_spot_value():
    for p in (P_R, P_Q):
        for n in range(4):
            assert racah_poly(p, n, 0) == 1
        assert all(racah_poly(p, 0, x) == 1 for x in range(4))
    assert racah_poly(P_R, 1, 1) == F(1, 18)


def test_racah_poly_against_independent_sum():
    a, b, c, d = (oracle.to_sympy(v) for v in P_R.lam)
    for n in range(4):
        for x in [0, 1, 2, 3, F(1, 3), F(9, 4)]:
            assert oracle.to_sympy(racah_poly(P_R, n, x)) == oracle.racah(n, oracle.to_sympy(F(x)), a, b, c, d)
    a, b, c, d = (oracle.to_sympy(v) for v in P_Q.lam)
    q = sp.Rational(1, 2)
    for n in range(4):
        for z in [F(1), F(1, 4), F(1, 3), F(11, 3)]:
            got = racah_poly(P_Q, n, QPoint(z, F(1, 2)))
            assert oracle.to_sympy(got) == sp.nsimplify(oracle.qracah(n, oracle.to_sympy(z), a, b, c, d, q))


def test_difference_equation_on_and_off_grid(desk):
    assert apply_difference_op(desk, lambda x: F(5), 1) == 0
    for n in range(desk.N + 1):
        f = lambda x, n=n: racah_poly(desk, n, x)
        for x in list(range(desk.N + 1)) + off_grid_points(desk):
            assert apply_difference_op(desk, f, x) == energy(desk, n) * f(x)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-10, max_value=10, max_denominator=50), st.integers(0, 3))
def test_difference_equation_random_points(x, n):
    f = lambda y: racah_poly(P_R, n, y)
    try:
        lhs = apply_difference_op(P_R, f, x)
    except ZeroDivisionError:
        return
    assert lhs == energy(P_R, n) * f(x)


def test_ground_weight(desk):
    w = ground_weight_sq(desk)
    assert w[0] == 1
    assert w[1] == B(desk, 0) / D(desk, 1)
    assert w.values == ground_weight_sq_product(desk).values


def test_orthogonality_and_norms(desk):
    w = ground_weight_sq(desk)
    N = desk.N
    for n in range(N + 1):
        for m in range(N + 1):
            s = sum(w[x] * racah_poly(desk, n, x) * racah_poly(desk, m, x) for x in range(N + 1))
            assert s * norm_sq(desk, n) == (1 if n == m else 0)


def test_dual_orthogonality(desk):
    assert all(dual_value(desk, 0, n) == 1 for n in range(4))
    res = completeness_residuals(desk)
    assert len(res) == (desk.N + 1) ** 2 and not any(res)
    ctx, U = orthonormal_matrix(desk)
    G = U * U.T
    assert max(abs(G[i, j] - (i == j)) for i in range(4) for j in range(4)) < ctx.mpf(10) ** -70


def test_shift_relations(desk):
    lhs, rhs = shift_forward(desk, 1, F(1, 3) if not desk.is_q else off_grid_points(desk)[0])
    assert lhs == rhs == energy(desk, 1)
    for n in range(1, desk.N + 1):
        for x in list(range(desk.N + 1)) + off_grid_points(desk):
            assert shift_forward(desk, n, x)[0] == shift_forward(desk, n, x)[1]
            assert shift_backward(desk, n, x)[0] == shift_backward(desk, n, x)[1]
            # round trip B F P_n / E_n = P_n
            f = lambda y, n=n: forward_shift(desk, lambda t: racah_poly(desk, n, t), y)
            assert backward_shift(desk, f, x) == energy(desk, n) * racah_poly(desk, n, x)
    lhs, rhs = shift_forward(P_R, 2, 1)
    assert lhs == rhs == energy(P_R, 2) * racah_poly(shift(P_R, 1), 1, 1)


def test_hamiltonian_spectrum(desk):
    H = hamiltonian_matrix(desk)
    ctx = H.context()
    ev = H.eigenvalues()
    for n, e in enumerate(ev):
        assert abs(e - mp_from_fraction(ctx, energy(desk, n))) < ctx.mpf(10) ** -40
    Bg, Dg = potentials(desk)
    for x, off in enumerate(H.off_diagonal):
        assert abs(mp_from_fraction(ctx, Bg[x] * Dg[x + 1]) - off**2) < ctx.mpf(10) ** -70
    phi0 = [ctx.sqrt(mp_from_fraction(ctx, w)) for w in ground_weight_sq(desk)]
    assert max(abs(v) for v in H.matvec(phi0)) < ctx.mpf(2) ** (-H.precision_bits // 4)


def test_hamiltonian_refuses_unvalidated():
    with pytest.raises(ParameterError):
        hamiltonian_matrix(mirror_params(P_R))
