import pytest

from desk import P_Q, P_R, subsets
from mi_racah.crum import (
    DeletionChain,
    W_via_jacobi,
    W_xi,
    chain_residuals,
    eigen_residuals,
    extend_chain,
    hatted_B,
    hatted_D,
    norm_residuals,
    order_independence,
    sign_checks,
    standard_potentials,
    transformed_eigen_polyweight,
    virtual_vector_residuals,
)
from mi_racah.lattice import norm_sq
from mi_racah.params import ParameterError, virtual_index_set
from mi_racah.virtual import alpha, virtual_energy, xi_poly, B_prime, D_prime

CASES = [(p, D) for p in (P_R, P_Q) for D in subsets(p)]
IDS = [f"{p.family}-{''.join(map(str, D))}" for p, D in CASES]


def test_first_step_reduces_to_single_deletion():
    p = P_R
    for x in range(p.N + 1):
        assert hatted_B(p, (1,), x) == alpha(p) * B_prime(p, x) * xi_poly(p, 1, x + 1) / xi_poly(p, 1, x)
        if x:
            assert hatted_D(p, (1,), x) == alpha(p) * D_prime(p, x) * xi_poly(p, 1, x - 1) / xi_poly(p, 1, x)


def test_chaining_relation_desk_racah():
    for x in range(P_R.N + 1):
        assert (hatted_B(P_R, (1, 2), x) * hatted_D(P_R, (1, 2), x + 1)
                == hatted_B(P_R, (1,), x + 1) * hatted_D(P_R, (1,), x + 1))


def test_casoratian_sign_desk_racah():
    vals = [W_xi(P_R, (1, 2), x) for x in range(5)]
    assert all(v > 0 for v in vals) or all(v < 0 for v in vals)
    # the sign follows E~_1 - E~_2
    assert (vals[0] > 0) == (virtual_energy(P_R, 1) - virtual_energy(P_R, 2) > 0)


@pytest.mark.parametrize("p,D", CASES, ids=IDS)
def test_chain_and_eigen(p, D):
    assert not any(chain_residuals(p, D))
    for n in range(p.N + 1):
        assert not any(eigen_residuals(p, D, n))
    assert not any(norm_residuals(p, D))
    rep = sign_checks(p, D)
    assert rep.ok, rep.messages


@pytest.mark.parametrize("p,D", CASES, ids=IDS)
def test_remaining_virtual_vectors(p, D):
    for v in virtual_index_set(p):
        if v in D:
            continue
        res = virtual_vector_residuals(p, D, v)
        assert res[:-1] == [0] * p.N and res[-1] != 0


def test_norm_product_spot_value():
    grid, norm = transformed_eigen_polyweight(P_R, (1,), 0)
    assert virtual_energy(P_R, 1) == -9
    assert norm == 9 / norm_sq(P_R, 0)
    assert len(grid) == P_R.N + 1


def test_standard_potential_boundaries():
    for p, D in CASES:
        Bg, Dg = standard_potentials(p, D)
        assert Dg[0] == 0 and Bg[p.N] == 0


def test_order_independence_desk_racah():
    info = order_independence(P_R, (1, 2))
    assert info["potentials_equal"] and not any(info["residuals"])
    assert info["signs"] == {(1, 2): 1, (2, 1): -1}
    info = order_independence(P_R, (1, 2, 3))
    assert info["potentials_equal"]
    assert set(info["signs"].values()) == {1, -1}


def test_jacobi_casoratian_identity():
    for p, D in CASES:
        for x in range(p.N + 2):
            assert W_via_jacobi(p, D, x) == W_xi(p, D, x)


def test_deletion_chain():
    chain = extend_chain(DeletionChain(P_R), 1).extend(2)
    assert chain.indices == (1, 2)
    Bh, Dh = chain.hatted()
    assert len(Bh) == P_R.N + 1 and Dh[0] == 0 and Dh[P_R.N + 1] == 0
    assert chain.potentials() == standard_potentials(P_R, (1, 2))
    with pytest.raises(ParameterError):
        chain.extend(2)
    with pytest.raises(ParameterError):
        chain.extend(4)
