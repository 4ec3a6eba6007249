from fractions import Fraction as F
import math

import pytest
from hypothesis import given, strategies as st

from desk import P_Q, P_R
from mi_racah.params import (
    ParameterError,
    ParameterSet,
    d_tilde,
    delta,
    delta_tilde,
    frac,
    mirror_params,
    poch,
    qpoch,
    require_valid,
    shift,
    shift_params,
    twist,
    v_max,
    validate_ranges,
    virtual_index_set,
)


def test_frac_accepts_exact_inputs_only():
    assert frac("3/6") == F(1, 2)
    assert frac(7) == F(7)
    assert frac(" -2/4 ") == F(-1, 2)
    with pytest.raises(TypeError):
        frac(0.5)
    with pytest.raises(TypeError):
        frac(True)


def test_pochhammer_values():
    assert poch(F(5, 3), 0) == 1
    assert poch(1, 3) == math.factorial(3)
    assert qpoch(F(1, 2), F(1, 2), 1) == F(1, 2)
    assert qpoch(F(1, 2), F(1, 2), 3) == F(1, 2) * F(3, 4) * F(7, 8)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=7), st.integers(0, 6))
def test_poch_recurrence(a, k):
    assert poch(a, k + 1) == poch(a, k) * (a + k)


def test_desk_sets_are_validated():
    assert P_R.lam == (-3, 12, F(1, 2), 1) and P_R.validated
    assert P_Q.lam == (8, F(1, 1024), F(1, 2), F(1, 2)) and P_Q.validated


def test_constructor_rejects_bad_sets():
    with pytest.raises(ParameterError):
        ParameterSet("racah", 3, -3, 1, 1, 1, q=F(1, 2))
    with pytest.raises(ParameterError):
        ParameterSet("qracah", 3, 8, 1, 1, 1)
    with pytest.raises(ParameterError):
        ParameterSet.qracah(3, F(3, 2), 1, 1, 1)
    with pytest.raises(ParameterError):
        ParameterSet("racah", -1, 1, 1, 1, 1)


def test_out_of_range_set_is_not_validated():
    assert not ParameterSet.racah(3, 12, 3, 1).validated   # c < 1 + d fails


def test_twist_values_and_involution():
    assert twist(P_R).lam == (5, -10, F(1, 2), 1)
    assert twist(P_Q).lam == (F(1, 32), 256, F(1, 2), F(1, 2))
    for p in (P_R, P_Q):
        assert twist(twist(p)).lam == p.lam


@pytest.mark.parametrize("k", [1, 2])
def test_twist_commutes_with_shifts(k):
    for p in (P_R, P_Q):
        left = twist(shift(p, 0, k)).lam
        right = shift_params(twist(p).with_lam(*twist(p).lam, N=p.N + k), delta(k)).lam
        assert left == right


def test_shift_examples():
    assert shift(P_R, 0, 2).lam == (-3, 12, F(5, 2), 3)
    assert shift(P_R) is P_R
    up = shift(P_R, 1)
    assert up.N == 2 and up.a == -2
    assert shift(P_Q, 1).a == 4 and shift(P_Q, 1).N == 2
    assert delta_tilde(2).components == (0, 0, 2, 2)
    with pytest.raises(ParameterError):
        shift(P_R, 4)


def test_d_tilde():
    assert d_tilde(P_R) == F(15, 2)
    assert d_tilde(P_Q) == F(1, 64)
    assert d_tilde(shift(P_R, 1)) == d_tilde(P_R) + 2


def test_v_max():
    assert v_max(P_R) == 3
    assert v_max(P_Q) == 2
    assert virtual_index_set(P_R) == [1, 2, 3]
    # lambda1 + lambda2 - lambda4 - 1 an integer k gives the strict floor k - 1
    p = ParameterSet.racah(3, 10, F(1, 2), 1)
    assert v_max(p) == min(4, 2)


def test_validate_ranges_examples():
    assert all(dg.passed for dg in validate_ranges(P_R, 2))
    assert all(dg.passed for dg in validate_ranges(P_Q, 2))
    bad = ParameterSet.racah(3, 5, F(1, 2), 1)
    failed = {dg.name: dg for dg in validate_ranges(bad, 1) if not dg.passed}
    assert "v_max>=1" in failed
    # d + M < a + b is 2 < 2: violated with zero slack
    assert failed["d+1<a+b"].slack == 0
    with pytest.raises(ParameterError, match="v_max"):
        require_valid(bad)


def test_mirror():
    assert mirror_params(P_R).lam == (-3, F(-7, 2), 8, -7)
    assert not mirror_params(P_R).validated
    for p in (P_R, P_Q):
        assert mirror_params(mirror_params(p)).lam == p.lam
        assert mirror_params(p).a == p.a
