import pickle
from fractions import Fraction as F
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hartogs import (
    INF,
    BoundaryPower,
    ConditionError,
    DomainError,
    HartogsExponent,
    ModPower,
    PRange,
    RangeError,
    TypeCD,
    bergman_range,
    gain_consistency,
    r_upper_constraint,
    schur_exponents,
    schur_p_range,
    smoothing_outcome,
    toeplitz_mod_power_range,
    type_cd_range,
    unbounded_thresholds,
)
from hartogs.ranges import FullRange, Gain, SchurTuple, as_fraction, upper_threshold
from hartogs.verify import random_valid_cds

E11, E21, E32 = HartogsExponent(1, 1), HartogsExponent(2, 1), HartogsExponent(3, 2)

coprime = (
    st.tuples(st.integers(1, 20), st.integers(1, 20))
    .filter(lambda t: gcd(*t) == 1)
    .map(lambda t: HartogsExponent(*t))
)


def ends(r):
    return (r.lower, r.upper)


@pytest.mark.parametrize("exp,want", [(E11, (F(4, 3), F(4))), (E32, (F(5, 3), F(5, 2))), (E21, (F(3, 2), F(3)))])
def test_bergman_range(exp, want):
    r = bergman_range(exp)
    assert ends(r) == want and r.lower_open and r.upper_open


@pytest.mark.parametrize("exp,a,want", [(E11, 0, (F(4, 3), F(4))), (E11, 1, (F(1), F(4))), (E21, F(1, 2), (F(6, 5), F(3)))])
def test_toeplitz_mod_power_range(exp, a, want):
    assert ends(toeplitz_mod_power_range(exp, a)) == want


def test_toeplitz_window():
    with pytest.raises(DomainError):
        toeplitz_mod_power_range(E11, F(3, 2))
    with pytest.raises(DomainError):
        toeplitz_mod_power_range(E11, -1)


@given(coprime, st.integers(0, 1000), st.integers(1, 1000))
def test_lower_endpoint_monotone_in_a(exp, k, step):
    hi = F(exp.m + exp.n - 1, exp.m)
    a = hi * F(k, 1001)
    b = min(a + hi * F(step, 1001), hi)
    ra, rb = toeplitz_mod_power_range(exp, a), toeplitz_mod_power_range(exp, b)
    assert rb.upper == ra.upper == upper_threshold(exp)
    raw = lambda x: F(2 * exp.m + 2 * exp.n) / (exp.m + exp.n + 1 + exp.m * x)
    assert raw(b) < raw(a)
    assert rb.lower <= ra.lower


def test_type_cd_examples():
    assert ends(type_cd_range(E11, TypeCD(1, 1))) == (F(4, 3), F(4))
    assert ends(type_cd_range(E11, TypeCD(1, 2))) == (F(1), F(4))
    with pytest.raises(ConditionError) as info:
        type_cd_range(E21, TypeCD(0, 0))
    assert info.value.condition == "dm+2n+2m-2nm>2nm-cm"


@pytest.mark.parametrize("cd,cond", [(TypeCD(1, -3), "dm+2n+2m-2nm>0"), (TypeCD(2, 1), "2nm-cm>0")])
def test_type_cd_names_the_failed_inequality(cd, cond):
    with pytest.raises(ConditionError) as info:
        type_cd_range(E11, cd)
    assert info.value.condition == cond


def test_schur_exponents_examples():
    t = schur_exponents(E11, TypeCD(1, 1))
    assert (t.a, t.b, t.a_prime, t.b_prime) == (F(1, 2), F(3, 2), F(1, 2), F(3, 2))
    assert ends(schur_p_range(t)) == (F(4, 3), F(4))
    A = E21.kernel_exponent
    t = schur_exponents(E21, TypeCD(A, A))
    assert t.a == 1 - A / 2
    with pytest.raises(ConditionError):
        schur_exponents(E11, TypeCD(2, 1))  # c = 2n makes a = 0


def test_schur_tuple_ordering():
    with pytest.raises(ConditionError):
        SchurTuple(F(1), F(1, 2), F(1, 4), F(1, 2))


def test_duality_of_bergman_endpoints():
    r = bergman_range(E11)
    assert 1 / r.lower + 1 / r.upper == 1


@given(coprime, st.integers(0, 2 ** 32 - 1))
def test_schur_identity_property(exp, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    for cd in random_valid_cds(exp, rng, 5):
        assert schur_p_range(schur_exponents(exp, cd)) == type_cd_range(exp, cd)


@given(coprime)
def test_bergman_is_type_AA(exp):
    A = exp.kernel_exponent
    assert type_cd_range(exp, TypeCD(A, A)) == bergman_range(exp)


def test_smoothing_examples():
    out = smoothing_outcome(E11, 1, 2)
    assert out.outcome == FullRange(F(4)) and out.threshold_eta == F(1, 2)
    out = smoothing_outcome(E11, F(1, 4), 2)
    assert out.outcome == Gain(F(2, 3), F(8, 3))
    with pytest.raises(RangeError):
        smoothing_outcome(E11, F(1, 4), F(16, 3))
    assert unbounded_thresholds(E11, BoundaryPower(F(1, 4))).adjoint_p_star == F(16, 3)


def test_smoothing_at_lower_endpoint_is_unbounded():
    L = F(4, 3)
    with pytest.raises(RangeError):
        smoothing_outcome(E11, 0, L)


@given(
    coprime,
    st.fractions(min_value=0, max_value=3, max_denominator=50),
    st.integers(1, 999),
)
def test_gain_stays_below_M(exp, eta, k):
    out0 = smoothing_outcome(exp, eta, upper_threshold(exp) - F(1, 10 ** 6))
    L, M = out0.L, out0.M
    p = L + (M - L) * F(k, 1000)
    out = smoothing_outcome(exp, eta, p).outcome
    if isinstance(out, Gain):
        assert out.r < M and out.G >= 0
        assert eta < 2 * (1 / p - 1 / M)
    else:
        assert eta >= 2 * (1 / p - 1 / M)


@pytest.mark.parametrize(
    "exp,sym,want",
    [(E11, ModPower(0), F(4)), (E11, ModPower(1), INF), (E11, BoundaryPower(F(1, 4)), F(16, 3)), (E11, BoundaryPower(1), INF)],
)
def test_unbounded_thresholds(exp, sym, want):
    th = unbounded_thresholds(exp, sym)
    assert th.adjoint_p_star == want
    assert th.operator_upper == upper_threshold(exp)


def test_r_upper_constraint():
    assert r_upper_constraint(E11, 2, 2) == 2
    assert r_upper_constraint(E11, 1, 2) == 6
    assert r_upper_constraint(E11, F(1001, 1000), 2) < 6
    with pytest.raises(ConditionError):
        r_upper_constraint(E11, 4, 2)


def test_gain_consistency_examples():
    g = gain_consistency(F(1, 4), 2)
    assert g.rho == F(8, 7) and g.G_of_rho == F(2, 3) and g.agree
    g = gain_consistency(1, 2)
    assert g.rho == 2 and g.G_of_rho is INF and g.agree
    g = gain_consistency(0, 3)
    assert g.G_of_rho == 0 and g.agree
    with pytest.raises(DomainError):
        gain_consistency(2, 2)


@given(st.fractions(min_value=0, max_value=2, max_denominator=100).filter(lambda x: x < 2),
       st.fractions(min_value=1, max_value=20, max_denominator=100).filter(lambda x: x > 1))
def test_gain_consistency_property(eta, p):
    assert gain_consistency(eta, p).agree


def test_exact_types():
    r = toeplitz_mod_power_range(E32, F(1, 3))
    assert isinstance(r.lower, F) and isinstance(r.upper, F)
    assert as_fraction(0.25) == F(1, 4)
    assert pickle.loads(pickle.dumps(INF)) is INF


def test_prange_membership_and_text():
    r = PRange(F(4, 3), INF)
    assert 2 in r and F(4, 3) not in r and "inf" in str(r)
    with pytest.raises(DomainError):
        PRange(F(1, 2), F(3))
