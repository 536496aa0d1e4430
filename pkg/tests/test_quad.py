import math
from fractions import Fraction as F

import numpy as np
import pytest

from hartogs import (
    AccuracyError,
    BoundaryPower,
    DomainError,
    DomainPoint,
    HartogsExponent,
    ModPower,
    QuadConfig,
    TypeCD,
    disc_lemma_check,
    integrate_polar,
    lp_divergence_scan,
    schur_estimate_check,
    symbol_moment,
    witness_monomial,
)
from hartogs.quad import (
    Verdict,
    auxiliary_h,
    boundary_expansion_residual,
    boundary_samples,
    graded_rule,
    integrate_interval,
    monomial_inner_product,
    trend_ok,
)

E11, E21, E32 = HartogsExponent(1, 1), HartogsExponent(2, 1), HartogsExponent(3, 2)
PI2 = math.pi ** 2


@pytest.mark.parametrize(
    "kwargs",
    [dict(eps_cutoff=0.0), dict(eps_cutoff=1.0), dict(rel_tol=1e-13), dict(base_nodes=3), dict(max_refinement=0)],
)
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        QuadConfig(**kwargs)


def test_graded_rule_integrates_endpoint_singularity():
    x, c, w = graded_rule(0.0, 1.0, 12, 40, True)
    # nodes near 1 may round to 1.0; the complement keeps them distinct
    assert np.all((x > 0) & (x <= 1)) and np.all(c > 0)
    # int_0^1 x^-1/2 (1-x)^-1/2 dx = pi
    assert float(w @ (x ** -0.5 * c ** -0.5)) == pytest.approx(math.pi, rel=1e-9)
    assert not x.flags.writeable


def test_interval_beta_integral():
    v = integrate_interval(lambda x, c: x ** -0.75 * c ** 0.5, 0.0, 1.0)
    assert v.value == pytest.approx(math.exp(math.lgamma(0.25) + math.lgamma(1.5) - math.lgamma(1.75)), rel=1e-10)


def test_log_growth_with_cutoff():
    # f = r2^-4 on H_1: (2 pi)^2 int_eps^1 r2^-4 (r2^2 / 2) r2 dr2 = 2 pi^2 log(1/eps)
    for eps in (1e-3, 1e-6, 1e-9):
        v = integrate_polar(E11, lambda r1, r2: r2 ** -4.0 * np.ones_like(r1), QuadConfig(eps_cutoff=eps))
        assert v.value == pytest.approx(2 * PI2 * math.log(1 / eps), rel=1e-10)


def test_accuracy_error_carries_estimate():
    cfg = QuadConfig(max_refinement=2)
    with pytest.raises(AccuracyError) as info:
        integrate_polar(E11, lambda r1, r2: np.abs(np.sin(1 / r2)) * r2 ** -4.0, cfg)
    assert math.isfinite(info.value.best_estimate) and info.value.abs_error > 0


@pytest.mark.parametrize(
    "exp,sym,p,want",
    [
        (E11, ModPower(0), 4.25, Verdict.DIVERGENT),
        (E11, ModPower(0), 3.75, Verdict.CONVERGENT),
        (E11, ModPower(1), 100.0, Verdict.CONVERGENT),
        (E21, BoundaryPower(F(1, 4)), 3.0, Verdict.CONVERGENT),
        (E32, ModPower(F(1, 2)), 4.5, Verdict.DIVERGENT),
    ],
)
def test_divergence_scan_examples(exp, sym, p, want):
    v = lp_divergence_scan(exp, witness_monomial(exp), sym, p)
    assert v.verdict is want
    assert v.agrees is True
    assert len(v.values) == 17  # k = 3 .. 19


def test_scan_values_monotone_and_deterministic():
    w = witness_monomial(E11)
    a = lp_divergence_scan(E11, w, ModPower(0), 3.5)
    b = lp_divergence_scan(E11, w, ModPower(0), 3.5)
    assert a == b
    vals = [v for _, v in a.values]
    assert all(x <= y for x, y in zip(vals, vals[1:]))


def test_scan_near_threshold_is_not_misclassified():
    v = lp_divergence_scan(E11, witness_monomial(E11), ModPower(0), 4.0)
    assert v.verdict is Verdict.INCONCLUSIVE and v.agrees is None


def test_scan_preconditions():
    w = witness_monomial(E11)
    with pytest.raises(DomainError):
        lp_divergence_scan(E11, w, ModPower(0), 0.5)
    with pytest.raises(DomainError):
        lp_divergence_scan(E11, w, ModPower(0), 2.0, eps_levels=3)


def test_auxiliary_h():
    z = DomainPoint(0.3, 0.6)
    assert auxiliary_h(E11, z) == pytest.approx((0.36 - 0.09) * (1 - 0.36), rel=1e-15)
    assert all(auxiliary_h(E32, p) > 0 for p in boundary_samples(E32))


def test_disc_integral_bounded():
    r = disc_lemma_check(0.5, 1.0, 64)
    # at z = 0 the integral is 2 pi int_0^1 (1 - r^2)^-1/2 dr = pi^2
    assert r["ratios"][0] == pytest.approx(PI2, rel=1e-10)
    assert r["trend_ok"] and math.isfinite(r["sup_ratio"])
    assert max(r["radii"]) == pytest.approx(0.999)


@pytest.mark.parametrize("eps,beta", [(1.0, 1.0), (0.0, 1.0), (0.5, 2.0)])
def test_disc_window(eps, beta):
    with pytest.raises(DomainError):
        disc_lemma_check(eps, beta)


def test_schur_bounded_inside_integrable_window():
    # for cd = (1, 1) Schur needs eps in (1/2, 3/2) and h^-eps integrable, i.e. eps < 1
    r = schur_estimate_check(E11, TypeCD(1, 1), F(3, 4))
    assert r["trend_ok"] and math.isfinite(r["sup_ratio"])


def test_schur_at_eps_one_diverges():
    # h(w)^-1 has a non-integrable 1/distance singularity along |w1| = |w2|
    with pytest.raises(AccuracyError):
        schur_estimate_check(E11, TypeCD(1, 1), 1, sample_z=boundary_samples(E11, 2))


@pytest.mark.parametrize("eps,side", [(F(1, 2), "lower endpoint a"), (F(3, 2), "upper endpoint b")])
def test_schur_endpoint_errors(eps, side):
    with pytest.raises(DomainError, match=side):
        schur_estimate_check(E11, TypeCD(1, 1), eps)


def test_trend_ok():
    assert trend_ok([1.0] * 20)
    assert not trend_ok([1.0] * 18 + [5.0, 9.0])
    assert not trend_ok([1.0, float("inf")])


@pytest.mark.parametrize("exp,eta,p", [(E11, 0.25, 2.0), (E21, 0.5, 2.0), (E32, 0.25, 3.0)])
def test_boundary_expansion_residual(exp, eta, p):
    r = boundary_expansion_residual(exp, witness_monomial(exp), eta, p)
    assert 0.5 <= r["ratio"] <= 2.0


def test_boundary_expansion_exact_at_zero():
    r = boundary_expansion_residual(E11, witness_monomial(E11), 0.0, 3.0)
    assert r["lhs"] == r["rhs"]


def test_inner_products_are_diagonal():
    sym = BoundaryPower(F(1, 2))
    off = monomial_inner_product(E11, (1, 0), (0, 1), sym)
    assert abs(off) < 1e-14
    diag = monomial_inner_product(E11, (2, -1), (2, -1), sym)
    assert diag.real == pytest.approx(symbol_moment(E11, (2, -1), sym).value, rel=1e-10)
