"""The acceptance suite as library code, shared by the CLI and the tests.

Each check returns a :class:`CheckResult`; reports contain no timings so that
two runs with the same seed are byte-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import moments, quad
from .errors import AccuracyError
from .index_core import HartogsExponent, enumerate_index_set, in_index_set, witness_monomial
from .kernel import _partial_sums, kernel_exponent, ratio_diagnostic, sample_pairs
from .moments import BoundaryPower, ModPower
from .ranges import (
    FullRange,
    Gain,
    TypeCD,
    bergman_range,
    gain_consistency,
    schur_exponents,
    schur_p_range,
    smoothing_outcome,
    toeplitz_mod_power_range,
    type_cd_range,
    unbounded_thresholds,
    upper_threshold,
    _lower_L,
)

__all__ = ["CheckResult", "CHECKS", "FAST_SUITE", "FULL_SUITE", "run_suite", "random_valid_cds"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    tolerance: str
    measured: str
    detail: str


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def _coprime_pairs(limit: int):
    return [(m, n) for m in range(1, limit + 1) for n in range(1, limit + 1) if math.gcd(m, n) == 1]


def random_valid_cds(exp: HartogsExponent, rng: np.random.Generator, count: int,
                     grain: int = 997) -> List[TypeCD]:
    """Uniform rational (c, d) with c, d < 2n and c + d > 4n - 2 - 2n/m.

    Writing ``c = lo + (2n - lo) k1/grain`` with ``lo = 2n - 2 - 2n/m`` (and
    likewise ``d``), validity is exactly ``k1 + k2 > grain``.
    """
    m, n = exp.m, exp.n
    lo_num, span_num, den = 2 * n * m - 2 * m - 2 * n, 2 * m + 2 * n, m * grain
    out: List[TypeCD] = []
    while len(out) < count:
        k = rng.integers(1, grain, size=(2 * count, 2))
        for k1, k2 in k[k.sum(axis=1) > grain][: count - len(out)].tolist():
            out.append(TypeCD(Fraction(lo_num * grain + span_num * k1, den),
                              Fraction(lo_num * grain + span_num * k2, den)))
    return out


def check_range_identity(seed: int, limit: int = 20, per_pair: int = 100) -> CheckResult:
    bad = []
    count = 0
    for i, (m, n) in enumerate(_coprime_pairs(limit)):
        exp = HartogsExponent(m, n)
        rng = _rng(seed, 1000 + i)
        for cd in random_valid_cds(exp, rng, per_pair):
            count += 1
            if schur_p_range(schur_exponents(exp, cd)) != type_cd_range(exp, cd):
                bad.append((m, n, str(cd.c), str(cd.d)))
        A = kernel_exponent(exp)
        if type_cd_range(exp, TypeCD(A, A)) != bergman_range(exp):
            bad.append((m, n, "A", "A"))
    return CheckResult(
        "range_identity",
        not bad,
        "exact",
        f"{len(bad)} mismatches in {count} tuples",
        f"first mismatch {bad[0]}" if bad else "schur_p_range o schur_exponents = type_cd_range; (A, A) gives bergman_range",
    )


def check_hartogs_endpoints(seed: int = 0) -> CheckResult:
    e = HartogsExponent(1, 1)
    b = bergman_range(e)
    t = toeplitz_mod_power_range(e, 1)
    ok = (b.lower, b.upper) == (Fraction(4, 3), Fraction(4)) and (t.lower, t.upper) == (Fraction(1), Fraction(4))
    return CheckResult("hartogs_endpoints", ok, "exact", f"bergman {b}, toeplitz(a=1) {t}", "expected (4/3, 4) and (1, 4)")


NORM_EXPONENTS = [(1, 1), (2, 1), (3, 2), (5, 3)]


def _norm_by_quadrature(exp, alpha):
    a1, a2 = alpha

    def f(r1, r2):
        return np.exp(2 * a1 * np.log(r1) + 2 * a2 * np.log(r2))

    return quad.integrate_polar(exp, f)


def check_norm_oracle(seed: int = 0, bound: int = 12, name: str = "norm_oracle") -> CheckResult:
    worst, where, count = 0.0, None, 0
    for m, n in NORM_EXPONENTS:
        exp = HartogsExponent(m, n)
        for a1 in range(0, bound + 1):
            for a2 in range(-bound, bound + 1):
                if not in_index_set(exp, (a1, a2)):
                    continue
                count += 1
                closed = moments.monomial_norm_sq(exp, (a1, a2)).value
                num = _norm_by_quadrature(exp, (a1, a2)).value
                err = abs(closed - num) / abs(num)
                if not err <= worst:
                    worst, where = err, (m, n, a1, a2)
    return CheckResult(
        name, worst <= 1e-8, "rel 1e-08", f"{worst:.3e}", f"{count} indices, |alpha_i| <= {bound}; worst at {where}"
    )


def check_diagonality(seed: int = 0, bound: int = 6) -> CheckResult:
    exp = HartogsExponent(1, 1)
    idx = [a for a in enumerate_index_set(exp, bound) if abs(a[1]) <= bound]
    worst_off, worst_diag = 0.0, 0.0
    for sym in (ModPower(1), BoundaryPower(Fraction(1, 2))):
        for b in idx:
            cb2 = moments.monomial_norm_sq(exp, b).value
            for g in idx:
                v = quad.monomial_inner_product(exp, b, g, sym)
                if b != g:
                    cg2 = moments.monomial_norm_sq(exp, g).value
                    worst_off = max(worst_off, abs(v) / math.sqrt(cb2 * cg2))
                else:
                    if isinstance(sym, ModPower):
                        ev = moments.mod_power_eigenvalue(exp, b, sym.a)
                    else:
                        ev = moments.boundary_power_eigenvalue(exp, b, sym.eta).value
                    worst_diag = max(worst_diag, abs(v.real / cb2 - ev) / ev)
    ok = worst_off <= 1e-8 and worst_diag <= 1e-8
    return CheckResult(
        "diagonality",
        ok,
        "off 1e-08 c_b c_g; diag rel 1e-08",
        f"off {worst_off:.3e}, diag {worst_diag:.3e}",
        f"{len(idx) ** 2} pairs per symbol, ModPower(1) and BoundaryPower(1/2)",
    )


SCAN_SYMBOLS = [ModPower(0), ModPower(Fraction(1, 2)), BoundaryPower(Fraction(1, 4))]


def check_sharpness(seed: int = 0, standoff: float = 0.25) -> CheckResult:
    failures, rows = [], 0
    for m, n in [(1, 1), (2, 1), (3, 2)]:
        exp = HartogsExponent(m, n)
        w = witness_monomial(exp)
        for sym in SCAN_SYMBOLS:
            p_star = unbounded_thresholds(exp, sym).adjoint_p_star
            for p in (float(p_star) - standoff, float(p_star) + standoff):
                v = quad.lp_divergence_scan(exp, w, sym, p)
                rows += 1
                if not v.agrees:
                    failures.append(f"{exp} {sym} p={p}: {v.verdict.value}")
    return CheckResult(
        "sharpness_thresholds",
        not failures,
        f"standoff {standoff}",
        f"{rows - len(failures)}/{rows} scans classified correctly",
        "; ".join(failures) or "Convergent below and Divergent above every p*",
    )


def check_smoothing_arithmetic(seed: int, count: int = 50) -> CheckResult:
    rng = _rng(seed, 6)
    bad = []
    for _ in range(count):
        m, n = (int(v) for v in rng.integers(1, 8, size=2))
        g = math.gcd(m, n)
        exp = HartogsExponent(m // g, n // g)
        eta = Fraction(int(rng.integers(1, 400)), 200)  # (0, 2)
        L, M = _lower_L(exp, eta), upper_threshold(exp)
        p = L + (M - L) * Fraction(int(rng.integers(1, 1000)), 1000)
        out = smoothing_outcome(exp, eta, p).outcome
        want_full = eta - 2 * (1 / p - 1 / M) >= 0
        if want_full != isinstance(out, FullRange):
            bad.append(f"case mismatch at {exp}, eta={eta}, p={p}")
        if isinstance(out, Gain) and not p + out.G < M:
            bad.append(f"p + G >= M at {exp}, eta={eta}, p={p}")
        if not gain_consistency(eta, p).agree:
            bad.append(f"G(rho) != G(eta) at eta={eta}, p={p}")
    return CheckResult(
        "smoothing_arithmetic", not bad, "exact", f"{len(bad)} failures in {count} draws", "; ".join(bad[:3]) or "all exact"
    )


def check_kernel_evidence(seed: int, samples: int = 200, cap: int = 20) -> CheckResult:
    exp = HartogsExponent(1, 1)
    st = ratio_diagnostic(exp, samples, cap, seed)
    z1, z2, w1, w2 = sample_pairs(exp, samples, seed)
    fwd = _partial_sums(exp, z1 * np.conj(w1), z2 * np.conj(w2), cap)
    bwd = _partial_sums(exp, w1 * np.conj(z1), w2 * np.conj(z2), cap)
    herm = float(np.max(np.abs(fwd - np.conj(bwd)) / np.abs(fwd)))
    finite = math.isfinite(st.max_ratio) and st.max_ratio > 0
    ok = finite and st.rel_change_max < 0.01 and herm <= 1e-12
    return CheckResult(
        "kernel_estimate_evidence",
        ok,
        "max-ratio change < 1%; hermitian 1e-12",
        f"max ratio {st.max_ratio:.6g} -> {st.max_ratio_doubled:.6g} (change {st.rel_change_max:.3%}); hermitian {herm:.3e}",
        f"cap {cap} vs {2 * cap}, {samples} pairs, seed {seed}",
    )


def check_schur_disc_bounds(seed: int = 0) -> CheckResult:
    disc = quad.disc_lemma_check(0.5, 1.0)
    parts = [f"disc sup {disc['sup_ratio']:.6g} trend_ok={disc['trend_ok']}"]
    ok = disc["trend_ok"]
    try:
        schur = quad.schur_estimate_check(HartogsExponent(1, 1), TypeCD(1, 1), 1)
        parts.append(f"schur sup {schur['sup_ratio']:.6g} trend_ok={schur['trend_ok']}")
        ok = ok and schur["trend_ok"]
    except AccuracyError as exc:
        ok = False
        parts.append(f"schur integral at eps=1 did not converge ({exc}); h^-1 is not integrable across |w1| = |w2|")
    return CheckResult("schur_disc_bounds", ok, "last-decile max <= 2x median", "; ".join(parts), "disc (0.5, 1.0); schur (1,1), (1,1), eps=1")


def check_majorant_integral(seed: int = 0) -> CheckResult:
    worst = 0.0
    for m, n in [(1, 1), (2, 1), (3, 2)]:
        exp = HartogsExponent(m, n)
        A = float(exp.kernel_exponent)

        def f(r1, r2, A=A, n=n):
            return r2 ** (A - 2 * n) * np.ones_like(r1)

        num = quad.integrate_polar(exp, f).value
        worst = max(worst, abs(moments.remark_29_integral(exp) - num) / num)
    return CheckResult("majorant_integral", worst <= 1e-8, "rel 1e-08", f"{worst:.3e}", "(1,1), (2,1), (3,2)")


def _reduced_norm(seed: int) -> CheckResult:
    return check_norm_oracle(seed, bound=4, name="norm_oracle_reduced")


CHECKS: Dict[str, Callable[[int], CheckResult]] = {
    "range_identity": check_range_identity,
    "hartogs_endpoints": check_hartogs_endpoints,
    "norm_oracle": check_norm_oracle,
    "norm_oracle_reduced": _reduced_norm,
    "diagonality": check_diagonality,
    "sharpness_thresholds": check_sharpness,
    "smoothing_arithmetic": check_smoothing_arithmetic,
    "kernel_estimate_evidence": check_kernel_evidence,
    "schur_disc_bounds": check_schur_disc_bounds,
    "majorant_integral": check_majorant_integral,
}

FAST_SUITE = ["range_identity", "hartogs_endpoints", "smoothing_arithmetic", "majorant_integral", "norm_oracle_reduced"]
FULL_SUITE = [
    "range_identity",
    "hartogs_endpoints",
    "norm_oracle",
    "diagonality",
    "sharpness_thresholds",
    "smoothing_arithmetic",
    "kernel_estimate_evidence",
    "schur_disc_bounds",
    "majorant_integral",
]


def run_suite(suite: str = "full", seed: int = 0) -> List[CheckResult]:
    names = {"fast": FAST_SUITE, "full": FULL_SUITE}[suite]
    return [CHECKS[name](seed) for name in names]
