"""Quadrature on H_{m/n} in polar coordinates, divergence scans and Schur checks.

Every integral over the domain is reduced to the two radii.  The inner radius
is rescaled, ``s = r1 / r2^(n/m)``, which turns the region into the rectangle
``(0, 1) x (eps, 1)``.  Each variable is then integrated with composite
Gauss-Legendre panels graded geometrically toward the endpoints, where the
integrands carry algebraic singularities.  Refinement deepens the grading and
adds nodes; the difference between the last two levels is the error bound.

Integrands passed to :func:`integrate_scaled` are called as
``g(s, r2, s_c, r2_c)`` with ``s`` of shape ``(ns, 1)``, ``r2`` of shape
``(1, nr)``, and ``s_c = 1 - s``, ``r2_c = 1 - r2`` computed without
cancellation.  They must already include the Jacobian ``s * r2^(2n/m + 1)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AccuracyError, DomainError
from .index_core import HartogsExponent, WitnessMonomial, in_index_set
from .kernel import DomainPoint
from .moments import (
    Method,
    ModPower,
    MomentValue,
    SymbolSpec,
    adjoint_antiholo_constant,
    one_minus_power,
)
from .ranges import INF, TypeCD, as_fraction, schur_exponents, unbounded_thresholds

__all__ = [
    "QuadConfig",
    "graded_rule",
    "integrate_scaled",
    "integrate_polar",
    "integrate_interval",
    "Verdict",
    "DivergenceVerdict",
    "lp_divergence_scan",
    "auxiliary_h",
    "disc_integral",
    "disc_lemma_check",
    "boundary_samples",
    "schur_integral",
    "schur_estimate_check",
    "boundary_expansion_residual",
    "monomial_inner_product",
    "trend_ok",
]

FOUR_PI2 = 4.0 * math.pi ** 2
SIGMA = 0.2  # geometric grading ratio


@dataclass(frozen=True)
class QuadConfig:
    eps_cutoff: float = 1e-30
    rel_tol: float = 1e-10
    max_refinement: int = 8
    base_nodes: int = 12

    def __post_init__(self):
        if not 0 < self.eps_cutoff < 1:
            raise DomainError(f"eps_cutoff must lie in (0, 1), got {self.eps_cutoff}")
        if self.rel_tol < 1e-12:
            raise DomainError(f"rel_tol below 1e-12 is not attainable, got {self.rel_tol}")
        if self.max_refinement < 1:
            raise DomainError("max_refinement must be positive")
        if self.base_nodes < 4:
            raise DomainError("base_nodes must be at least 4")


def _level(cfg: QuadConfig, j: int) -> Tuple[int, int]:
    nodes = cfg.base_nodes + 2 * min(j, 2)
    depth = 12 + 8 * j
    return nodes, depth


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=64)
def graded_rule(lo: float, hi: float, nodes: int, depth: int, hi_singular: bool = True):
    """Composite Gauss-Legendre rule on ``[lo, hi]``.

    The lower half is graded geometrically toward the origin (stopping at
    ``lo`` when ``lo > 0``, else after ``depth`` panels); the upper half is
    graded toward ``hi`` when ``hi_singular``.  Returns ``(x, one_minus_x, w)``;
    on the upper half the complement is formed from the distance to ``hi``.
    """
    if not 0 <= lo < hi:
        raise DomainError(f"bad interval [{lo}, {hi}]")
    gx, gw = _gauss(nodes)
    mid = 0.5 * (lo + hi)
    xs, cs, ws = [], [], []

    bps = [mid]
    if lo == 0.0:
        bps += [mid * SIGMA ** k for k in range(1, depth + 1)] + [0.0]
    else:
        while bps[-1] * SIGMA > lo:
            bps.append(bps[-1] * SIGMA)
        bps.append(lo)
    for b, a in zip(bps[:-1], bps[1:]):
        x = a + (b - a) * gx
        xs.append(x)
        cs.append(1.0 - x)
        ws.append((b - a) * gw)

    span = hi - mid
    if hi_singular:
        tps = [span * SIGMA ** k for k in range(depth + 1)] + [0.0]
    else:
        tps = [span, 0.0]
    tail = 1.0 - hi
    for b, a in zip(tps[:-1], tps[1:]):
        t = a + (b - a) * gx
        xs.append(hi - t)
        cs.append(tail + t)
        ws.append((b - a) * gw)

    x, c, w = np.concatenate(xs), np.concatenate(cs), np.concatenate(ws)
    for arr in (x, c, w):
        arr.setflags(write=False)
    return x, c, w


def _refine(estimate: Callable[[int], float], cfg: QuadConfig, what: str) -> MomentValue:
    prev = estimate(0)
    for j in range(1, cfg.max_refinement + 1):
        cur = estimate(j)
        err = abs(cur - prev)
        if not math.isfinite(cur):
            raise AccuracyError(f"{what}: non-finite estimate at level {j}", cur, math.inf)
        if err <= cfg.rel_tol * abs(cur) or cur == prev:
            return MomentValue(cur, Method.QUADRATURE, err)
        prev = cur
    raise AccuracyError(
        f"{what}: refinement budget of {cfg.max_refinement} levels exhausted; "
        f"last change {err:.3e} vs estimate {cur:.6e}",
        cur,
        err,
    )


def integrate_scaled(
    exp: HartogsExponent,
    g: Callable,
    cfg: QuadConfig = QuadConfig(),
    r2_lo: Optional[float] = None,
    r2_hi: float = 1.0,
    hi_singular: bool = True,
    angular: float = FOUR_PI2,
) -> MomentValue:
    """``angular * int_{r2_lo}^{r2_hi} int_0^1 g(s, r2, 1-s, 1-r2) ds dr2``."""
    lo = cfg.eps_cutoff if r2_lo is None else float(r2_lo)

    def estimate(j):
        nodes, depth = _level(cfg, j)
        s, s_c, ws = graded_rule(0.0, 1.0, nodes, depth, True)
        r2, r2_c, wr = graded_rule(lo, float(r2_hi), nodes, depth, hi_singular)
        vals = g(s[:, None], r2[None, :], s_c[:, None], r2_c[None, :])
        return angular * float(ws @ np.asarray(vals) @ wr)

    return _refine(estimate, cfg, "integrate_scaled")


def integrate_polar(exp: HartogsExponent, f: Callable, cfg: QuadConfig = QuadConfig()) -> MomentValue:
    """``(2 pi)^2 int int f(r1, r2) r1 r2 dr1 dr2`` over ``eps < r2 < 1, r1 < r2^(n/m)``.

    ``f`` receives broadcastable arrays ``r1`` of shape ``(ns, nr)`` and
    ``r2`` of shape ``(1, nr)``.
    """
    k = exp.n / exp.m

    def g(s, r2, s_c, r2_c):
        scale = r2 ** k
        return f(s * scale, r2) * s * (scale * scale * r2)

    return integrate_scaled(exp, g, cfg)


def integrate_interval(
    g: Callable, lo: float, hi: float, cfg: QuadConfig = QuadConfig(), hi_singular: bool = True
) -> MomentValue:
    """One-dimensional counterpart of :func:`integrate_scaled`; ``g(x, 1 - x)``."""

    def estimate(j):
        nodes, depth = _level(cfg, j)
        x, c, w = graded_rule(float(lo), float(hi), nodes, depth, hi_singular)
        return float(w @ g(x, c))

    return _refine(estimate, cfg, "integrate_interval")


# --------------------------------------------------------------------------
# divergence scans


class Verdict(str, enum.Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DivergenceVerdict:
    verdict: Verdict
    slope: float
    growth: float
    values: List[Tuple[float, float]]
    p: float
    p_star: object = None
    agrees: Optional[bool] = None


def _shell_exponent(exp, w, sym, p):
    # r2 power of |C phi z1^b1 z2^-b2|^p times the Jacobian, in scaled variables
    m, n = exp.m, exp.n
    return n / m * (p * w.beta1 + 2) - p * w.beta2 + p * float(sym.r2_order(exp)) + 1.0


def lp_divergence_scan(
    exp: HartogsExponent,
    w: WitnessMonomial,
    sym: SymbolSpec,
    p: float,
    eps_levels: int = 16,
    cfg: QuadConfig = QuadConfig(rel_tol=1e-10),
    slope_min: float = 0.1,
    guard: float = 0.25,
) -> DivergenceVerdict:
    """Track ``||T*(z1^b1 conj(z2)^b2)||_p^p`` truncated to ``r2 > 2^-k``.

    The adjoint image is ``C phi z1^b1 z2^-b2`` with ``C`` the projection
    coefficient.  Dyadic shells ``2^-(k+1) < r2 < 2^-k`` are integrated
    separately, so increments are never formed by cancellation.  Their
    growth exponent ``log2(I_{k+1} shell / I_k shell)`` decides the verdict:
    at least ``slope_min`` means the truncations grow faster than linearly in
    ``k`` (divergent), at most ``-slope_min`` means geometric decay of the
    increments (convergent).
    """
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}")
    if eps_levels < 4:
        raise DomainError(f"eps_levels must be at least 4, got {eps_levels}")
    p = float(p)
    b1 = w.beta1
    C = adjoint_antiholo_constant(exp, w, ModPower(0))
    logC = p * math.log(C)
    lam = _shell_exponent(exp, w, sym, p)

    def g(s, r2, s_c, r2_c):
        bf = sym.bounded_factor(exp, s, r2, s_c, r2_c)
        return math.exp(logC) * s ** (p * b1 + 1) * r2 ** lam * bf ** p

    eps = [2.0 ** -k for k in range(3, 3 + eps_levels + 1)]
    total = integrate_scaled(exp, g, cfg, r2_lo=eps[0]).value
    values = [(eps[0], total)]
    shells = []
    for hi, lo in zip(eps[:-1], eps[1:]):
        piece = integrate_scaled(exp, g, cfg, r2_lo=lo, r2_hi=hi, hi_singular=False).value
        shells.append(piece)
        total += piece
        values.append((lo, total))

    tail = [x for x in shells[-4:]]
    if all(x > 0 for x in tail):
        rates = [math.log2(b / a) for a, b in zip(tail[:-1], tail[1:])]
        growth = sum(rates) / len(rates)
    else:
        growth = -math.inf
    (e0, i0), (e1, i1) = values[-2], values[-1]
    slope = (math.log(i1) - math.log(i0)) / (math.log(1 / e1) - math.log(1 / e0)) if i0 > 0 else 0.0

    if growth >= slope_min:
        verdict = Verdict.DIVERGENT
    elif growth <= -slope_min:
        verdict = Verdict.CONVERGENT
    else:
        verdict = Verdict.INCONCLUSIVE

    p_star = unbounded_thresholds(exp, sym).adjoint_p_star
    agrees = None
    if p_star is INF:
        agrees = verdict is Verdict.CONVERGENT
    elif abs(p - float(p_star)) >= guard:
        expected = Verdict.DIVERGENT if p > float(p_star) else Verdict.CONVERGENT
        agrees = verdict is expected
    return DivergenceVerdict(verdict, slope, growth, values, p, p_star, agrees)


# --------------------------------------------------------------------------
# Schur-type estimates


def auxiliary_h(exp: HartogsExponent, z: DomainPoint) -> float:
    """``h(z) = (|z2|^2n - |z1|^2m)(1 - |z2|^2)``."""
    a1, a2 = abs(z.z1), abs(z.z2)
    return (a2 ** (2 * exp.n) - a1 ** (2 * exp.m)) * (1.0 - a2 * a2)


def trend_ok(ratios: Sequence[float], factor: float = 2.0) -> bool:
    """Last-decile maximum within ``factor`` of the overall median."""
    r = np.asarray(ratios, dtype=float)
    if not np.all(np.isfinite(r)):
        return False
    k = max(1, int(math.ceil(len(r) / 10)))
    return bool(np.max(r[-k:]) <= factor * np.median(r))


def disc_integral(eps: float, beta: float, delta: float, cfg: QuadConfig = QuadConfig()) -> MomentValue:
    """``int_D (1-|w|^2)^-eps |w|^-beta |1 - z conj(w)|^-2 dV(w)`` at ``|z| = 1 - delta``.

    The angular integral is the Poisson-type identity
    ``int_0^2pi |1 - rho e^{it}|^-2 dt = 2 pi / (1 - rho^2)``.
    """
    z = 1.0 - delta

    def g(r, c):
        one_minus_zr = c + r * delta
        return (c * (1.0 + r)) ** -eps * r ** (1.0 - beta) / (one_minus_zr * (1.0 + z * r))

    v = integrate_interval(g, 0.0, 1.0, cfg)
    return MomentValue(2 * math.pi * v.value, Method.QUADRATURE, 2 * math.pi * v.abs_error_bound)


def disc_lemma_check(eps: float, beta: float, grid_size: int = 64, cfg: QuadConfig = QuadConfig()):
    """Sup over ``|z| <= 0.999`` of the disc integral divided by ``(1-|z|^2)^-eps``.

    Grid points approach the circle geometrically: ``1 - |z| = 10^(-3t)``.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if not beta < 2:
        raise DomainError(f"beta must be below 2, got {beta}")
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    deltas = 10.0 ** (-3.0 * np.arange(grid_size) / (grid_size - 1))
    ratios = []
    for d in deltas:
        val = disc_integral(eps, beta, float(d), cfg).value
        ratios.append(val * (d * (2.0 - d)) ** eps)
    k = int(np.argmax(ratios))
    return {
        "sup_ratio": float(ratios[k]),
        "argmax_z": complex(1.0 - deltas[k]),
        "radii": [float(1.0 - d) for d in deltas],
        "ratios": [float(r) for r in ratios],
        "trend_ok": trend_ok(ratios),
    }


def boundary_samples(exp: HartogsExponent, count: int = 24) -> List[DomainPoint]:
    """Points sliding toward the corner where ``|z2| = 1`` meets ``|z1|^m = |z2|^n``."""
    out = []
    for t in np.linspace(0.0, 1.0, count):
        d = 0.5 * 10.0 ** (-3.0 * t)
        a2 = 1.0 - d
        a1 = ((1.0 - d) * a2 ** exp.n) ** (1.0 / exp.m)
        out.append(DomainPoint(complex(a1), complex(a2)))
    return out


def schur_integral(exp: HartogsExponent, cd: TypeCD, epsilon: float, z: DomainPoint,
                   cfg: QuadConfig = QuadConfig()) -> MomentValue:
    """``int_H type_cd_rhs(z, w) h(w)^-epsilon dV(w)``.

    Both angular integrals are done exactly: for fixed radii the kernel
    majorant depends on the angles only through ``|1 - z2 conj(w2)|^-2`` and
    ``|z2^n conj(w2)^n - z1^m conj(w1)^m|^-2``, and each averages to a
    Poisson-type factor ``1 / (1 - rho^2)``.
    """
    m, n = exp.m, exp.n
    c, d, e = float(cd.c), float(cd.d), float(epsilon)
    a1, a2 = abs(z.z1), abs(z.z2)
    q2 = (a1 ** m / a2 ** n) ** 2
    margin = 1.0 - q2
    d2 = 1.0 - a2
    const = a2 ** (c - 2 * n)
    lam = d - 2 * n - 2 * n * e + 2 * n / m + 1

    def g(s, r2, s_c, r2_c):
        one_minus_s2m = one_minus_power(s, s_c, 2 * m)
        poisson_1 = (r2_c + r2 * d2) * (1.0 + a2 * r2)
        poisson_2 = margin + q2 * one_minus_s2m
        h_w = one_minus_s2m * (r2_c * (1.0 + r2))
        return const * r2 ** lam * s * h_w ** -e / (poisson_1 * poisson_2)

    return integrate_scaled(exp, g, cfg, r2_lo=0.0)


def schur_estimate_check(
    exp: HartogsExponent,
    cd: TypeCD,
    epsilon,
    sample_z: Optional[Sequence[DomainPoint]] = None,
    cfg: QuadConfig = QuadConfig(rel_tol=1e-8),
):
    """Ratios ``K(h^-eps)(z) / h(z)^-eps`` over ``sample_z`` (ordered toward the boundary)."""
    t = schur_exponents(exp, cd)
    eps_q = as_fraction(epsilon)
    if not eps_q > t.a:
        raise DomainError(f"epsilon={eps_q} must exceed the lower endpoint a={t.a}")
    if not eps_q < t.b:
        raise DomainError(f"epsilon={eps_q} must be below the upper endpoint b={t.b}")
    samples = list(sample_z) if sample_z is not None else boundary_samples(exp)
    ratios = []
    for z in samples:
        val = schur_integral(exp, cd, float(eps_q), z, cfg).value
        ratios.append(val * auxiliary_h(exp, z) ** float(eps_q))
    return {"sup_ratio": float(max(ratios)), "ratios": ratios, "trend_ok": trend_ok(ratios)}


def boundary_expansion_residual(
    exp: HartogsExponent, w: WitnessMonomial, eta: float, p: float,
    cfg: QuadConfig = QuadConfig(rel_tol=1e-10),
):
    """Full radial integrand versus its first-order expansion on ``0 < r2 < 1/2``.

    The expansion replaces ``(1 - x)^(p eta)`` by ``1 - p eta x`` for both
    ``x = r2^2`` and ``x = r1^m / r2^n`` (which is ``s^m``).
    """
    if p * eta < 0:
        raise DomainError("p * eta must be nonnegative")
    m, n = exp.m, exp.n
    b1, b2 = w.beta1, w.beta2
    pe = float(p) * float(eta)
    lam = -p * b2 + 1 + n * pe + n / m * (p * b1 + 2)

    def full(s, r2, s_c, r2_c):
        base = s ** (p * b1 + 1) * r2 ** lam
        one_minus_sm = one_minus_power(s, s_c, m)
        return base * (r2_c * (1.0 + r2)) ** pe * one_minus_sm ** pe

    def expanded(s, r2, s_c, r2_c):
        base = s ** (p * b1 + 1) * r2 ** lam
        return base * (1.0 - pe * r2 * r2) * (1.0 - pe * s ** m)

    kw = dict(r2_lo=0.0, r2_hi=0.5, hi_singular=False, angular=1.0)
    lhs = integrate_scaled(exp, full, cfg, **kw).value
    rhs = integrate_scaled(exp, expanded, cfg, **kw).value
    return {"lhs": lhs, "rhs": rhs, "ratio": lhs / rhs}


# --------------------------------------------------------------------------
# inner products of monomials


def _angular_sum(k: int, n_angle: int) -> complex:
    theta = 2 * math.pi * np.arange(n_angle) / n_angle
    return complex(np.sum(np.exp(1j * k * theta)) * (2 * math.pi / n_angle))


@lru_cache(maxsize=4096)
def _radial_moment(exp, k1, k2, sym, cfg):
    # int int phi r1^k1 r2^k2 r1 r2 dr1 dr2  (no angular factor)
    m, n = exp.m, exp.n
    lam = n / m * (k1 + 2) + k2 + 1 + float(sym.r2_order(exp))

    def g(s, r2, s_c, r2_c):
        return s ** (k1 + 1) * r2 ** lam * sym.bounded_factor(exp, s, r2, s_c, r2_c)

    return integrate_scaled(exp, g, cfg, angular=1.0)


def monomial_inner_product(
    exp: HartogsExponent, beta, gamma, sym: SymbolSpec,
    cfg: QuadConfig = QuadConfig(), n_angle: int = 64,
) -> complex:
    """``<phi z^beta, z^gamma>`` by trapezoidal angles and graded radial quadrature."""
    if not (in_index_set(exp, beta) and in_index_set(exp, gamma)):
        raise DomainError(f"{beta} and {gamma} must both be in the index set")
    ang = _angular_sum(beta[0] - gamma[0], n_angle) * _angular_sum(beta[1] - gamma[1], n_angle)
    radial = _radial_moment(exp, beta[0] + gamma[0], beta[1] + gamma[1], sym, cfg).value
    return ang * radial
