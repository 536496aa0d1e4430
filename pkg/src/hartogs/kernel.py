"""Truncated Bergman kernel series and the majorants that bound it.

The kernel is ``sum z^alpha conj(w)^alpha / c_alpha^2`` over the index set.
Truncation keeps the rectangle ``a1 <= cap, a2 <= cap``; there is no tail
bound, so convergence is judged by doubling ``cap``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, SingularityError
from .index_core import HartogsExponent, enumerate_index_set
from .moments import BoundaryPower, monomial_norm_sq
from .ranges import TypeCD

__all__ = [
    "DomainPoint",
    "kernel_exponent",
    "kernel_partial_sum",
    "kernel_estimate_rhs",
    "type_cd_rhs",
    "k_eta_exponents",
    "k_eta_power_majorant",
    "sample_pairs",
    "RatioStats",
    "ratio_diagnostic",
    "majorant_constant",
]


@dataclass(frozen=True)
class DomainPoint:
    z1: complex
    z2: complex

    def check(self, exp: HartogsExponent) -> "DomainPoint":
        a1, a2 = abs(self.z1), abs(self.z2)
        if not (a1 ** exp.m < a2 ** exp.n and a2 < 1):
            raise DomainError(f"{self} is not in H_{exp}")
        return self


def kernel_exponent(exp: HartogsExponent) -> Fraction:
    return exp.kernel_exponent


def _coefficients(exp: HartogsExponent, cap: int):
    idx = np.array(enumerate_index_set(exp, cap), dtype=np.int64)
    inv_c2 = np.array([1.0 / monomial_norm_sq(exp, tuple(a)).value for a in idx])
    return idx, inv_c2


def _partial_sums(exp, x, y, cap):
    # x^a1 y^a2 = exp(a1 Log x + a2 Log y): no intermediate power can overflow,
    # since every term of the series is bounded on the domain
    idx, inv_c2 = _coefficients(exp, cap)
    log_x = np.log(np.asarray(x, dtype=complex))
    log_y = np.log(np.asarray(y, dtype=complex))
    out = np.zeros(np.shape(log_x), dtype=complex)
    for a1 in range(cap + 1):
        rows = idx[:, 0] == a1
        a2 = idx[rows, 1].astype(float)
        terms = np.exp(a1 * log_x[None, ...] + a2.reshape((-1,) + (1,) * log_y.ndim) * log_y[None, ...])
        out += np.tensordot(inv_c2[rows], terms, axes=(0, 0))
    return out


def kernel_partial_sum(exp: HartogsExponent, z: DomainPoint, w: DomainPoint, cap: int) -> complex:
    if cap < 1:
        raise DomainError(f"cap must be positive, got {cap}")
    z.check(exp)
    w.check(exp)
    x = z.z1 * np.conj(w.z1)
    y = z.z2 * np.conj(w.z2)
    return complex(_partial_sums(exp, np.array([x]), np.array([y]), cap)[0])


def _denominator(exp, z, w):
    z2w2 = z.z2 * np.conj(w.z2)
    d1 = abs(1 - z2w2) ** 2
    d2 = abs(z2w2 ** exp.n - (z.z1 * np.conj(w.z1)) ** exp.m) ** 2
    if d1 == 0 or d2 == 0:
        raise SingularityError(f"kernel majorant is singular at z={z}, w={w}")
    return d1 * d2


def type_cd_rhs(exp: HartogsExponent, cd, z: DomainPoint, w: DomainPoint) -> float:
    """``|z2|^c |w2|^d / (|1 - z2 w2*|^2 |z2^n w2*^n - z1^m w1*^m|^2)``."""
    z.check(exp)
    w.check(exp)
    den = _denominator(exp, z, w)
    return abs(z.z2) ** float(cd.c) * abs(w.z2) ** float(cd.d) / den


def kernel_estimate_rhs(exp: HartogsExponent, z: DomainPoint, w: DomainPoint) -> float:
    A = float(exp.kernel_exponent)
    z.check(exp)
    w.check(exp)
    return abs(z.z2 * np.conj(w.z2)) ** A / _denominator(exp, z, w)


def k_eta_exponents(exp: HartogsExponent, rho):
    """``(rho(A - 2n) + 2n, rho A)``, the type of ``|K_eta|^rho``."""
    A = exp.kernel_exponent
    rho = Fraction(rho)
    return TypeCD(rho * (A - 2 * exp.n) + 2 * exp.n, rho * A)


def k_eta_power_majorant(exp: HartogsExponent, eta, rho, z: DomainPoint, w: DomainPoint) -> float:
    eta, rho = Fraction(eta), Fraction(rho)
    if eta < 0:
        raise DomainError(f"eta must be nonnegative, got {eta}")
    if rho < 1:
        raise DomainError(f"rho must be at least 1, got {rho}")
    if rho * eta < 2 * (rho - 1):
        raise DomainError(f"need rho*eta >= 2(rho - 1); got rho={rho}, eta={eta}")
    return type_cd_rhs(exp, k_eta_exponents(exp, rho), z, w)


def _random_points(exp, rng, size):
    # z2 uniform in the unit disc, then z1 uniform in the disc of radius |z2|^(n/m)
    r2 = np.sqrt(rng.random(size))
    t2 = 2 * np.pi * rng.random(size)
    r1 = r2 ** (exp.n / exp.m) * np.sqrt(rng.random(size))
    t1 = 2 * np.pi * rng.random(size)
    return r1 * np.exp(1j * t1), r2 * np.exp(1j * t2)


def sample_pairs(exp: HartogsExponent, count: int, seed: int, margin: float = 0.05,
                 min_modulus: float = 0.1):
    """Seeded point pairs away from the singular sets of the kernel majorant.

    Uses a Philox (counter-based) generator; the result depends only on
    ``(exp, count, seed, margin, min_modulus)``.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    zs1, zs2, ws1, ws2 = [], [], [], []
    got = 0
    while got < count:
        batch = max(64, 4 * (count - got))
        z1, z2 = _random_points(exp, rng, batch)
        w1, w2 = _random_points(exp, rng, batch)
        y = z2 * np.conj(w2)
        ok = (
            (np.abs(1 - y) >= margin)
            & (np.abs(y ** exp.n - (z1 * np.conj(w1)) ** exp.m) >= margin)
            & (np.abs(z2) >= min_modulus)
            & (np.abs(w2) >= min_modulus)
            & (np.abs(z1) ** exp.m < np.abs(z2) ** exp.n)
            & (np.abs(w1) ** exp.m < np.abs(w2) ** exp.n)
        )
        take = np.flatnonzero(ok)[: count - got]
        zs1.append(z1[take])
        zs2.append(z2[take])
        ws1.append(w1[take])
        ws2.append(w2[take])
        got += len(take)
    return (np.concatenate(zs1), np.concatenate(zs2), np.concatenate(ws1), np.concatenate(ws2))


def _estimate_array(exp, z1, z2, w1, w2, c, d):
    y = z2 * np.conj(w2)
    den = np.abs(1 - y) ** 2 * np.abs(y ** exp.n - (z1 * np.conj(w1)) ** exp.m) ** 2
    return np.abs(z2) ** c * np.abs(w2) ** d / den


@dataclass(frozen=True)
class RatioStats:
    sample_count: int
    cap: int
    max_ratio: float
    mean_ratio: float
    max_ratio_doubled: float
    mean_ratio_doubled: float
    rel_change_max: float
    rel_change_mean: float
    max_pointwise_change: float


def ratio_diagnostic(exp: HartogsExponent, sample_count: int = 200, cap: int = 20,
                     seed: int = 0) -> RatioStats:
    """``|B_cap(z, w)| / kernel_estimate_rhs(z, w)`` over seeded samples, at cap and 2*cap."""
    if cap < 4:
        raise DomainError(f"cap must be at least 4, got {cap}")
    if sample_count < 1:
        raise DomainError("sample_count must be positive")
    z1, z2, w1, w2 = sample_pairs(exp, sample_count, seed)
    x, y = z1 * np.conj(w1), z2 * np.conj(w2)
    A = float(exp.kernel_exponent)
    est = _estimate_array(exp, z1, z2, w1, w2, A, A)
    r1 = np.abs(_partial_sums(exp, x, y, cap)) / est
    r2 = np.abs(_partial_sums(exp, x, y, 2 * cap)) / est
    return RatioStats(
        sample_count=sample_count,
        cap=cap,
        max_ratio=float(r1.max()),
        mean_ratio=float(r1.mean()),
        max_ratio_doubled=float(r2.max()),
        mean_ratio_doubled=float(r2.mean()),
        rel_change_max=float(abs(r2.max() - r1.max()) / r2.max()),
        rel_change_mean=float(abs(r2.mean() - r1.mean()) / r2.mean()),
        max_pointwise_change=float(np.max(np.abs(r2 - r1) / r2)),
    )


def majorant_constant(exp: HartogsExponent, eta, rho, sample_count: int = 200, cap: int = 20,
                      seed: int = 0) -> float:
    """Largest sampled ``|B_cap(z, w) phi_eta(w)|^rho / majorant(z, w)``.

    The implied constant is not known in closed form; this records it.
    """
    eta, rho = Fraction(eta), Fraction(rho)
    if rho * eta < 2 * (rho - 1):
        raise DomainError(f"need rho*eta >= 2(rho - 1); got rho={rho}, eta={eta}")
    z1, z2, w1, w2 = sample_pairs(exp, sample_count, seed)
    x, y = z1 * np.conj(w1), z2 * np.conj(w2)
    phi = BoundaryPower(eta)(exp, np.abs(w1), np.abs(w2))
    lhs = np.abs(_partial_sums(exp, x, y, cap) * phi) ** float(rho)
    cd = k_eta_exponents(exp, rho)
    return float(np.max(lhs / _estimate_array(exp, z1, z2, w1, w2, float(cd.c), float(cd.d))))
