"""Exact L^p boundedness ranges on H_{m/n}.

All arithmetic uses :class:`fractions.Fraction`; no floating point enters any
function in this module.  Infinite endpoints are the singleton :data:`INF`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ConditionError, DomainError, RangeError
from .index_core import HartogsExponent
from .moments import BoundaryPower, ModPower

__all__ = [
    "INF",
    "Infinity",
    "PRange",
    "TypeCD",
    "SchurTuple",
    "FullRange",
    "Gain",
    "SmoothingOutcome",
    "Thresholds",
    "GainCheck",
    "as_fraction",
    "bergman_range",
    "toeplitz_mod_power_range",
    "type_cd_range",
    "schur_exponents",
    "schur_p_range",
    "smoothing_outcome",
    "unbounded_thresholds",
    "r_upper_constraint",
    "gain_consistency",
    "upper_threshold",
]


class Infinity:
    """Positive infinity as an exact endpoint value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("hartogs.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()
Endpoint = Union[Fraction, Infinity]


def as_fraction(x) -> Fraction:
    """Exact conversion; floats are converted through their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class PRange:
    lower: Fraction
    upper: Endpoint
    lower_open: bool = True
    upper_open: bool = True

    def __post_init__(self):
        if self.lower < 1:
            raise DomainError(f"lower endpoint {self.lower} is below 1")
        if self.upper is not INF and not self.lower < self.upper:
            raise DomainError(f"empty range ({self.lower}, {self.upper})")

    def __contains__(self, p):
        p = as_fraction(p)
        above = p > self.lower if self.lower_open else p >= self.lower
        if self.upper is INF:
            return above
        below = p < self.upper if self.upper_open else p <= self.upper
        return above and below

    def __str__(self):
        lb = "(" if self.lower_open else "["
        ub = ")" if self.upper_open else "]"
        return f"{lb}{self.lower}, {self.upper}{ub}"


def _clamped(lower: Fraction, upper: Endpoint) -> PRange:
    # L^p theory here needs p > 1; formula endpoints at or below 1 become an open 1
    return PRange(max(lower, Fraction(1)), upper)


@dataclass(frozen=True)
class TypeCD:
    """Exponents of a kernel majorant ``|z2|^c |w2|^d / (...)``."""

    c: Fraction
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "d", as_fraction(self.d))


@dataclass(frozen=True)
class SchurTuple:
    a: Fraction
    b: Fraction
    a_prime: Fraction
    b_prime: Fraction

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise ConditionError(f"need 0 < a < b, got a={self.a}, b={self.b}", "0 < a < b")
        if not 0 < self.a_prime < self.b_prime:
            raise ConditionError(
                f"need 0 < a' < b', got a'={self.a_prime}, b'={self.b_prime}",
                "0 < a' < b'",
            )


def upper_threshold(exp: HartogsExponent) -> Fraction:
    """``M = (2m + 2n)/(m + n - 1)``."""
    return Fraction(2 * exp.m + 2 * exp.n, exp.m + exp.n - 1)


def bergman_range(exp: HartogsExponent) -> PRange:
    m, n = exp.m, exp.n
    return PRange(Fraction(2 * m + 2 * n, m + n + 1), upper_threshold(exp))


def _mod_power_window(exp: HartogsExponent, a: Fraction) -> None:
    hi = Fraction(exp.m + exp.n - 1, exp.m)
    if not 0 <= a <= hi:
        raise DomainError(f"symbol power a={a} outside [0, {hi}] for gamma={exp}")


def toeplitz_mod_power_range(exp: HartogsExponent, a) -> PRange:
    """Range for the Toeplitz operator with symbol ``|z2|^a``."""
    a = as_fraction(a)
    _mod_power_window(exp, a)
    m, n = exp.m, exp.n
    return _clamped(Fraction(2 * m + 2 * n) / (m + n + 1 + m * a), upper_threshold(exp))


def type_cd_range(exp: HartogsExponent, cd: TypeCD) -> PRange:
    m, n = exp.m, exp.n
    low_den = cd.d * m + 2 * n + 2 * m - 2 * n * m
    up_den = 2 * n * m - cd.c * m
    if not low_den > 0:
        raise ConditionError(f"dm + 2n + 2m - 2nm = {low_den} is not positive", "dm+2n+2m-2nm>0")
    if not up_den > 0:
        raise ConditionError(f"2nm - cm = {up_den} is not positive", "2nm-cm>0")
    if not low_den > up_den:
        raise ConditionError(
            f"dm + 2n + 2m - 2nm = {low_den} does not exceed 2nm - cm = {up_den}",
            "dm+2n+2m-2nm>2nm-cm",
        )
    num = Fraction(2 * n + 2 * m)
    return _clamped(num / low_den, num / up_den)


def schur_exponents(exp: HartogsExponent, cd: TypeCD) -> SchurTuple:
    m, n = exp.m, exp.n
    two_n = 2 * n
    shift = Fraction(two_n, m) - two_n + 2
    return SchurTuple(
        a=1 - cd.c / two_n,
        b=(cd.d + shift) / two_n,
        a_prime=1 - cd.d / two_n,
        b_prime=(cd.c + shift) / two_n,
    )


def schur_p_range(t: SchurTuple) -> PRange:
    return PRange((t.a_prime + t.b) / t.b, (t.b_prime + t.a) / t.a)


@dataclass(frozen=True)
class FullRange:
    """Bounded from L^p into L^r for every r below ``r_sup``."""

    r_sup: Fraction


@dataclass(frozen=True)
class Gain:
    """Bounded from L^p into L^r with ``r = p + G``."""

    G: Fraction
    r: Fraction


@dataclass(frozen=True)
class SmoothingOutcome:
    outcome: Union[FullRange, Gain]
    M: Fraction
    L: Fraction
    threshold_eta: Fraction

    def __post_init__(self):
        if isinstance(self.outcome, Gain) and not self.outcome.r < self.M:
            raise AssertionError(f"p + G = {self.outcome.r} is not below M = {self.M}")


def _lower_L(exp: HartogsExponent, eta: Fraction) -> Fraction:
    m, n = exp.m, exp.n
    return max(Fraction(2 * m + 2 * n) / (m + n + 1 + m * n * eta), Fraction(1))


def smoothing_outcome(exp: HartogsExponent, eta, p) -> SmoothingOutcome:
    """Target space of the boundary-distance Toeplitz operator on L^p.

    Raises :class:`RangeError` when ``p`` is outside the open interval
    ``(L, M)``; there the operator does not improve integrability at all.
    """
    eta, p = as_fraction(eta), as_fraction(p)
    if eta < 0:
        raise DomainError(f"eta must be nonnegative, got {eta}")
    M = upper_threshold(exp)
    L = _lower_L(exp, eta)
    if not L < p < M:
        raise RangeError(f"p={p} is outside ({L}, {M}); T_eta is unbounded L^p -> L^r, r >= p")
    threshold = 2 * (1 / p - 1 / M)
    if eta >= threshold:
        outcome = FullRange(M)
    else:
        G = Fraction(0) if eta == 0 else p * p / (2 / eta - p)
        outcome = Gain(G, p + G)
    return SmoothingOutcome(outcome, M, L, threshold)


@dataclass(frozen=True)
class Thresholds:
    adjoint_p_star: Endpoint
    operator_upper: Fraction


def unbounded_thresholds(exp: HartogsExponent, sym) -> Thresholds:
    """Exponent from which the adjoint image of the witness leaves L^p."""
    m, n = exp.m, exp.n
    if isinstance(sym, ModPower):
        a = as_fraction(sym.a)
        _mod_power_window(exp, a)
        den = m + n - 1 - m * a
    elif isinstance(sym, BoundaryPower):
        eta = as_fraction(sym.eta)
        if eta < 0:
            raise DomainError(f"eta must be nonnegative, got {eta}")
        den = m + n - 1 - m * n * eta
    else:
        raise DomainError(f"unsupported symbol {sym!r}")
    p_star = INF if den <= 0 else Fraction(2 * m + 2 * n) / den
    return Thresholds(p_star, upper_threshold(exp))


def r_upper_constraint(exp: HartogsExponent, rho, p) -> Fraction:
    """``q (M/rho - 1)`` with q the conjugate exponent of p."""
    rho, p = as_fraction(rho), as_fraction(p)
    if p <= 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if rho < 1:
        raise DomainError(f"rho must be at least 1, got {rho}")
    M = upper_threshold(exp)
    if not M / rho > 1:
        raise ConditionError(f"M/rho = {M / rho} is not above 1", "M/rho>1")
    q = p / (p - 1)
    return q * (M / rho - 1)


@dataclass(frozen=True)
class GainCheck:
    rho: Fraction
    G_of_rho: Endpoint
    G_of_eta: Endpoint
    agree: bool


def _gain(p: Fraction, conj: Endpoint) -> Endpoint:
    if conj is INF:
        return Fraction(0)
    den = conj - p
    return INF if den <= 0 else p * p / den


def gain_consistency(eta, p) -> GainCheck:
    """Compare ``p^2/(rho/(rho-1) - p)`` with ``p^2/(2/eta - p)`` at ``rho = 2/(2 - eta)``.

    A nonpositive denominator means the gain is unlimited (reported as INF);
    callers in that regime belong to the full-range case instead.
    """
    eta, p = as_fraction(eta), as_fraction(p)
    if not 0 <= eta < 2:
        raise DomainError(f"eta must lie in [0, 2), got {eta}")
    rho = Fraction(2) / (2 - eta)
    rho_conj = INF if rho == 1 else rho / (rho - 1)
    eta_conj = INF if eta == 0 else 2 / eta
    g_rho, g_eta = _gain(p, rho_conj), _gain(p, eta_conj)
    return GainCheck(rho, g_rho, g_eta, g_rho == g_eta and rho_conj == eta_conj)
