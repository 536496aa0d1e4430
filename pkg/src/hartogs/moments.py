"""Moment integrals of radial weights against monomials on H_{m/n}.

Radial symbols act diagonally on the monomial basis, so every Toeplitz
eigenvalue is a ratio of two moments.  Closed forms are used wherever they
exist; Beta functions go through ``math.lgamma`` so large arguments do not
overflow.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError
from .index_core import HartogsExponent, WitnessMonomial, in_index_set

__all__ = [
    "ModPower",
    "BoundaryPower",
    "SymbolSpec",
    "parse_symbol",
    "Method",
    "MomentValue",
    "log_beta",
    "monomial_norm_sq",
    "symbol_moment",
    "mod_power_eigenvalue",
    "boundary_power_eigenvalue",
    "adjoint_antiholo_constant",
    "remark_29_integral",
]

PI2 = math.pi ** 2


@dataclass(frozen=True)
class ModPower:
    """The symbol ``|z2|^a``."""

    a: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        if self.a < 0:
            raise DomainError(f"ModPower needs a >= 0, got {self.a}")

    def __call__(self, exp, r1, r2):
        return np.asarray(r2, dtype=float) ** float(self.a)

    def r2_order(self, exp):
        return self.a

    def bounded_factor(self, exp, s, r2, s_c, r2_c):
        return np.ones(np.broadcast_shapes(np.shape(s), np.shape(r2)))

    def __str__(self):
        return f"mod:{self.a}"


@dataclass(frozen=True)
class BoundaryPower:
    """The symbol ``(|z2|^n - |z1|^m)^eta * (1 - |z2|^2)^eta``."""

    eta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "eta", Fraction(self.eta))
        if self.eta < 0:
            raise DomainError(f"BoundaryPower needs eta >= 0, got {self.eta}")

    def __call__(self, exp, r1, r2):
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        eta = float(self.eta)
        gap = np.maximum(r2 ** exp.n - r1 ** exp.m, 0.0)
        return gap ** eta * (1.0 - r2 * r2) ** eta

    def r2_order(self, exp):
        return exp.n * self.eta

    def bounded_factor(self, exp, s, r2, s_c, r2_c):
        # phi / r2^(n eta) = (1 - s^m)^eta (1 - r2^2)^eta, s = r1 / r2^(n/m);
        # both factors are built from exact complements to stay accurate near 1
        eta = float(self.eta)
        if eta == 0.0:
            return np.ones(np.broadcast_shapes(np.shape(s), np.shape(r2)))
        return (one_minus_power(s, s_c, exp.m) * (r2_c * (1.0 + r2))) ** eta

    def __str__(self):
        return f"boundary:{self.eta}"


SymbolSpec = Union[ModPower, BoundaryPower]


def one_minus_power(s, s_c, k):
    """``1 - s**k`` for ``s`` in (0, 1), given the exact complement ``s_c = 1 - s``."""
    near = s_c < 0.5
    log_s = np.where(near, np.log1p(-np.where(near, s_c, 0.0)), np.log(np.where(near, 1.0, s)))
    return -np.expm1(k * log_s)


def parse_symbol(text: str) -> SymbolSpec:
    """Parse ``mod:<a>`` or ``boundary:<eta>``; values may be decimals or fractions."""
    kind, sep, value = text.partition(":")
    if not sep:
        raise DomainError(f"symbol {text!r} is not of the form kind:value")
    try:
        v = Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad symbol parameter {value!r}") from exc
    kind = kind.strip().lower()
    if kind == "mod":
        return ModPower(v)
    if kind == "boundary":
        return BoundaryPower(v)
    raise DomainError(f"unknown symbol kind {kind!r}; expected mod or boundary")


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class MomentValue:
    value: float
    method: Method
    abs_error_bound: float = 0.0

    def __post_init__(self):
        if self.method is Method.CLOSED_FORM and self.abs_error_bound != 0.0:
            raise ValueError("closed-form values carry no error bound")
        if self.abs_error_bound < 0:
            raise ValueError("error bound must be nonnegative")

    def __float__(self):
        return float(self.value)


def log_beta(x: float, y: float) -> float:
    if x <= 0 or y <= 0:
        raise DomainError(f"Beta function needs positive arguments, got ({x}, {y})")
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def _require_member(exp, alpha, what="alpha"):
    if not in_index_set(exp, alpha):
        raise DomainError(
            f"{what}={tuple(alpha)} is not in the index set of H_{exp}; the integral diverges"
        )


def monomial_norm_sq(exp: HartogsExponent, alpha) -> MomentValue:
    r"""Squared L^2 norm of ``z^alpha``: ``pi^2 m / ((a1+1)(m(a2+1) + n(a1+1)))``."""
    _require_member(exp, alpha)
    a1, a2 = alpha
    m, n = exp.m, exp.n
    return MomentValue(PI2 * m / ((a1 + 1) * (m * (a2 + 1) + n * (a1 + 1))), Method.CLOSED_FORM)


def _log_symbol_moment(exp, alpha, sym) -> float:
    # log of  int_H phi |z^alpha|^2 dV
    a1, a2 = alpha
    m, n = exp.m, exp.n
    if isinstance(sym, ModPower):
        a = float(sym.a)
        den = (a1 + 1) * (m * (2 * a2 + 2 + a) + 2 * n * (a1 + 1))
        if den <= 0:
            raise DomainError(f"moment of |z2|^{a} against z^{tuple(alpha)} diverges")
        return math.log(2 * PI2 * m / den)
    if isinstance(sym, BoundaryPower):
        eta = float(sym.eta)
        inner = log_beta((2 * a1 + 2) / m, eta + 1) - math.log(m)
        outer = log_beta(a2 + 1 + n * eta / 2 + n * (a1 + 1) / m, eta + 1) - math.log(2)
        return math.log(4 * PI2) + inner + outer
    raise DomainError(f"unsupported symbol {sym!r}")


def _quadrature_symbol_moment(exp, alpha, sym, cfg=None) -> MomentValue:
    from . import quad

    a1, a2 = alpha
    lam = float(2 * a2 + 1) + exp.n / exp.m * (2 * a1 + 2)

    def integrand(s, r2, s_c, r2_c):
        return (s ** (2 * a1 + 1) * r2 ** (lam + float(sym.r2_order(exp)))
                * sym.bounded_factor(exp, s, r2, s_c, r2_c))

    return quad.integrate_scaled(exp, integrand, cfg or quad.QuadConfig())


def symbol_moment(exp: HartogsExponent, alpha, sym: SymbolSpec, method="closed_form") -> MomentValue:
    """``int_H phi(z) |z^alpha|^2 dV(z)`` for a radial symbol ``phi``."""
    _require_member(exp, alpha)
    if Method(method) is Method.QUADRATURE:
        return _quadrature_symbol_moment(exp, alpha, sym)
    try:
        return MomentValue(math.exp(_log_symbol_moment(exp, alpha, sym)), Method.CLOSED_FORM)
    except (OverflowError, ValueError):
        return _quadrature_symbol_moment(exp, alpha, sym)


def mod_power_eigenvalue(exp: HartogsExponent, beta, a) -> float:
    """Diagonal coefficient of the Toeplitz operator with symbol ``|z2|^a`` at ``z^beta``."""
    _require_member(exp, beta, "beta")
    if a < 0:
        raise DomainError(f"a must be nonnegative, got {a}")
    b1, b2 = beta
    m, n = exp.m, exp.n
    base = m * (2 * b2 + 2) + 2 * n * (b1 + 1)
    return base / (base + m * float(a))


def boundary_power_eigenvalue(exp: HartogsExponent, beta, eta, method="closed_form") -> MomentValue:
    _require_member(exp, beta, "beta")
    sym = BoundaryPower(eta)
    if Method(method) is Method.QUADRATURE:
        num = _quadrature_symbol_moment(exp, beta, sym)
        c2 = monomial_norm_sq(exp, beta).value
        return MomentValue(num.value / c2, Method.QUADRATURE, num.abs_error_bound / c2)
    if sym.eta == 0:
        return MomentValue(1.0, Method.CLOSED_FORM)
    try:
        log_num = _log_symbol_moment(exp, beta, sym)
    except OverflowError:
        return boundary_power_eigenvalue(exp, beta, eta, method=Method.QUADRATURE)
    log_c2 = math.log(monomial_norm_sq(exp, beta).value)
    return MomentValue(min(math.exp(log_num - log_c2), 1.0), Method.CLOSED_FORM)


def adjoint_antiholo_constant(exp: HartogsExponent, w: WitnessMonomial, sym: SymbolSpec) -> float:
    """``C`` in ``T_phi(z1^b1 conj(z2)^b2) = C z1^b1 z2^-b2``.

    Only the Laurent coefficient with index ``(b1, -b2)`` survives the angular
    integration; its numerator is the moment of ``phi`` against ``|z1|^(2 b1)``.
    """
    b1, b2 = w.beta1, w.beta2
    if not (in_index_set(exp, (b1, b2)) and in_index_set(exp, (b1, -b2))):
        raise DomainError(f"({b1}, {b2}) and ({b1}, {-b2}) must both be in the index set")
    num = symbol_moment(exp, (b1, 0), sym).value
    return num / monomial_norm_sq(exp, (b1, -b2)).value


def remark_29_integral(exp: HartogsExponent) -> float:
    """``int_H |w2|^(A - 2n) dV = 2 pi^2 m / (m + n + 1)`` with ``A`` the kernel exponent."""
    return 2 * PI2 * exp.m / (exp.m + exp.n + 1)
