"""Monomial index sets of the generalized Hartogs triangles.

For a reduced fraction gamma = m/n the domain is
``H = {(z1, z2) : |z1|^m < |z2|^n < 1}`` and the monomial ``z1^a1 z2^a2``
is square integrable on it exactly when ``a1 >= 0`` and
``n*a1 + m*a2 >= 1 - m - n``.  Everything here is exact integer arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple

from .errors import DomainError

__all__ = [
    "HartogsExponent",
    "MultiIndex",
    "WitnessMonomial",
    "reduce_exponent",
    "in_index_set",
    "enumerate_index_set",
    "least_exponent",
    "least_exponent_formula",
    "least_exponent_bruteforce",
    "witness_monomial",
]


@dataclass(frozen=True, order=True)
class HartogsExponent:
    """Coprime pair ``(m, n)`` with gamma = m/n."""

    m: int
    n: int

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise DomainError(f"m and n must be integers, got {self.m!r}, {self.n!r}")
        if self.m < 1 or self.n < 1:
            raise DomainError(f"m and n must be positive, got m={self.m}, n={self.n}")
        if math.gcd(self.m, self.n) != 1:
            raise DomainError(
                f"(m, n) = ({self.m}, {self.n}) is not reduced; use reduce_exponent"
            )

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.m, self.n)

    @property
    def kernel_exponent(self) -> Fraction:
        """``A = 2n - 1 + (1 - n)/m``, the power of ``|z2 w2|`` in the kernel bound."""
        return 2 * self.n - 1 + Fraction(1 - self.n, self.m)

    def __str__(self):
        return f"{self.m}/{self.n}"


class MultiIndex(NamedTuple):
    a1: int
    a2: int


@dataclass(frozen=True)
class WitnessMonomial:
    """Exponents of the bounded function ``z1^beta1 * conj(z2)^beta2``.

    Its image under the adjoint of a radial Toeplitz operator is a multiple of
    ``phi * z1^beta1 * z2^-beta2``, which sits on the edge of the index set.
    """

    beta1: int
    beta2: int


def reduce_exponent(m_raw: int, n_raw: int) -> HartogsExponent:
    if m_raw < 1 or n_raw < 1:
        raise DomainError(f"exponent parts must be positive, got ({m_raw}, {n_raw})")
    g = math.gcd(m_raw, n_raw)
    return HartogsExponent(m_raw // g, n_raw // g)


def in_index_set(exp: HartogsExponent, alpha) -> bool:
    a1, a2 = alpha
    return a1 >= 0 and exp.n * a1 + exp.m * a2 >= 1 - exp.m - exp.n


def least_exponent_formula(exp: HartogsExponent, beta1: int) -> Fraction:
    """The real lower bound ``-1 - n(b1 - j)/m - ((j+1)n - 1)/m``, j = b1 mod m.

    The residue ``j`` cancels algebraically, so this is ``(1 - m - n - n*b1)/m``.
    It is an integer only when ``n(b1 + 1) = 1 (mod m)``.
    """
    m, n = exp.m, exp.n
    j = beta1 % m
    return -1 - Fraction(n * (beta1 - j), m) - Fraction((j + 1) * n - 1, m)


def least_exponent_bruteforce(exp: HartogsExponent, beta1: int) -> int:
    a2 = 0
    while in_index_set(exp, (beta1, a2 - 1)):
        a2 -= 1
    while not in_index_set(exp, (beta1, a2)):
        a2 += 1
    return a2


def least_exponent(exp: HartogsExponent, beta1: int) -> int:
    """Least ``a2`` with ``(beta1, a2)`` in the index set."""
    if beta1 < 0:
        raise DomainError(f"beta1 must be nonnegative, got {beta1}")
    value = math.ceil(least_exponent_formula(exp, beta1))
    assert value == least_exponent_bruteforce(exp, beta1), (exp, beta1)
    return value


def enumerate_index_set(exp: HartogsExponent, cap: int) -> List[MultiIndex]:
    """Members with ``0 <= a1 <= cap`` and ``a2 <= cap``, in lexicographic order."""
    if cap < 0:
        raise DomainError(f"cap must be nonnegative, got {cap}")
    out = []
    for a1 in range(cap + 1):
        for a2 in range(least_exponent(exp, a1), cap + 1):
            out.append(MultiIndex(a1, a2))
    return out


def witness_monomial(exp: HartogsExponent) -> WitnessMonomial:
    m, n = exp.m, exp.n
    for beta1 in range(m):
        if (n * (beta1 + 1)) % m == 1 % m:
            num = n * (beta1 + 1) - 1
            return WitnessMonomial(beta1, 1 + num // m)
    raise AssertionError(f"no residue solves n(b1+1) = 1 mod m for {exp}")  # gcd(m, n) = 1
