"""First-order perturbative action for even radial monomial perturbations.

The action change per primitive orbit of the unperturbed oscillator is an
even polynomial in the scaled angular momentum ltilde = 2 L / (omega R0^2),
with order-dependent rational coefficients that coincide with Legendre
polynomial coefficients.  Coefficients are derived once per order in exact
rational arithmetic and cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .specfun import double_factorial, legendre_coefficients

__all__ = [
    "ActionPolynomial",
    "LegendreFormCheck",
    "PerturbationTerm",
    "SystemParams",
    "action_coefficients",
    "delta_s",
    "effective_frequency",
    "i_coefficient",
    "k_coefficient",
    "polynomial_delta_s",
    "sigma_alpha",
    "verify_legendre_form",
]


class PerturbationTerm(NamedTuple):
    epsilon: float
    alpha: int


@dataclass(frozen=True)
class SystemParams:
    """Trap configuration: dimension, frequency, hbar and perturbation terms.

    The mass is fixed to 1; the oscillator length scale R0 = sqrt(2E)/omega
    is derived per energy rather than stored.
    """

    dim: int
    omega: float = 1.0
    hbar: float = 1.0
    terms: tuple[PerturbationTerm, ...] = ()

    def __post_init__(self):
        if self.dim < 2:
            raise DomainError(f"spatial dimension must be >= 2, got {self.dim}")
        if not self.omega > 0:
            raise DomainError(f"trap frequency must be > 0, got {self.omega}")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be > 0, got {self.hbar}")
        terms = tuple(PerturbationTerm(float(e), int(a)) for e, a in self.terms)
        for _, alpha in terms:
            if alpha < 1:
                raise DomainError(f"monomial order must be >= 1, got {alpha}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, dim: int, epsilon: float, alpha: int, omega: float = 1.0,
               hbar: float = 1.0) -> "SystemParams":
        return cls(dim=dim, omega=omega, hbar=hbar,
                   terms=(PerturbationTerm(epsilon, alpha),))

    def r0(self, energy: float) -> float:
        """Classical amplitude sqrt(2E)/omega of the unperturbed oscillator."""
        return math.sqrt(2.0 * energy) / self.omega


@dataclass(frozen=True)
class ActionPolynomial:
    """Coefficients a_j of the scaled action: -dS/sigma = sum_j a_j ltilde^(2j)."""

    alpha: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.alpha // 2 + 1:
            raise DomainError(
                f"order {self.alpha} needs {self.alpha // 2 + 1} coefficients, "
                f"got {len(self.coeffs)}"
            )

    @property
    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def scaled_value(self, ltilde):
        """sum_j a_j ltilde^(2j) in float arithmetic."""
        u = np.asarray(ltilde, dtype=float) ** 2
        out = np.zeros_like(u)
        for c in self.float_coeffs[::-1]:
            out = out * u + c
        return out if out.ndim else float(out)


def i_coefficient(alpha: int, k: int) -> Fraction:
    """Trigonometric-integral weight alpha! (2k-1)!! (2a-2k-1)!! / (k! (a-k)! (2a)!!)."""
    if alpha < 1:
        raise DomainError(f"order must be >= 1, got {alpha}")
    if not 0 <= k <= alpha:
        raise DomainError(f"index k must lie in [0, {alpha}], got {k}")
    num = (math.factorial(alpha) * double_factorial(2 * k - 1)
           * double_factorial(2 * (alpha - k) - 1))
    den = (math.factorial(k) * math.factorial(alpha - k)
           * double_factorial(2 * alpha))
    return Fraction(num, den)


def k_coefficient(alpha: int, k: int, l: int, p: int) -> int:
    """binom(k,l) binom(alpha-k,p) [(-1)^l + (-1)^p]; zero for mixed parity."""
    if not 0 <= l <= k:
        raise DomainError(f"need 0 <= l <= k, got l={l}, k={k}")
    if not 0 <= p <= alpha - k:
        raise DomainError(f"need 0 <= p <= alpha-k, got p={p}, alpha-k={alpha - k}")
    return math.comb(k, l) * math.comb(alpha - k, p) * ((-1) ** l + (-1) ** p)


@lru_cache(maxsize=None)
def action_coefficients(alpha: int) -> ActionPolynomial:
    """Exact rational coefficients a_j for a single monomial of order alpha.

    Accumulates sum_k I_k (1+t)^k (1-t)^(alpha-k) as an integer polynomial in
    t (scaled by 4^alpha, where 4^alpha I_k = C(2k,k) C(2a-2k,a-k)), then
    substitutes t^2 = 1 - ltilde^2.  The (1+t)^k (1-t)^(alpha-k) factors are
    updated incrementally by one multiplication and one exact synthetic
    division per step, so a single order costs O(alpha^2) integer operations.
    """
    if alpha < 1:
        raise DomainError(f"order must be >= 1, got {alpha}")
    comb = math.comb
    poly = [(-1) ** i * comb(alpha, i) for i in range(alpha + 1)]  # (1-t)^alpha
    acc = [0] * (alpha + 1)
    for k in range(alpha + 1):
        weight = comb(2 * k, k) * comb(2 * (alpha - k), alpha - k)
        for i in range(alpha + 1):
            acc[i] += weight * poly[i]
        if k < alpha:
            shifted = [0] * (alpha + 2)
            for i in range(alpha + 1):
                shifted[i] += poly[i]
                shifted[i + 1] += poly[i]
            carry = 0
            for i in range(alpha + 1):
                carry += shifted[i]
                poly[i] = carry
            if shifted[alpha + 1] + carry != 0:
                raise AssertionError("inexact division while updating ellipse powers")
    if any(acc[i] for i in range(1, alpha + 1, 2)):
        raise AssertionError("odd powers survived the symmetric accumulation")
    half = alpha // 2
    scale = 4 ** alpha
    coeffs = []
    for j in range(half + 1):
        total = sum(acc[2 * m] * comb(m, j) for m in range(j, half + 1))
        coeffs.append(Fraction((-1) ** j * total, scale))
    return ActionPolynomial(alpha=alpha, coeffs=tuple(coeffs))


@dataclass(frozen=True)
class LegendreFormCheck:
    alpha: int
    matches: bool


def verify_legendre_form(alpha_max: int) -> list[LegendreFormCheck]:
    """Compare derived coefficients against ltilde^a P_a(1/ltilde), exactly.

    The right-hand side's coefficient of ltilde^(2j) is the coefficient of
    x^(alpha-2j) in P_alpha(x).  Failure is reported, not raised.
    """
    if alpha_max < 1:
        raise DomainError(f"alpha_max must be >= 1, got {alpha_max}")
    out = []
    for alpha in range(1, alpha_max + 1):
        derived = action_coefficients(alpha).coeffs
        legendre = legendre_coefficients(alpha)
        expected = tuple(legendre[alpha - 2 * j] for j in range(alpha // 2 + 1))
        out.append(LegendreFormCheck(alpha=alpha, matches=derived == expected))
    return out


def sigma_alpha(energy: float, epsilon: float, alpha: int, omega: float) -> float:
    """Action scale of the perturbation: eps * 2 pi E^alpha / omega^(2 alpha + 1)."""
    return epsilon * 2.0 * math.pi * energy ** alpha / omega ** (2 * alpha + 1)


def delta_s(poly: ActionPolynomial, sigma: float, ltilde: float) -> float:
    """First-order action change -sigma * sum_j a_j ltilde^(2j)."""
    if not 0.0 <= ltilde <= 1.0:
        raise DomainError(f"scaled angular momentum must lie in [0, 1], got {ltilde}")
    return -sigma * poly.scaled_value(ltilde)


def effective_frequency(params: SystemParams) -> float:
    """Trap frequency absorbing all harmonic (alpha=1) perturbation terms."""
    eps1 = sum(t.epsilon for t in params.terms if t.alpha == 1)
    radicand = params.omega ** 2 + 2.0 * eps1
    if radicand <= 0:
        raise DomainError(
            f"harmonic terms invert the trap: omega^2 + 2*eps = {radicand}"
        )
    return math.sqrt(radicand)


def absorb_harmonic_terms(params: SystemParams) -> SystemParams:
    """Re-parametrize: fold alpha=1 terms into the frequency, keep the rest."""
    higher = tuple(t for t in params.terms if t.alpha >= 2)
    if len(higher) == len(params.terms):
        return params
    return SystemParams(dim=params.dim, omega=effective_frequency(params),
                        hbar=params.hbar, terms=higher)


def polynomial_delta_s(params: SystemParams, energy: float
                       ) -> tuple[ActionPolynomial, float]:
    """Combined action polynomial for a polynomial perturbation at energy E.

    Returns (poly, sigma) with dS_total(ltilde) = -sigma * sum_j c_j ltilde^(2j)
    and sum_j c_j = 1, obtained by summing each monomial term linearly with its
    own action scale folded in.  All terms must have alpha >= 2; harmonic
    terms belong in the effective frequency, not here.
    """
    if energy <= 0:
        raise DomainError(f"energy must be > 0, got {energy}")
    if any(t.alpha < 2 for t in params.terms):
        raise DomainError("alpha=1 terms must be absorbed into the frequency first")
    if not params.terms:
        return ActionPolynomial(alpha=1, coeffs=(1.0,)), 0.0
    max_alpha = max(t.alpha for t in params.terms)
    raw = np.zeros(max_alpha // 2 + 1)
    sigma_total = 0.0
    for eps, alpha in params.terms:
        sigma = sigma_alpha(energy, eps, alpha, params.omega)
        sigma_total += sigma
        raw[: alpha // 2 + 1] += sigma * action_coefficients(alpha).float_coeffs
    if sigma_total == 0.0:
        return ActionPolynomial(alpha=1, coeffs=(1.0,)), 0.0
    coeffs = tuple(c / sigma_total for c in raw)
    return ActionPolynomial(alpha=max_alpha, coeffs=coeffs), sigma_total
