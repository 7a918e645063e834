"""Complex modulation factor of the perturbed trace formula.

Three mutually checking evaluations of

    M_k = (D-1) * integral_0^1  l^(D-2) exp(-i k sigma P(l) / hbar) dl,

where P(l) = sum_j a_j l^(2j) is the scaled action polynomial: direct
panel-split Gauss-Legendre quadrature, a hypergeometric closed form for
two-coefficient polynomials, and the end-point stationary-phase asymptotics.
All formulas are written in terms of the dimensionless x = k sigma / hbar.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .actionpoly import ActionPolynomial
from .errors import AccuracyError, DomainError, PropertyViolationError, UnsupportedMethodError
from .specfun import QuadratureRule, erf_sqrt_i, gauss_legendre, kummer_1f1, legendre_p_derivative

__all__ = [
    "ModulationFactor",
    "StationaryPointAudit",
    "modulation_closed_form",
    "modulation_elementary",
    "modulation_quadrature",
    "modulation_spa",
    "spa_stationary_point_audit",
]

Method = Literal["quadrature", "closed_form", "spa"]

DEFAULT_ORDER = 200
_NODES_PER_CYCLE = 10.0
_QUAD_TOL = 1e-8


@dataclass(frozen=True)
class ModulationFactor:
    k: int
    value: complex
    method: Method
    sigma_over_hbar: float

    def __abs__(self) -> float:
        return abs(self.value)


def _check_dk(dim: int, k: int) -> None:
    if dim < 2:
        raise DomainError(f"spatial dimension must be >= 2, got {dim}")
    if k == 0:
        raise DomainError("repetition index k must be nonzero")


def _quad_value(poly: ActionPolynomial, x: float, dim: int,
                rule: QuadratureRule, panels: int) -> complex:
    nodes, weights = rule.on_panels(0.0, 1.0, panels)
    phase = -x * poly.scaled_value(nodes)
    integrand = nodes ** (dim - 2) * np.exp(1j * phase)
    return (dim - 1) * complex(np.sum(weights * integrand))


def modulation_quadrature(poly: ActionPolynomial, sigma_over_hbar: float,
                          dim: int, k: int,
                          rule: QuadratureRule | None = None) -> ModulationFactor:
    """M_k by Gauss-Legendre quadrature of the one-dimensional integral.

    The interval is split into equal panels so that each panel sees at most
    order / 10 phase cycles; the returned value uses doubled panels and the
    difference between the two resolutions serves as the error estimate.
    """
    _check_dk(dim, k)
    if rule is None:
        rule = gauss_legendre(DEFAULT_ORDER)
    x = k * sigma_over_hbar
    # Total phase swing across [0, 1]; dense sampling is robust for combined
    # polynomials whose scaled profile need not be monotone.
    probe = poly.scaled_value(np.linspace(0.0, 1.0, 513))
    swing = abs(x) * (float(np.max(probe)) - float(np.min(probe)))
    cycles = swing / (2.0 * math.pi)
    panels = max(1, math.ceil(cycles * _NODES_PER_CYCLE / rule.order))
    coarse = _quad_value(poly, x, dim, rule, panels)
    fine = _quad_value(poly, x, dim, rule, 2 * panels)
    err = abs(fine - coarse)
    if err > _QUAD_TOL * max(1.0, abs(fine)):
        raise AccuracyError(
            f"modulation quadrature error estimate {err:.3e} exceeds "
            f"{_QUAD_TOL:.0e}; raise the rule order or panel count "
            f"(order={rule.order}, panels={panels}, x={x:.6g})"
        )
    return ModulationFactor(k=k, value=fine, method="quadrature",
                            sigma_over_hbar=sigma_over_hbar)


def _two_coefficients(poly: ActionPolynomial) -> tuple[float, float]:
    coeffs = poly.float_coeffs
    if len(coeffs) > 2:
        raise UnsupportedMethodError(
            f"closed form needs at most two coefficients (orders 2 and 3); "
            f"order {poly.alpha} has {len(coeffs)} - use quadrature"
        )
    a0 = float(coeffs[0])
    a1 = float(coeffs[1]) if len(coeffs) == 2 else 0.0
    return a0, a1


def modulation_closed_form(poly: ActionPolynomial, sigma_over_hbar: float,
                           dim: int, k: int) -> ModulationFactor:
    """Hypergeometric closed form, valid for two-coefficient action polynomials:

        exp(-i x (a0+a1)) [1 + 2z/(D+1) + 4 z^2 1F1(1; (D+5)/2; z) / ((D+1)(D+3))]

    with z = i x a1 and x = k sigma / hbar.  Evaluated through the contiguous
    contraction exp(-i x a0) exp(-z) 1F1(1; (D+1)/2; z), which is the same
    function but free of the bracket's large-|z| cancellation.
    """
    _check_dk(dim, k)
    a0, a1 = _two_coefficients(poly)
    x = k * sigma_over_hbar
    z = 1j * x * a1
    value = cmath.exp(-1j * x * a0 - z) * kummer_1f1((dim + 1) / 2.0, z)
    return ModulationFactor(k=k, value=value, method="closed_form",
                            sigma_over_hbar=sigma_over_hbar)


def _erf_ratio(w: float) -> complex:
    """erf(sqrt(i w)) / sqrt(i w) with the principal branch, any real w != 0."""
    e = erf_sqrt_i(abs(w))
    root = cmath.sqrt(1j * abs(w))
    if w < 0:
        return (e / root).conjugate()
    return e / root


def modulation_elementary(poly: ActionPolynomial, sigma_over_hbar: float,
                          dim: int, k: int) -> ModulationFactor:
    """Dimension-specific elementary/erf forms for D = 2..7 (two-coefficient
    polynomials); equivalent to the hypergeometric closed form."""
    _check_dk(dim, k)
    a0, a1 = _two_coefficients(poly)
    x = k * sigma_over_hbar
    w = x * a1  # k sigma a1 / hbar
    if w == 0.0:
        value = cmath.exp(-1j * x * a0)
        return ModulationFactor(k=k, value=value, method="closed_form",
                                sigma_over_hbar=sigma_over_hbar)
    eout = cmath.exp(-1j * x * (a0 + a1))  # circular end point
    ein = cmath.exp(-1j * x * a0)          # diameter end point
    if dim == 2:
        value = 0.5 * math.sqrt(math.pi) * _erf_ratio(w) * ein
    elif dim == 3:
        value = 1j / w * (eout - ein)
    elif dim == 4:
        value = 0.75j / w * (2.0 * eout - math.sqrt(math.pi) * _erf_ratio(w) * ein)
    elif dim == 5:
        value = 2.0 / w ** 2 * ((1j * w + 1.0) * eout - ein)
    elif dim == 6:
        value = (0.625 / w ** 2
                 * ((4j * w + 6.0) * eout - 3.0 * math.sqrt(math.pi) * _erf_ratio(w) * ein))
    elif dim == 7:
        value = 3.0 / w ** 3 * ((1j * w * w + 2.0 * w - 2j) * eout + 2j * ein)
    else:
        raise UnsupportedMethodError(
            f"no tabulated elementary form for D={dim}; use the hypergeometric "
            f"closed form or quadrature"
        )
    return ModulationFactor(k=k, value=value, method="closed_form",
                            sigma_over_hbar=sigma_over_hbar)


def modulation_spa(poly: ActionPolynomial, sigma_over_hbar: float,
                   dim: int, k: int) -> ModulationFactor:
    """End-point stationary-phase asymptotics.

    The circular end point l=1 contributes i exp(-i x sum_{j>=1} a_j)/(x B)
    with B = sum_{j>=1} 2j a_j; the diameter end point l=0 contributes the
    Fresnel-type moment Gamma((D-1)/2)/2 |x a1|^(-s) exp(-i sign(x a1) s pi/2)
    with s = (D-1)/2, the principal branch of (1/(x a1))^s.
    """
    _check_dk(dim, k)
    coeffs = poly.float_coeffs
    if len(coeffs) < 2:
        raise UnsupportedMethodError("SPA needs a non-constant action polynomial")
    a0 = float(coeffs[0])
    a1 = float(coeffs[1])
    x = k * sigma_over_hbar
    if x * a1 == 0.0:
        raise DomainError("SPA needs sigma * a1 * k != 0")
    tail = float(np.sum(coeffs[1:]))
    slope = float(np.sum(2.0 * np.arange(1, len(coeffs)) * coeffs[1:]))
    if slope == 0.0:
        raise DomainError("degenerate upper end point: sum_j 2j a_j vanishes")
    upper = 1j * cmath.exp(-1j * x * tail) / (x * slope)
    s = 0.5 * (dim - 1)
    w = x * a1
    lower = (0.5 * math.gamma(s) * abs(w) ** (-s)
             * cmath.exp(-1j * math.copysign(1.0, w) * s * math.pi / 2.0))
    value = (dim - 1) * cmath.exp(-1j * x * a0) * (upper + lower)
    return ModulationFactor(k=k, value=value, method="spa",
                            sigma_over_hbar=sigma_over_hbar)


@dataclass(frozen=True)
class StationaryPointAudit:
    alpha: int
    scan_points: int
    min_abs_slope: float
    max_derivative_root: float
    interior_root_free: bool


def spa_stationary_point_audit(poly: ActionPolynomial,
                               scan_points: int = 100_000) -> StationaryPointAudit:
    """Certify that the phase has no stationary point in (0, 1].

    Scans the reduced slope sum_{j>=1} 2j a_j l^(2j-2) for sign changes on a
    dense grid and, independently, checks that every root of the derivative
    of the matching Legendre polynomial lies strictly inside (-1, 1), so the
    slope cannot vanish for 1/l >= 1.
    """
    if poly.alpha < 2:
        raise DomainError(f"audit needs order >= 2, got {poly.alpha}")
    coeffs = poly.float_coeffs
    grid = np.linspace(1.0 / scan_points, 1.0, scan_points)
    reduced = np.zeros_like(grid)
    u = grid ** 2
    for j in range(len(coeffs) - 1, 0, -1):
        reduced = reduced * u + 2.0 * j * coeffs[j]
    signs = np.sign(reduced)
    root_free = bool(np.all(signs == signs[-1]) and np.all(signs != 0.0))
    # Independent certificate: slope is proportional to l^(alpha-1) P'_{alpha-1}(1/l).
    basis = np.zeros(poly.alpha)
    basis[-1] = 1.0
    deriv_roots = np.polynomial.legendre.legroots(np.polynomial.legendre.legder(basis))
    max_root = float(np.max(np.abs(deriv_roots))) if deriv_roots.size else 0.0
    certified = max_root < 1.0 and abs(legendre_p_derivative(poly.alpha - 1, 1.0)) > 0
    if not (root_free and certified):
        raise PropertyViolationError(
            f"stationary point detected inside (0, 1] for order {poly.alpha}: "
            f"scan root-free={root_free}, max |root of P'| = {max_root}"
        )
    return StationaryPointAudit(
        alpha=poly.alpha,
        scan_points=scan_points,
        min_abs_slope=float(np.min(np.abs(reduced))),
        max_derivative_root=max_root,
        interior_root_free=True,
    )
