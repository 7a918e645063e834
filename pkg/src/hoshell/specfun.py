"""Numerical kernels: factorial families, Legendre polynomials, the confluent
hypergeometric function 1F1(1; b; z), erf along the sqrt(i) ray, and
Gauss-Legendre quadrature rules.

Everything here is pure and reentrant; quadrature rules are immutable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import fresnel

from .errors import AccuracyError, DomainError

__all__ = [
    "QuadratureRule",
    "double_factorial",
    "erf_sqrt_i",
    "gauss_legendre",
    "kummer_1f1",
    "legendre_coefficients",
    "legendre_p",
    "legendre_p_derivative",
]


def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)...; empty products (-1)!! and 0!! are 1."""
    if n < -1:
        raise DomainError(f"double factorial needs n >= -1, got {n}")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def legendre_p(alpha: int, x):
    """Legendre polynomial P_alpha(x) by the three-term recurrence.

    Exact inputs (int or Fraction) produce exact Fraction values; floats and
    numpy arrays go through float arithmetic.
    """
    if alpha < 0:
        raise DomainError(f"polynomial order must be >= 0, got {alpha}")
    exact = isinstance(x, (int, Fraction)) and not isinstance(x, bool)
    if exact:
        x = Fraction(x)
        one = Fraction(1)
    else:
        one = 1.0
    p_prev = one
    if alpha == 0:
        return p_prev if exact else p_prev * (x * 0 + 1.0)
    p_cur = x * one
    for n in range(1, alpha):
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
    return p_cur


def legendre_p_derivative(alpha: int, x):
    """P'_alpha(x) via the derivative recurrence P'_{n+1} = P'_{n-1} + (2n+1) P_n."""
    if alpha < 1:
        raise DomainError(f"derivative order must be >= 1, got {alpha}")
    p_prev, p_cur = 1.0, x * 1.0
    d_prev, d_cur = 0.0, 1.0 + 0.0 * x
    for n in range(1, alpha):
        d_prev, d_cur = d_cur, d_prev + (2 * n + 1) * p_cur
        p_prev, p_cur = p_cur, ((2 * n + 1) * x * p_cur - n * p_prev) / (n + 1)
    return d_cur


@lru_cache(maxsize=None)
def legendre_coefficients(alpha: int) -> tuple[Fraction, ...]:
    """Exact coefficients of P_alpha in ascending powers of x."""
    if alpha == 0:
        return (Fraction(1),)
    if alpha == 1:
        return (Fraction(0), Fraction(1))
    prev2 = legendre_coefficients(alpha - 2)
    prev1 = legendre_coefficients(alpha - 1)
    n = alpha - 1
    out = [Fraction(0)] * (alpha + 1)
    for i, c in enumerate(prev1):
        out[i + 1] += Fraction(2 * n + 1, n + 1) * c
    for i, c in enumerate(prev2):
        out[i] -= Fraction(n, n + 1) * c
    return tuple(out)


# ---------------------------------------------------------------------------
# Confluent hypergeometric function 1F1(1; b; z)
# ---------------------------------------------------------------------------

_SERIES_CAP = 100_000
_CF_CAP = 20_000


def _series_1f1(b: float, z: complex) -> complex:
    # 1F1(1;b;z) = sum_n z^n / (b)_n; term-ratio stop: three consecutive
    # terms below 1e-16 * |sum|.
    term = complex(1.0)
    total = complex(1.0)
    small = 0
    for n in range(_SERIES_CAP):
        term *= z / (b + n)
        total += term
        if abs(term) < 1e-16 * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise AccuracyError(
        f"1F1 series did not settle after {_SERIES_CAP} terms "
        f"(b={b}, z={z}, |term|={abs(term):.3e}, |sum|={abs(total):.3e})"
    )


def _asymptotic_1f1(b: float, z: complex) -> complex:
    # 1F1(1;b;z) = Gamma(b) e^z z^(1-b) + (b-1) sum_k (2-b)_k (-z)^(-k-1).
    # The algebraic series terminates for integer b (then this is exact);
    # otherwise truncate at the smallest term.
    lead = cmath.exp(z + (1.0 - b) * cmath.log(z) + math.lgamma(b))
    inv = -1.0 / z
    term = inv
    tail = term
    prev = abs(term)
    for k in range(int(2 * abs(z)) + 20):
        term *= (2.0 - b + k) * inv
        mag = abs(term)
        if mag == 0.0:
            break
        if mag > prev:  # divergent tail reached; stop at smallest term
            break
        tail += term
        prev = mag
    return lead + (b - 1.0) * tail


def _gamma_upper_cf(s: float, z: complex) -> complex:
    # Modified Lentz continued fraction for Gamma(s, z), |arg z| < pi.
    tiny = 1e-300
    b0 = z + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b0 if b0 != 0 else 1.0 / tiny
    h = d
    for i in range(1, _CF_CAP):
        an = -i * (i - s)
        b0 += 2.0
        d = an * d + b0
        if d == 0:
            d = tiny
        c = b0 + an / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return cmath.exp(-z + s * cmath.log(z)) * h
    raise AccuracyError(
        f"continued fraction for Gamma({s}, {z}) did not converge "
        f"in {_CF_CAP} iterations"
    )


def _half_integer_on_axis_1f1(b: float, z: complex) -> complex:
    # Upward recursion gamma(s+1,z) = s gamma(s,z) - z^s e^(-z), seeded at
    # gamma(1/2,z) = sqrt(pi) erf(sqrt(z)); stable for |z| above s because the
    # fresh z^s e^(-z) term dominates each step.
    if abs(z.real) <= 1e-13 * abs(z):
        y = z.imag
        e = erf_sqrt_i(abs(y))
        if y < 0:
            e = e.conjugate()
    else:
        e = math.erf(math.sqrt(z.real))
    g = math.sqrt(math.pi) * e
    s = 0.5
    emz = cmath.exp(-z)
    while s < b - 1.0 - 1e-9:
        g = s * g - cmath.exp(s * cmath.log(z)) * emz
        s += 1.0
    return s * cmath.exp(z - s * cmath.log(z)) * g


def kummer_1f1(b: float, z: complex) -> complex:
    """1F1(1; b; z), the confluent hypergeometric series sum_n z^n / (b)_n.

    The Taylor series with a term-ratio stopping rule is used where it is
    roundoff-safe (|z| <= 10 or decay-dominated).  Larger arguments dispatch
    on structure: integer b uses the terminating asymptotic form (exact),
    half-integer b on the real or imaginary axis uses an erf-seeded
    incomplete-gamma recursion, |z| >= 35 uses the optimally truncated
    asymptotic series, and the remainder falls back to a Lentz continued
    fraction for Gamma(b-1, z) (Kummer-transformed series deep in the left
    half-plane, where it is stable).
    """
    if b <= 0:
        raise DomainError(f"1F1(1;b;z) needs b > 0, got b={b}")
    z = complex(z)
    if z == 0:
        return complex(1.0)
    if abs(b - 1.0) < 1e-14:
        return cmath.exp(z)
    az = abs(z)
    if az <= 10.0 or az <= 0.5 * b:
        return _series_1f1(b, z)
    if abs(b - round(b)) < 1e-12:
        return _asymptotic_1f1(round(b), z)
    if az >= 35.0:
        return _asymptotic_1f1(b, z)
    on_axis = abs(z.real) <= 1e-13 * az or (abs(z.imag) <= 1e-13 * az and z.real > 0)
    if abs(2 * b - round(2 * b)) < 1e-12 and on_axis:
        return _half_integer_on_axis_1f1(b, z)
    if z.real <= -0.8 * az:
        # Kummer transform: e^z 1F1(b-1; b; -z); -z sits near the positive
        # real axis so the series has no destructive cancellation.
        w = -z
        term = complex(1.0)
        total = complex(1.0)
        small = 0
        for n in range(_SERIES_CAP):
            term *= (b - 1.0 + n) * w / ((b + n) * (n + 1.0))
            total += term
            if abs(term) < 1e-16 * abs(total):
                small += 1
                if small >= 3:
                    return cmath.exp(z) * total
            else:
                small = 0
        raise AccuracyError(f"transformed 1F1 series stalled (b={b}, z={z})")
    s = b - 1.0
    # 1F1(1;b;z) = z^-s e^z Gamma(s+1) - s * CF, with Gamma(s,z) = e^-z z^s CF.
    lead = cmath.exp(z - s * cmath.log(z) + math.lgamma(s + 1.0))
    return lead - s * cmath.exp(z - s * cmath.log(z)) * _gamma_upper_cf(s, z)


def erf_sqrt_i(x: float) -> complex:
    """erf(sqrt(i x)) for x >= 0, principal square root.

    Through the Fresnel integrals: erf(sqrt(ix)) = (1+i)(C(v) - i S(v)) with
    v = sqrt(2x/pi), obtained by integrating along the pi/4 ray.
    """
    if x < 0:
        raise DomainError(f"erf_sqrt_i needs x >= 0, got {x}")
    if x == 0:
        return complex(0.0)
    s, c = fresnel(math.sqrt(2.0 * x / math.pi))
    return complex(c + s, c - s)


# ---------------------------------------------------------------------------
# Gauss-Legendre quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes/weights on [-1, 1]; arrays are read-only."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def on_interval(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped to [a, b]."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights

    def on_panels(self, a: float, b: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights for `panels` equal subintervals of [a, b]."""
        edges = np.linspace(a, b, panels + 1)
        xs = []
        ws = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            x, w = self.on_interval(lo, hi)
            xs.append(x)
            ws.append(w)
        return np.concatenate(xs), np.concatenate(ws)


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> QuadratureRule:
    if order < 1:
        raise DomainError(f"quadrature order must be >= 1, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights, order=order)
