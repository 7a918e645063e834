"""Oscillating density of states: exact oscillator limit, the perturbative
trace formula with Gaussian averaging, the factorized super-shell form for
D=3, and the analytic super-shell node positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .actionpoly import (
    ActionPolynomial,
    SystemParams,
    absorb_harmonic_terms,
    polynomial_delta_s,
)
from .errors import DomainError, UnsupportedMethodError
from .modfactor import (
    Method,
    modulation_closed_form,
    modulation_quadrature,
    modulation_spa,
)

__all__ = [
    "DosCurve",
    "HoLevel",
    "envelope_nodes",
    "ho_dos",
    "ho_spectrum",
    "pert_dos",
    "supershell_factorized",
    "supershell_nodes",
]


@dataclass(frozen=True)
class HoLevel:
    n: int
    energy: float
    degeneracy: int


@dataclass(frozen=True)
class DosCurve:
    """Density of states on an energy grid, split into smooth and oscillating."""

    energies: np.ndarray
    smooth: np.ndarray
    oscillating: np.ndarray
    k_max: int
    width: float

    def __post_init__(self):
        if np.any(np.diff(self.energies) <= 0):
            raise DomainError("energy grid must be strictly increasing")

    @property
    def total(self) -> np.ndarray:
        return self.smooth + self.oscillating


def ho_spectrum(dim: int, omega: float, hbar: float, n_max: int) -> list[HoLevel]:
    """Unperturbed levels hbar omega (n + D/2) with binomial degeneracies."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if dim < 2:
        raise DomainError(f"spatial dimension must be >= 2, got {dim}")
    return [
        HoLevel(n=n, energy=hbar * omega * (n + dim / 2.0),
                degeneracy=math.comb(n + dim - 1, dim - 1))
        for n in range(n_max + 1)
    ]


def _damping(width: float, k: np.ndarray, t0: float, hbar: float) -> np.ndarray:
    return np.exp(-((width * k * t0 / (2.0 * hbar)) ** 2))


def ho_dos(dim: int, omega: float, hbar: float, energies: np.ndarray,
           k_max: int = 200, width: float = 0.0) -> DosCurve:
    """Gaussian-averaged trace formula of the unperturbed oscillator.

    Uses the full product prefactor, so the k-sum reproduces the quantum
    spectrum as a train of Gaussians of weight equal to the degeneracies.
    """
    energies = np.asarray(energies, dtype=float)
    shell = energies / (hbar * omega)
    pref = np.ones_like(shell)
    for j in range(1, dim):
        pref *= shell - dim / 2.0 + j
    pref /= hbar * omega * math.factorial(dim - 1)
    ks = np.arange(1, k_max + 1)
    damp = _damping(width, ks, 2.0 * math.pi / omega, hbar)
    signs = (-1.0) ** (dim * ks)
    phases = np.cos(2.0 * math.pi * np.outer(shell, ks))
    osc = pref * (2.0 * phases @ (signs * damp))
    return DosCurve(energies=energies, smooth=pref, oscillating=osc,
                    k_max=k_max, width=width)


def _modulation(poly: ActionPolynomial, sigma_over_hbar: float, dim: int,
                k: int, method: Method) -> complex:
    if method == "quadrature":
        return modulation_quadrature(poly, sigma_over_hbar, dim, k).value
    if method == "closed_form":
        return modulation_closed_form(poly, sigma_over_hbar, dim, k).value
    if method == "spa":
        if sigma_over_hbar == 0.0:
            return complex(1.0)
        return modulation_spa(poly, sigma_over_hbar, dim, k).value
    raise UnsupportedMethodError(f"unknown modulation method {method!r}")


def pert_dos(params: SystemParams, energies: np.ndarray, k_max: int = 10,
             width: float | None = None, method: Method = "quadrature") -> DosCurve:
    """Perturbative trace formula on an energy grid.

    The smooth column is the leading Thomas-Fermi term
    E^(D-1) / ((D-1)! (hbar omega)^D); the oscillating column is

        2 * smooth * sum_{k=1}^{k_max} (-1)^(Dk) e^(-(w k T0 / 2 hbar)^2)
                         Re{ M_k exp(i k S0 / hbar) },

    with S0 = 2 pi E / omega.  Harmonic perturbation terms are folded into an
    effective frequency before the oscillating sum is assembled.
    """
    if k_max < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    params = absorb_harmonic_terms(params)
    dim, omega, hbar = params.dim, params.omega, params.hbar
    if width is None:
        width = 0.1 * hbar * omega
    energies = np.asarray(energies, dtype=float)
    if np.any(energies <= 0):
        raise DomainError("energies must be positive")
    smooth = energies ** (dim - 1) / (math.factorial(dim - 1) * (hbar * omega) ** dim)
    ks = np.arange(1, k_max + 1)
    damp = _damping(width, ks, 2.0 * math.pi / omega, hbar)
    signs = (-1.0) ** (dim * ks)
    osc = np.empty_like(energies)
    for i, energy in enumerate(energies):
        poly, sigma = polynomial_delta_s(params, float(energy))
        s0_over_hbar = 2.0 * math.pi * energy / (omega * hbar)
        acc = 0.0
        for k, d, sg in zip(ks, damp, signs):
            mod = _modulation(poly, sigma / hbar, dim, int(k), method)
            acc += sg * d * (mod * np.exp(1j * k * s0_over_hbar)).real
        osc[i] = 2.0 * smooth[i] * acc
    return DosCurve(energies=energies, smooth=smooth, oscillating=osc,
                    k_max=k_max, width=width)


def _supershell_setup(params: SystemParams) -> tuple[float, int, float, float]:
    params = absorb_harmonic_terms(params)
    if params.dim != 3 or len(params.terms) != 1 or params.terms[0].alpha not in (2, 3):
        raise UnsupportedMethodError(
            "factorized super-shell form needs D=3 and a single order-2 or "
            "order-3 monomial perturbation"
        )
    eps, alpha = params.terms[0]
    if eps == 0.0:
        raise DomainError("super-shell analysis needs a nonzero perturbation")
    a0 = 1.5 if alpha == 2 else 2.5
    a1 = -0.5 if alpha == 2 else -1.5
    return eps, alpha, a0, a1


def supershell_factorized(params: SystemParams, energies: np.ndarray,
                          k_max: int = 10, width: float = 0.0) -> np.ndarray:
    """Factorized oscillating DOS for D=3 and orders 2, 3:

        (omega^(2(alpha-1)) E^(2-alpha) / (pi eps a1 hbar^2))
        * sum_k ((-1)^k / k) cos(k [S0 - sigma (a0 + a1/2)] / hbar)
                             sin(k sigma a1 / (2 hbar)),

    with the optional per-k Gaussian damping of the averaged trace formula.
    """
    eps, alpha, a0, a1 = _supershell_setup(params)
    params = absorb_harmonic_terms(params)
    omega, hbar = params.omega, params.hbar
    energies = np.asarray(energies, dtype=float)
    ks = np.arange(1, k_max + 1)
    damp = _damping(width, ks, 2.0 * math.pi / omega, hbar)
    sigma = eps * 2.0 * math.pi * energies ** alpha / omega ** (2 * alpha + 1)
    s0 = 2.0 * math.pi * energies / omega
    slow = np.sin(np.outer(sigma, ks) * a1 / (2.0 * hbar))
    fast = np.cos(np.outer(s0 - sigma * (a0 + 0.5 * a1), ks) / hbar)
    series = (fast * slow) @ (damp * (-1.0) ** ks / ks)
    pref = omega ** (2 * (alpha - 1)) * energies ** (2 - alpha) / (
        math.pi * eps * a1 * hbar ** 2)
    return pref * series


def supershell_nodes(params: SystemParams, s_max: int) -> list[float]:
    """Shell quantum numbers E/(hbar omega) where the beat envelope vanishes."""
    eps, alpha, _, _ = _supershell_setup(params)
    params = absorb_harmonic_terms(params)
    omega, hbar = params.omega, params.hbar
    if s_max < 1:
        raise DomainError(f"s_max must be >= 1, got {s_max}")
    out = []
    for s in range(1, s_max + 1):
        if alpha == 2:
            out.append(math.sqrt(2.0 * s * omega ** 3 / (abs(eps) * hbar)))
        else:
            out.append((2.0 * s * omega ** 4 / (3.0 * abs(eps) * hbar ** 2)) ** (1.0 / 3.0))
    return out


def envelope_profile(energies: np.ndarray, oscillating: np.ndarray,
                     shell_spacing: float) -> tuple[np.ndarray, np.ndarray]:
    """Shell-oscillation envelope: max |oscillating| over consecutive windows
    of one shell spacing.  Returns (window centers, envelope samples)."""
    energies = np.asarray(energies, dtype=float)
    oscillating = np.asarray(oscillating, dtype=float)
    lo, hi = energies[0], energies[-1]
    n_windows = max(3, int(round((hi - lo) / shell_spacing)))
    edges = np.linspace(lo, hi, n_windows + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    env = np.empty(n_windows)
    for i in range(n_windows):
        sel = (energies >= edges[i]) & (energies <= edges[i + 1])
        env[i] = np.max(np.abs(oscillating[sel])) if np.any(sel) else np.nan
    return centers, env


def envelope_nodes(energies: np.ndarray, oscillating: np.ndarray,
                   shell_spacing: float, depth: float = 0.3) -> np.ndarray:
    """Locate beat nodes of the shell-oscillation envelope.

    A node is an interior local minimum of the windowed envelope that is
    deeper than `depth` times both flanking local maxima; this rejects the
    shallow ripple minima where only part of the repetition sum vanishes.
    Positions are refined by parabolic interpolation.
    """
    centers, env = envelope_profile(energies, oscillating, shell_spacing)
    n = len(env)
    nodes = []
    for i in range(1, n - 1):
        if not (env[i] < env[i - 1] and env[i] <= env[i + 1]):
            continue
        left = env[:i][env[:i] > env[i]]
        right = env[i + 1:][env[i + 1:] > env[i]]
        peak_left = np.max(left) if left.size else env[i - 1]
        peak_right = np.max(right) if right.size else env[i + 1]
        if env[i] > depth * min(peak_left, peak_right):
            continue
        denom = env[i - 1] - 2.0 * env[i] + env[i + 1]
        shift = 0.5 * (env[i - 1] - env[i + 1]) / denom if denom > 0 else 0.0
        nodes.append(centers[i] + shift * (centers[1] - centers[0]))
    return np.asarray(nodes)
