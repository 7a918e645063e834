"""Non-perturbative reference pipeline: torus-quantized radial spectra,
angular degeneracies, Gaussian-smoothed level densities, and the smooth
Thomas-Fermi density of states with its turning-point solve.

Radial integrals work in u = r^2, where the momentum polynomial
Q(u) = 2 E u - omega^2 u^2 - 2 eps u^(alpha+1) - L^2 has simple roots at the
turning points; mapping u = u_mid + du sin(theta) absorbs both square-root
end points and restores spectral quadrature convergence.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .actionpoly import SystemParams, absorb_harmonic_terms
from .errors import AccuracyError, DomainError, NoBoundStateError, TruncationWarning
from .specfun import gauss_legendre

__all__ = [
    "EbkLevel",
    "TurningPoint",
    "angular_degeneracy",
    "ebk_dos",
    "ebk_energy",
    "enumerate_levels",
    "outer_turning_point",
    "radial_action",
    "tf_smooth",
]

_ACTION_ORDER = 120


@dataclass(frozen=True)
class EbkLevel:
    n_r: int
    l: int
    energy: float
    degeneracy: int


@dataclass(frozen=True)
class TurningPoint:
    r_max: float
    inner: float = 0.0


def angular_degeneracy(dim: int, l: int) -> int:
    """Multiplicity of angular momentum l on the (D-1)-sphere:
    (2l + D - 2)(l + D - 3)! / ((D - 2)! l!), with the l = 0 state counting 1."""
    if dim < 2:
        raise DomainError(f"spatial dimension must be >= 2, got {dim}")
    if l < 0:
        raise DomainError(f"angular momentum must be >= 0, got {l}")
    if l == 0:
        return 1
    return math.comb(l + dim - 2, dim - 2) + math.comb(l + dim - 3, dim - 2)


def _single_term(params: SystemParams) -> tuple[float, int]:
    params = absorb_harmonic_terms(params)
    if len(params.terms) == 0:
        return 0.0, 2
    if len(params.terms) != 1:
        raise DomainError("reference pipeline handles a single monomial term")
    return params.terms[0].epsilon, params.terms[0].alpha


def _momentum_poly(params: SystemParams, energy: float, l_eff: float):
    """Q(u) = 2 E u - omega^2 u^2 - 2 eps u^(alpha+1) - L^2 and its derivative."""
    eps, alpha = _single_term(params)
    w2 = absorb_harmonic_terms(params).omega ** 2

    def q(u):
        return 2.0 * energy * u - w2 * u * u - 2.0 * eps * u ** (alpha + 1) - l_eff ** 2

    def dq(u):
        return 2.0 * energy - 2.0 * w2 * u - 2.0 * eps * (alpha + 1) * u ** alpha

    return q, dq, eps, alpha


def _turning_interval(params: SystemParams, energy: float, l_eff: float
                      ) -> tuple[float, float]:
    """Turning points (u_in, u_out) of the bounded radial well in u = r^2.

    Raises NoBoundStateError with `reason` set to "below_well" (energy under
    the effective well minimum) or "above_barrier" (eps < 0 with the well
    open to infinity at this energy).
    """
    if energy <= 0:
        raise DomainError(f"energy must be > 0, got {energy}")
    q, dq, eps, alpha = _momentum_poly(params, energy, l_eff)
    w2 = absorb_harmonic_terms(params).omega ** 2
    u_harm = (energy + math.sqrt(max(energy ** 2 - w2 * l_eff ** 2, 0.0))) / w2
    if eps >= 0:
        # Q is strictly concave: a unique interior maximum splits the roots.
        hi = u_harm if eps > 0 else u_harm * (1 + 1e-12) + 1e-300
        u_peak = brentq(dq, 0.0, hi, xtol=1e-300, rtol=8.9e-16) if dq(hi) < 0 else hi
        if q(u_peak) <= 0:
            err = NoBoundStateError(
                f"energy {energy} lies below the effective well minimum"
            )
            err.reason = "below_well"
            raise err
        u_out = brentq(q, u_peak, hi * (1 + 1e-9) + 1e-12, xtol=1e-300, rtol=8.9e-16)
    else:
        # Inverted tail: the well is closed only below the barrier.
        u_star = (w2 / (abs(eps) * (alpha + 1) * alpha)) ** (1.0 / (alpha - 1)) \
            if alpha > 1 else math.inf
        if not math.isfinite(u_star) or dq(u_star) >= 0:
            err = NoBoundStateError(
                f"energy {energy} lies above the barrier (no closed well)"
            )
            err.reason = "above_barrier"
            raise err
        u_peak = brentq(dq, 0.0, u_star, xtol=1e-300, rtol=8.9e-16)
        u_valley = u_star
        while dq(u_valley) < 0:
            u_valley *= 2.0
            if u_valley > 1e30:
                err = NoBoundStateError("no barrier found")
                err.reason = "above_barrier"
                raise err
        u_valley = brentq(dq, u_star, u_valley, xtol=1e-300, rtol=8.9e-16)
        if q(u_peak) <= 0:
            err = NoBoundStateError(
                f"energy {energy} lies below the effective well minimum"
            )
            err.reason = "below_well"
            raise err
        if q(u_valley) >= 0:
            err = NoBoundStateError(
                f"energy {energy} lies above the potential barrier"
            )
            err.reason = "above_barrier"
            raise err
        u_out = brentq(q, u_peak, u_valley, xtol=1e-300, rtol=8.9e-16)
    if l_eff == 0.0:
        u_in = 0.0
    else:
        if q(0.0) >= 0:
            raise AccuracyError("inner turning point bracketing failed")
        u_in = brentq(q, 0.0, u_peak, xtol=1e-300, rtol=8.9e-16)
    return u_in, u_out


def outer_turning_point(params: SystemParams, energy: float) -> TurningPoint:
    """Outer classical turning point of V(r) = omega^2 r^2 / 2 + eps r^(2 alpha)
    at the given energy (the l = 0 radial problem)."""
    _, u_out = _turning_interval(params, energy, 0.0)
    r_max = math.sqrt(u_out)
    eps, alpha = _single_term(params)
    params_eff = absorb_harmonic_terms(params)
    v = 0.5 * params_eff.omega ** 2 * r_max ** 2 + eps * r_max ** (2 * alpha)
    if abs(v - energy) > 1e-12 * energy:
        raise AccuracyError(
            f"turning point residual {abs(v - energy):.3e} exceeds 1e-12 * E"
        )
    return TurningPoint(r_max=r_max, inner=0.0)


def radial_action(params: SystemParams, energy: float, l_eff: float) -> float:
    """Radial action 2 * integral of sqrt(2E - omega^2 r^2 - 2 eps r^(2a) - L^2/r^2) dr
    between the turning points, with both square-root end points mapped away.

    Equal to integral of sqrt(Q(u))/u du over [u_in, u_out]; the order-doubled
    quadrature difference must stay below 1e-10 relative.
    """
    u_in, u_out = _turning_interval(params, energy, l_eff)
    q, _, eps, alpha = _momentum_poly(params, energy, l_eff)
    omega2 = absorb_harmonic_terms(params).omega ** 2

    # Half-angle forms of 1 +- sin(theta) keep full relative precision at the
    # end points, where the plain expressions cancel catastrophically.
    def _endpoint_factors(theta):
        half_angle = 0.25 * math.pi - 0.5 * theta
        return 2.0 * np.cos(half_angle) ** 2, 2.0 * np.sin(half_angle) ** 2

    if u_in == 0.0:
        mid = 0.5 * u_out
        # The integrand collapses to sqrt(mid (1-sin) (Q(u)/u)): smooth and
        # cancellation-free despite the 1/u measure.

        def evaluate(order: int) -> float:
            rule = gauss_legendre(order)
            theta, w = rule.on_interval(-0.5 * math.pi, 0.5 * math.pi)
            plus, minus = _endpoint_factors(theta)
            u = mid * plus
            q_over_u = 2.0 * energy - omega2 * u - 2.0 * eps * u ** alpha
            integrand = np.sqrt(np.maximum(mid * minus * q_over_u, 0.0))
            return float(np.sum(w * integrand))
    else:
        # Work in v = log u: the 1/u measure is absorbed, so wells with
        # u_in << u_out (small angular momentum, high energy) stay resolved.
        v_in, v_out = math.log(u_in), math.log(u_out)
        v_half = 0.5 * (v_out - v_in)

        def evaluate(order: int) -> float:
            rule = gauss_legendre(order)
            theta, w = rule.on_interval(-0.5 * math.pi, 0.5 * math.pi)
            plus, _ = _endpoint_factors(theta)
            u = np.exp(v_in + v_half * plus)
            integrand = v_half * np.cos(theta) * np.sqrt(np.maximum(q(u), 0.0))
            return float(np.sum(w * integrand))

    coarse = evaluate(_ACTION_ORDER)
    fine = evaluate(2 * _ACTION_ORDER)
    if abs(fine - coarse) > 1e-10 * max(abs(fine), 1e-300):
        raise AccuracyError(
            f"radial action quadrature error {abs(fine - coarse):.3e} "
            f"exceeds 1e-10 relative"
        )
    return fine


def _ebk_target(params: SystemParams, n_r: int) -> float:
    return 2.0 * math.pi * params.hbar * (n_r + 0.5)


def ebk_energy(params: SystemParams, n_r: int, l: int) -> EbkLevel:
    """Torus-quantized level: solve S_r(E) = 2 pi hbar (n_r + 1/2) with the
    half-integer angular shift L_eff = hbar (l + (D-2)/2).

    The quantization function is probed with awareness of the classically
    forbidden zones: energies below the effective well minimum count as
    "too low" when bracketing, and for eps < 0 a root pushed against the
    barrier means the level does not exist.
    """
    if n_r < 0 or l < 0:
        raise DomainError(f"quantum numbers must be >= 0, got ({n_r}, {l})")
    params = absorb_harmonic_terms(params)
    hbar, omega, dim = params.hbar, params.omega, params.dim
    l_eff = hbar * (l + 0.5 * (dim - 2))
    target = _ebk_target(params, n_r)
    e0 = hbar * omega * (2 * n_r + l + dim / 2.0)

    def probe(e: float) -> tuple[str, float]:
        try:
            return "ok", radial_action(params, e, l_eff) - target
        except NoBoundStateError as exc:
            return getattr(exc, "reason", "above_barrier"), math.nan

    no_level = NoBoundStateError(f"level (n_r={n_r}, l={l}) has no bound solution")

    def refine_edge(e_bad: float, e_ok: float, want_negative: bool) -> float:
        # Bisect toward a forbidden boundary until the action is defined with
        # the requested sign.  Collapsing onto the barrier while the defined
        # values stay under target means the well holds no such level.
        for _ in range(200):
            if abs(e_bad - e_ok) < 1e-14 * max(abs(e_bad), abs(e_ok), 1.0):
                if want_negative:
                    raise AccuracyError(
                        f"bracketing stalled for level (n_r={n_r}, l={l})"
                    )
                raise no_level
            mid = 0.5 * (e_bad + e_ok)
            status, val = probe(mid)
            if status != "ok":
                e_bad = mid
            elif (val < 0) == want_negative:
                return mid
            else:
                e_ok = mid
        raise AccuracyError(f"bracketing stalled for level (n_r={n_r}, l={l})")

    def find_defined(e_lo: float, e_hi: float) -> float | None:
        # Dyadic scan for any energy where the well is classically open.
        for depth in range(1, 9):
            n = 2 ** depth
            for i in range(1, n, 2):
                e = e_lo + (e_hi - e_lo) * i / n
                if probe(e)[0] == "ok":
                    return e
        return None

    def bracket_from_inside(e_in: float, f_in: float) -> tuple[float, float]:
        # Expand from a classically open energy toward the missing side.
        lo = hi = None
        if f_in == 0.0:
            return e_in, e_in
        if f_in > 0:
            hi = e_in
            step = 0.1 * hbar * omega
            while lo is None:
                cand = max(hi - step, 1e-300)
                status, val = probe(cand)
                if status == "ok" and val < 0:
                    lo = cand
                elif status != "ok":
                    lo = refine_edge(cand, hi, want_negative=True)
                else:
                    hi = cand
                    step *= 2.0
            return lo, hi
        lo = e_in
        cand, step = e_in, 0.1 * hbar * omega + 0.01 * abs(l_eff) * omega
        for _ in range(200):
            cand = cand + step
            step *= 2.0
            status, val = probe(cand)
            if status == "ok":
                if val > 0:
                    return lo, cand
                lo = cand
            elif status == "above_barrier":
                # The barrier caps the spectrum: any root must sit below.
                return lo, refine_edge(cand, lo, want_negative=False)
        raise AccuracyError(f"failed to bracket level (n_r={n_r}, l={l})")

    status0, f0 = probe(e0)
    if status0 == "ok":
        lo, hi = bracket_from_inside(e0, f0)
    else:
        # The unperturbed guess sits in a forbidden zone; scan toward the
        # well along the side the perturbation allows, then expand from inside.
        direction = 1.0 if status0 == "below_well" else -1.0
        bad, cand = e0, e0
        step = 0.1 * hbar * omega + 0.01 * abs(l_eff) * omega
        inside = None
        for _ in range(200):
            cand = cand + direction * step
            step *= 2.0
            if cand <= 0:
                cand = 0.5 * (bad if bad > 0 else e0)
            status, val = probe(cand)
            if status == "ok":
                inside = (cand, val)
                break
            if status == status0:
                bad = cand
            else:
                # Overshot across the whole open window.
                inside_e = find_defined(min(bad, cand), max(bad, cand))
                if inside_e is None:
                    raise no_level
                inside = (inside_e, probe(inside_e)[1])
                break
        if inside is None:
            raise no_level
        lo, hi = bracket_from_inside(*inside)

    if lo != hi:
        energy = brentq(lambda e: radial_action(params, e, l_eff) - target,
                        lo, hi, xtol=1e-15 * max(e0, 1.0), rtol=8.9e-16)
    else:
        energy = lo
    resid = abs(radial_action(params, energy, l_eff) - target)
    if resid > 1e-11 * target:
        raise AccuracyError(
            f"quantization residual {resid:.3e} exceeds 1e-11 * target"
        )
    return EbkLevel(n_r=n_r, l=l, energy=energy,
                    degeneracy=angular_degeneracy(dim, l))


def enumerate_levels(params: SystemParams, e_max: float,
                     n_r_max: int = 200, l_max: int = 400) -> list[EbkLevel]:
    """All torus-quantized levels with E <= e_max.

    Walks l outward, and n_r upward within each l, until the energy exceeds
    e_max; warns with a weight bound if the caps cut the enumeration short.
    Levels above a barrier (eps < 0) are skipped and reported in the warning.
    """
    levels: list[EbkLevel] = []
    truncated: list[str] = []
    for l in range(l_max + 1):
        first = None
        for n_r in range(n_r_max + 1):
            try:
                level = ebk_energy(params, n_r, l)
            except NoBoundStateError:
                truncated.append(f"(n_r={n_r}, l={l}) above barrier")
                break
            if n_r == 0:
                first = level
            if level.energy > e_max:
                break
            levels.append(level)
        else:
            truncated.append(f"n_r cap {n_r_max} reached at l={l}")
        if first is not None and first.energy > e_max:
            break
    else:
        truncated.append(f"l cap {l_max} reached")
    if truncated:
        warnings.warn(
            "level enumeration truncated: " + "; ".join(truncated[:5]),
            TruncationWarning,
        )
    return levels


def ebk_dos(params: SystemParams, energies: np.ndarray, width: float,
            n_r_max: int = 200, l_max: int = 400,
            levels: list[EbkLevel] | None = None
            ) -> tuple[np.ndarray, np.ndarray, list[EbkLevel]]:
    """Gaussian-smoothed torus-quantized DOS and its smooth reference.

    Returns (g_ebk, g_smooth, levels); the oscillating part is their
    difference.  Levels are enumerated out to 5 widths past the grid end so
    no Gaussian weight is lost, unless a precomputed list is supplied.
    """
    energies = np.asarray(energies, dtype=float)
    if width <= 0:
        raise DomainError(f"smoothing width must be > 0, got {width}")
    e_cut = energies[-1] + 5.0 * width
    if levels is None:
        levels = enumerate_levels(params, e_cut, n_r_max=n_r_max, l_max=l_max)
    g = np.zeros_like(energies)
    # fixed accumulation order keeps the sum independent of enumeration order
    for level in sorted(levels, key=lambda lev: (lev.energy, lev.l, lev.n_r)):
        g += level.degeneracy * np.exp(-((energies - level.energy) / width) ** 2)
    g /= width * math.sqrt(math.pi)
    smooth = np.array([tf_smooth(params, float(e)) for e in energies])
    return g, smooth, levels


def tf_smooth(params: SystemParams, energy: float) -> float:
    """Smooth phase-space DOS:

        (2 pi hbar^2)^(-D/2) * (2 pi^(D/2) / Gamma(D/2)^2)
            * integral_0^rmax [E - V(r)]^(D/2-1) r^(D-1) dr,

    with the substitution r = rmax sin(psi) flattening the end point for odd D.
    """
    params_eff = absorb_harmonic_terms(params)
    dim, omega = params_eff.dim, params_eff.omega
    eps, alpha = _single_term(params)
    r_max = outer_turning_point(params, energy).r_max

    def evaluate(order: int) -> float:
        rule = gauss_legendre(order)
        psi, w = rule.on_interval(0.0, 0.5 * math.pi)
        r = r_max * np.sin(psi)
        body = energy - 0.5 * omega ** 2 * r ** 2 - eps * r ** (2 * alpha)
        integrand = (np.maximum(body, 0.0) ** (0.5 * dim - 1.0)
                     * r ** (dim - 1) * r_max * np.cos(psi))
        return float(np.sum(w * integrand))

    coarse = evaluate(_ACTION_ORDER)
    fine = evaluate(2 * _ACTION_ORDER)
    if abs(fine - coarse) > 1e-11 * max(abs(fine), 1e-300):
        raise AccuracyError("smooth DOS quadrature did not converge")
    pref = ((2.0 * math.pi * params_eff.hbar ** 2) ** (-0.5 * dim)
            * 2.0 * math.pi ** (0.5 * dim) / math.gamma(0.5 * dim) ** 2)
    return pref * fine
