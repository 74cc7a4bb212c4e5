"""Exact band-limited wave packets, their space-time cones, the shifted
first-term approximation, and the explicit remainder machinery.

The solution is always evaluated by the quadrature oracle; the first term
``H(t, x)`` is a closed-form expression supported in the cone whose slopes
are the group velocities of the padded band.  The cone origin minimizing the
remainder bound is the time of minimal variance paired with the mean
position at that time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .band_profile import BandProfile, SpectralMoments, l1_norm_u0, spectral_moments
from .errors import AccuracyError, DegenerateBandError, DomainError
from .oscillatory import OscillatoryJob, oscillatory_integral
from .stationary_phase import L_delta
from .symbols import Symbol, band_extrema, invert_velocity

__all__ = [
    "ConeSpec",
    "ConeConstants",
    "OriginResult",
    "Region",
    "make_cone",
    "evaluate_solution",
    "classify_point",
    "first_term_H",
    "cone_constants",
    "shift_norm_g",
    "remainder_bound",
    "optimal_origin",
    "argmin_variance_scan",
    "shifted_lp_check",
]


class Region(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    SLICE = "slice"


@dataclass(frozen=True)
class ConeSpec:
    """Space-time cone data: band, padded band, and origin (t0, x0)."""

    band: tuple[float, float]
    padded: tuple[float, float]
    origin: tuple[float, float]

    def __post_init__(self):
        p1, p2 = self.band
        q1, q2 = self.padded
        if not (q1 < p1 < p2 < q2):
            raise DomainError(
                f"padded band {self.padded} must strictly contain band {self.band}"
            )


@dataclass(frozen=True)
class ConeConstants:
    """Remainder constants for the cone expansion: interior (C5, C6) at decay
    rate delta, exterior (C7, C8) at rate one."""

    delta: float
    C5: float
    C6: float
    C7: float
    C8: float


@dataclass(frozen=True)
class OriginResult:
    t_star: float
    x_star: float
    min_variance: float
    method: str  # "closed_form" or "scan"


def make_cone(
    band: tuple[float, float],
    origin: tuple[float, float] = (0.0, 0.0),
    padding_fraction: float = 0.1,
) -> ConeSpec:
    """Cone over `band` padded symmetrically by a fraction of the band width."""
    p1, p2 = band
    pad = padding_fraction * (p2 - p1)
    if not pad > 0.0:
        raise DomainError(f"padding fraction must be positive, got {padding_fraction}")
    return ConeSpec(band=band, padded=(p1 - pad, p2 + pad), origin=origin)


def evaluate_solution(
    sym: Symbol,
    prof: BandProfile,
    t: float,
    x: float,
    tol: float = 1e-10,
    origin: tuple[float, float] | None = None,
) -> complex:
    """Oracle evaluation of the wave packet at one space-time point.

    With an origin (t0, x0) and t != t0, the integral is rewritten with the
    shifted phase psi(p) = ((x-x0)/(t-t0)) p - f(p) and large parameter
    |t - t0|; negative elapsed time is handled by conjugation symmetry.
    Without an origin the raw phase x p - t f(p) is used with unit parameter.
    """
    p1, p2 = prof.band
    inv2pi = 1.0 / (2.0 * math.pi)

    if origin is not None and t != origin[0]:
        t0, x0 = origin
        ratio = (x - x0) / (t - t0)

        def U(p):
            return inv2pi * prof.amp(p) * np.exp(
                -1j * t0 * np.asarray(sym.f(p)) + 1j * x0 * np.asarray(p, dtype=float)
            )

        def psi(p):
            return ratio * np.asarray(p, dtype=float) - np.asarray(sym.f(p))

        def dpsi(p):
            return ratio - np.asarray(sym.df(p))

        omega = abs(t - t0)
        if t > t0:
            job = OscillatoryJob(U=U, psi=psi, dpsi=dpsi, omega=omega, band=(p1, p2), tol=tol)
            return oscillatory_integral(job)
        job = OscillatoryJob(
            U=lambda p: np.conj(U(p)), psi=psi, dpsi=dpsi, omega=omega, band=(p1, p2), tol=tol
        )
        return complex(np.conj(oscillatory_integral(job)))

    def U(p):
        return inv2pi * prof.amp(p)

    def psi(p):
        return x * np.asarray(p, dtype=float) - t * np.asarray(sym.f(p))

    def dpsi(p):
        return x - t * np.asarray(sym.df(p))

    job = OscillatoryJob(U=U, psi=psi, dpsi=dpsi, omega=1.0, band=(p1, p2), tol=tol)
    return oscillatory_integral(job)


def classify_point(
    sym: Symbol, cone: ConeSpec, t: float, x: float
) -> tuple[Region, float | None]:
    """Locate a space-time point relative to the (closed) cone.

    Inside points carry the stationary frequency p0 with
    f'(p0) = (x - x0)/(t - t0); the time slice t = t0 is its own region.
    """
    t0, x0 = cone.origin
    if t == t0:
        return Region.SLICE, None
    q1, q2 = cone.padded
    ratio = (x - x0) / (t - t0)
    v1, v2 = float(sym.df(q1)), float(sym.df(q2))
    if v1 <= ratio <= v2:
        return Region.INSIDE, invert_velocity(sym, ratio, q1, q2)
    return Region.OUTSIDE, None


def first_term_H(sym: Symbol, prof: BandProfile, cone: ConeSpec, t: float, x: float) -> complex:
    """The cone-supported one-term approximation H(t, x); zero outside."""
    region, p0 = classify_point(sym, cone, t, x)
    if region is Region.SLICE:
        raise DomainError("first term is undefined on the time slice t = t0")
    if region is Region.OUTSIDE:
        return 0.0 + 0.0j
    t0, _ = cone.origin
    curv = float(sym.d2f(p0))
    return (
        (2.0 * math.pi) ** -0.5
        * np.exp(-1j * math.copysign(math.pi / 4.0, t - t0))
        * np.exp(-1j * t * float(sym.f(p0)) + 1j * x * p0)
        * complex(prof.amp(p0))
        / math.sqrt(curv)
        * abs(t - t0) ** -0.5
    )


def cone_constants(sym: Symbol, cone: ConeSpec, delta: float) -> ConeConstants:
    """Interior/exterior remainder constants from certified band extrema."""
    if not 0.5 < delta < 0.75:
        raise DomainError(f"delta must lie in (1/2, 3/4), got {delta}")
    p1, p2 = cone.band
    q1, q2 = cone.padded
    sup_d2, inf_d2, sup_d3 = band_extrema(sym, q1, q2)
    width = q2 - q1
    L = L_delta(delta)
    c5 = sup_d2 ** (1.5 - delta) * inf_d2 ** -1.5
    c6 = (
        sup_d2 ** (2.5 - delta) * sup_d3 * inf_d2 ** -3.5
        + (1.0 / 3.0) * sup_d2 ** (3.5 - delta) * sup_d3 * inf_d2 ** -4.5
    )
    C5 = (
        2.0 ** (delta + 0.5)
        * L
        / (math.sqrt(math.pi) * math.sqrt(3.0 - 4.0 * delta))
        * width ** ((3.0 - 4.0 * delta) / 2.0)
        * c5
    )
    C6 = 2.0 ** (delta - 2.0) * L / (math.pi * (1.0 - delta)) * width ** (2.0 - 2.0 * delta) * c6
    gap = min(float(sym.df(p1)) - float(sym.df(q1)), float(sym.df(q2)) - float(sym.df(p2)))
    if not gap > 0.0:
        raise DomainError(f"velocity gap between band and padded band is {gap} <= 0")
    C7 = (2.0 * math.pi) ** -0.5 * math.sqrt(p2 - p1) / gap
    C8 = 1.0 / (2.0 * math.pi * gap)
    return ConeConstants(delta=delta, C5=C5, C6=C6, C7=C7, C8=C8)


def shift_norm_g(sym: Symbol, prof: BandProfile, t0: float, x0: float) -> float:
    """||(. - x0) u(t0, .)||_L2 via the band-side derivative identity."""
    from .oscillatory import integrate_smooth

    def integrand(p):
        p = np.asarray(p, dtype=float)
        shift = 1j * (x0 - t0 * np.asarray(sym.df(p)))
        return np.abs(prof.damp(p) + shift * prof.amp(p)) ** 2

    val = integrate_smooth(integrand, prof.p1, prof.p2, 1e-12).real
    return math.sqrt(val / (2.0 * math.pi))


def remainder_bound(
    constants: ConeConstants,
    g_value: float,
    l1: float,
    t: float,
    t0: float,
    regime: Region,
) -> float:
    """Certified bound for |u - H| (inside) or |u| (outside) at time t."""
    if t == t0:
        raise DomainError("remainder bound is undefined on the time slice t = t0")
    gap = abs(t - t0)
    if regime is Region.INSIDE:
        return (constants.C5 * g_value + constants.C6 * l1) * gap ** -constants.delta
    if regime is Region.OUTSIDE:
        return (constants.C7 * g_value + constants.C8 * l1) / gap
    raise DomainError("no bound applies on the time slice")


_V_FP_TOL = 1e-12


def optimal_origin(
    sym: Symbol, prof: BandProfile, moments: SpectralMoments | None = None
) -> OriginResult:
    """Closed-form error-minimizing cone origin (t*, x*).

    t* is the vertex of the (exactly quadratic) variance-in-time polynomial;
    x* is the mean position at t*.
    """
    sm = moments if moments is not None else spectral_moments(prof, sym)
    if sm.v_fp <= _V_FP_TOL:
        raise DegenerateBandError(f"group-velocity variance {sm.v_fp} is degenerate")
    t_star = (-sm.cross_im / (2.0 * math.pi) + sm.m_fp * sm.m1_u0) / sm.v_fp
    x_star = sm.m_fp * t_star + sm.m1_u0
    min_var = sm.v_u0 - sm.v_fp * t_star ** 2
    return OriginResult(t_star=t_star, x_star=x_star, min_variance=min_var, method="closed_form")


def argmin_variance_scan(
    sym: Symbol,
    prof: BandProfile,
    tau_lo: float,
    tau_hi: float,
    verify: bool = False,
    verify_tol: float = 1e-5,
) -> OriginResult:
    """Variance-minimizing time by a three-point quadratic fit.

    The variance is an exact degree-two polynomial in time, so three samples
    determine the vertex.  With `verify=True` a golden-section search on
    x-space quadrature variances must agree with the vertex within
    `verify_tol`, otherwise AccuracyError is raised.
    """
    from .moments import golden_variance_scan, solution_moments_closed

    if not tau_lo < tau_hi:
        raise DomainError(f"need tau_lo < tau_hi, got [{tau_lo}, {tau_hi}]")
    taus = np.array([tau_lo, 0.5 * (tau_lo + tau_hi), tau_hi])
    vs = np.array([solution_moments_closed(sym, prof, float(tau)).v for tau in taus])
    a, b, c = np.polyfit(taus, vs, 2)
    if not a > 0.0:
        raise DegenerateBandError(f"fitted variance polynomial has leading coefficient {a}")
    t_star = float(-b / (2.0 * a))
    min_var = float(np.polyval([a, b, c], t_star))
    x_star = float(solution_moments_closed(sym, prof, t_star).m1)
    if verify:
        t_gold = golden_variance_scan(sym, prof, tau_lo, tau_hi)
        if abs(t_gold - t_star) > verify_tol:
            raise AccuracyError(
                f"golden-section scan t*={t_gold} disagrees with fit t*={t_star}"
            )
    return OriginResult(t_star=t_star, x_star=x_star, min_variance=min_var, method="scan")


def shifted_lp_check(
    sym: Symbol, prof: BandProfile, t: float, p_exp: float
) -> tuple[float, float]:
    """Shifted-decay norm comparison for the free-particle symbol.

    Returns (lhs, rhs) where the claim under test is lhs <= rhs with
    rhs = (4 pi)^(-1/2 + 1/p) ||u(t*)||_{p'} |t - t*|^(-1/2 + 1/p).
    p_exp is 2 or math.inf.
    """
    from .moments import l1_at_time, solution_field, spatial_moments

    if sym.kind.value != "free_schrodinger":
        raise DomainError("shifted Lp check applies to the free-particle symbol only")
    origin = optimal_origin(sym, prof)
    t_star = origin.t_star
    if t == t_star:
        raise DomainError("shifted Lp check is undefined at t = t*")

    if p_exp == 2:
        field = solution_field(sym, prof, t)
        lhs = math.sqrt(spatial_moments(field).mass)
        return lhs, 1.0
    if p_exp == math.inf:
        field = solution_field(sym, prof, t)
        lhs = float(np.max(np.abs(field.values)))
        rhs = (4.0 * math.pi) ** -0.5 * l1_at_time(sym, prof, t_star) * abs(t - t_star) ** -0.5
        return lhs, rhs
    raise DomainError(f"p exponent must be 2 or infinity, got {p_exp}")
