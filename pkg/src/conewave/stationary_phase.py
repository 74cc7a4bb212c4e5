"""One-term stationary-phase expansions with explicit L2-based error constants.

For a strictly concave phase psi with interior stationary point p0, the
oscillatory integral ``int U exp(i w psi)`` equals

    sqrt(2 pi) e^{-i pi/4} e^{i w psi(p0)} U(p0) / sqrt(-psi''(p0)) * w^{-1/2}

up to a remainder bounded by ``(C1 ||U'||_2 + C2 ||U||_inf) w^{-delta}`` for
any delta in (1/2, 3/4).  Without a stationary point on the band the integral
is bounded by ``(C3 ||U'||_2 + C4 ||U||_inf) / w``.  All constants are
evaluated exactly from band extrema of psi'' and psi''' so that every bound
is certifiable against the quadrature oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConcavityError, DomainError, StationaryPointInBandError
from .oscillatory import integrate_smooth

__all__ = [
    "Side",
    "PhaseData",
    "ExpansionConstants",
    "phase_from_symbol",
    "phase_diffeo",
    "fresnel_primitive",
    "L_delta",
    "interior_constants",
    "exterior_constants",
    "first_term",
    "expand_with_bound",
]


class Side(enum.Enum):
    LEFT = 1
    RIGHT = 2


@dataclass(frozen=True)
class PhaseData:
    """Strictly concave phase with derivatives on a padded band.

    `p0` is the unique stationary point when present (phase_diffeo and
    first_term require it); None selects the no-stationary-point regime.
    """

    psi: Callable
    dpsi: Callable
    d2psi: Callable
    d3psi: Callable
    padded_band: tuple[float, float]
    p0: float | None = None


@dataclass(frozen=True)
class ExpansionConstants:
    """Error-constant family for the one-term expansion at decay rate delta."""

    delta: float
    L: float
    c1: float
    c2: float
    C1: float
    C2: float


def phase_from_symbol(sym, v: float, padded_band: tuple[float, float]) -> PhaseData:
    """Phase psi(p) = v p - f(p) induced by group-velocity ratio v.

    Strictly concave whenever f is strictly convex; the stationary point is
    (f')^{-1}(v) when v lies in the band's velocity range, else None.
    """
    from .symbols import invert_velocity
    from .errors import RangeError

    a, b = padded_band

    def psi(p):
        return v * np.asarray(p, dtype=float) - np.asarray(sym.f(p))

    def dpsi(p):
        return v - np.asarray(sym.df(p))

    def d2psi(p):
        return -np.asarray(sym.d2f(p))

    def d3psi(p):
        return -np.asarray(sym.d3f(p))

    try:
        p0 = invert_velocity(sym, v, a, b)
    except RangeError:
        p0 = None
    return PhaseData(psi=psi, dpsi=dpsi, d2psi=d2psi, d3psi=d3psi,
                     padded_band=(a, b), p0=p0)


def phase_diffeo(ph: PhaseData, side: Side, p: float) -> tuple[float, float]:
    """The flattening map phi(p) = sqrt(psi(p0) - psi(p)) and its derivative.

    Left covers [p_lo, p0] (phi decreasing through 0), Right covers
    [p0, p_hi].  At p = p0 the derivative uses the closed form
    (-1)^j sqrt(-psi''(p0)/2) rather than a 0/0 quotient.
    """
    if ph.p0 is None:
        raise DomainError("phase has no stationary point")
    a, b = ph.padded_band
    p0 = ph.p0
    if side is Side.LEFT:
        if not (a - 1e-12 <= p <= p0 + 1e-12):
            raise DomainError(f"p={p} outside left interval [{a}, {p0}]")
        sign = -1.0
    else:
        if not (p0 - 1e-12 <= p <= b + 1e-12):
            raise DomainError(f"p={p} outside right interval [{p0}, {b}]")
        sign = 1.0

    if p == p0:
        return 0.0, sign * math.sqrt(-float(ph.d2psi(p0)) / 2.0)
    val = float(ph.psi(p0)) - float(ph.psi(p))
    phi = math.sqrt(max(val, 0.0))
    dphi = -float(ph.dpsi(p)) / (2.0 * phi)
    return phi, dphi


def L_delta(delta: float) -> float:
    """Closed-form envelope constant for the regularized Fresnel primitive."""
    if not 0.5 < delta < 1.0:
        raise DomainError(f"delta must lie in (1/2, 1), got {delta}")
    base = 1.0 / (2.0 * math.sqrt(math.pi)) + math.sqrt(1.0 / (4.0 * math.pi) + 0.5)
    return 0.5 * math.sqrt(math.pi) * base ** (2.0 * delta - 1.0)


def fresnel_primitive(s: float, omega: float, tol: float | None = None) -> complex:
    """Primitive phi(s, w) of exp(-i w s^2) built from a rotated contour.

    Integrates exp(-i w z^2) along the half-line z = s + t e^{-i pi/4},
    where the integrand modulus decays like exp(-w t^2 - sqrt(2) w s t).
    Satisfies d phi / ds = exp(-i w s^2) and
    phi(0, w) = -(sqrt(pi)/2) e^{-i pi/4} w^{-1/2}.
    """
    if s < 0.0:
        raise DomainError(f"s must be nonnegative, got {s}")
    if not omega > 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    # Gaussian decay alone bounds the tail; the cross-term cutoff is
    # regularized so the s -> 0 limit stays at the Gaussian scale.
    t_max = math.sqrt(40.0 / omega) + 40.0 / (math.sqrt(2.0) * omega * s + 40.0 * math.sqrt(omega))
    a = math.sqrt(2.0) * omega * s

    def integrand(t):
        return np.exp(-omega * t ** 2 - a * t * (1.0 + 1.0j))

    if tol is None:
        tol = 1e-15 * max(1.0, omega ** -0.5)
    core = integrate_smooth(integrand, 0.0, t_max, tol)
    return -np.exp(-1j * math.pi / 4.0) * np.exp(-1j * omega * s ** 2) * core


_GRID_SUP = 8192
_SUP_SAFETY = 1.01


def _phase_extrema(ph: PhaseData) -> tuple[float, float, float]:
    """(sup |psi''|, min(-psi''), sup |psi'''|) over the padded band by dense scan."""
    a, b = ph.padded_band
    grid = np.linspace(a, b, 4096)
    d2 = np.asarray(ph.d2psi(grid), dtype=float)
    d3 = np.abs(np.asarray(ph.d3psi(grid), dtype=float))
    min_neg = float(np.min(-d2))
    if min_neg <= 0.0:
        raise ConcavityError(f"phase is not strictly concave on [{a}, {b}]")
    return float(np.max(np.abs(d2))), min_neg, float(np.max(d3))


def interior_constants(
    ph: PhaseData,
    delta: float,
    extrema: tuple[float, float, float] | None = None,
) -> ExpansionConstants:
    """Remainder constants for the stationary-point regime at rate delta.

    `extrema` may supply certified (sup |psi''|, min(-psi''), sup |psi'''|)
    values (e.g. closed forms from a built-in symbol); otherwise a dense
    grid scan over the padded band is used.
    """
    if not 0.5 < delta < 0.75:
        raise DomainError(f"delta must lie in (1/2, 3/4), got {delta}")
    sup_d2, min_neg, sup_d3 = extrema if extrema is not None else _phase_extrema(ph)
    a, b = ph.padded_band
    width = b - a
    L = L_delta(delta)
    c1 = sup_d2 ** (1.5 - delta) * min_neg ** -1.5
    c2 = (
        sup_d2 ** (2.5 - delta) * sup_d3 * min_neg ** -3.5
        + (1.0 / 3.0) * sup_d2 ** (3.5 - delta) * sup_d3 * min_neg ** -4.5
    )
    C1 = (2.0 ** (delta + 1.0) * L / math.sqrt(3.0 - 4.0 * delta)) * width ** (
        (3.0 - 4.0 * delta) / 2.0
    ) * c1
    C2 = (2.0 ** (delta - 1.0) * L / (1.0 - delta)) * width ** (2.0 - 2.0 * delta) * c2
    return ExpansionConstants(delta=delta, L=L, c1=c1, c2=c2, C1=C1, C2=C2)


def exterior_constants(dpsi, p1: float, p2: float) -> tuple[float, float]:
    """Constants (C3, C4) for the no-stationary-point regime on [p1, p2]."""
    d1, d2 = float(dpsi(p1)), float(dpsi(p2))
    if d1 == 0.0 or d2 == 0.0 or (d1 > 0.0) != (d2 > 0.0):
        raise StationaryPointInBandError(
            f"psi' changes sign or vanishes on [{p1}, {p2}]: endpoints {d1}, {d2}"
        )
    m = min(abs(d1), abs(d2))
    return math.sqrt(p2 - p1) / m, 1.0 / m


def first_term(U, ph: PhaseData, omega: float) -> complex:
    """The one-term approximation of the oscillatory integral."""
    if ph.p0 is None:
        raise DomainError("phase has no stationary point")
    if not omega > 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    curv = float(ph.d2psi(ph.p0))
    if curv >= 0.0:
        raise ConcavityError(f"psi''(p0) = {curv} is not negative")
    return (
        math.sqrt(2.0 * math.pi)
        * np.exp(-1j * math.pi / 4.0)
        * np.exp(1j * omega * float(ph.psi(ph.p0)))
        * complex(U(ph.p0))
        / math.sqrt(-curv)
        * omega ** -0.5
    )


def amplitude_norms(U, dU, band: tuple[float, float]) -> tuple[float, float]:
    """(||U'||_L2, ||U||_inf) over the band; the sup carries a 1% safety factor."""
    p1, p2 = band
    n2 = math.sqrt(
        integrate_smooth(lambda p: np.abs(dU(p)) ** 2, p1, p2, 1e-12).real
    )
    grid = np.linspace(p1, p2, _GRID_SUP)
    sup = float(np.max(np.abs(np.asarray(U(grid))))) * _SUP_SAFETY
    return n2, sup


def expand_with_bound(
    U,
    dU,
    ph: PhaseData,
    omega: float,
    delta: float,
    band: tuple[float, float],
    extrema: tuple[float, float, float] | None = None,
) -> tuple[complex, float]:
    """First term plus its certified remainder bound at rate delta."""
    approx = first_term(U, ph, omega)
    consts = interior_constants(ph, delta, extrema=extrema)
    n2, sup = amplitude_norms(U, dU, band)
    bound = (consts.C1 * n2 + consts.C2 * sup) * omega ** -delta
    return approx, bound
