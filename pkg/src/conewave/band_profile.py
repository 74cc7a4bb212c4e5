"""Frequency-band initial data: compactly supported spectral amplitudes.

The default datum is the standard smooth bump
``g(p) = exp(-1/(1-q^2))`` with ``q`` the band-normalized coordinate, scaled
so the spatial L2 norm is one.  Modulated variants (spatial shift, dispersive
chirp, quadratic chirp) multiply by a unimodular factor and therefore share
the same normalization constant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .errors import AccuracyError, DomainError
from .fourier_grid import synthesize
from .oscillatory import integrate_smooth
from .symbols import Symbol

__all__ = ["Shape", "BandProfile", "SpectralMoments", "make_profile",
           "spectral_moments", "l1_norm_u0"]


class Shape(enum.Enum):
    BUMP = "bump"
    SHIFTED_BUMP = "shifted_bump"
    CHIRPED_BUMP = "chirped_bump"
    QUADRATIC_CHIRP = "quadratic_chirp"


@dataclass
class BandProfile:
    """Spectral amplitude F u0 supported in [p1, p2], normalized to ||u0||_2 = 1.

    `amp` and `damp` are vectorized maps p -> complex; both vanish
    identically outside the band.  The L1 norm of u0 is cached after its
    first (expensive) computation.
    """

    p1: float
    p2: float
    amp: Callable
    damp: Callable
    shape: Shape
    param: float | None = None
    _l1_cache: float | None = field(default=None, repr=False, compare=False)

    @property
    def band(self) -> tuple[float, float]:
        return self.p1, self.p2


@dataclass(frozen=True)
class SpectralMoments:
    """Band-side moments feeding the closed-form mean/variance formulas."""

    m_fp: float       # mean group velocity
    m_fp2: float      # second moment of the group velocity
    v_fp: float       # group-velocity variance
    cross_im: float   # Im int f'(p) amp(p) conj(damp(p)) dp
    m1_u0: float      # spatial mean of |u0|^2
    m2_u0: float      # spatial second moment
    v_u0: float       # spatial variance


def _bump_pair(p1: float, p2: float):
    """Unnormalized bump g and its derivative on [p1, p2], vectorized."""
    width = p2 - p1

    def g(p):
        p = np.asarray(p, dtype=float)
        q = (2.0 * p - p1 - p2) / width
        out = np.zeros_like(q)
        m = np.abs(q) < 1.0
        with np.errstate(over="ignore"):
            out[m] = np.exp(-1.0 / (1.0 - q[m] ** 2))
        return out

    def dg(p):
        p = np.asarray(p, dtype=float)
        q = (2.0 * p - p1 - p2) / width
        out = np.zeros_like(q)
        m = np.abs(q) < 1.0
        qm = q[m]
        with np.errstate(over="ignore"):
            out[m] = np.exp(-1.0 / (1.0 - qm ** 2)) * (-2.0 * qm / (1.0 - qm ** 2) ** 2) * (2.0 / width)
        return out

    return g, dg


def make_profile(
    p1: float,
    p2: float,
    shape: Shape = Shape.BUMP,
    *,
    xc: float = 0.0,
    tau: float = 0.0,
    beta: float = 0.0,
    sym: Symbol | None = None,
) -> BandProfile:
    """Build a normalized band profile of the requested shape.

    ShiftedBump translates the datum to xc, ChirpedBump applies the phase
    exp(+i tau f(p)) of the given symbol, QuadraticChirp applies
    exp(i beta p^2).
    """
    if not p1 < p2:
        raise DomainError(f"band endpoints must satisfy p1 < p2, got [{p1}, {p2}]")
    g, dg = _bump_pair(p1, p2)
    norm_sq = integrate_smooth(lambda p: g(p) ** 2, p1, p2, tol=1e-13).real
    scale = np.sqrt(2.0 * np.pi / norm_sq)

    if shape is Shape.BUMP:
        def amp(p):
            return scale * g(p) + 0.0j

        def damp(p):
            return scale * dg(p) + 0.0j

        param = None
    elif shape is Shape.SHIFTED_BUMP:
        def amp(p):
            p = np.asarray(p, dtype=float)
            return scale * g(p) * np.exp(-1j * xc * p)

        def damp(p):
            p = np.asarray(p, dtype=float)
            return scale * (dg(p) - 1j * xc * g(p)) * np.exp(-1j * xc * p)

        param = xc
    elif shape is Shape.CHIRPED_BUMP:
        if sym is None:
            raise DomainError("ChirpedBump needs a Symbol for its phase")

        def amp(p):
            return scale * g(p) * np.exp(1j * tau * np.asarray(sym.f(p)))

        def damp(p):
            return scale * (dg(p) + 1j * tau * np.asarray(sym.df(p)) * g(p)) * np.exp(
                1j * tau * np.asarray(sym.f(p))
            )

        param = tau
    elif shape is Shape.QUADRATIC_CHIRP:
        def amp(p):
            p = np.asarray(p, dtype=float)
            return scale * g(p) * np.exp(1j * beta * p ** 2)

        def damp(p):
            p = np.asarray(p, dtype=float)
            return scale * (dg(p) + 2j * beta * p * g(p)) * np.exp(1j * beta * p ** 2)

        param = beta
    else:  # pragma: no cover
        raise DomainError(f"unknown shape {shape}")

    return BandProfile(p1=p1, p2=p2, amp=amp, damp=damp, shape=shape, param=param)


def spectral_moments(prof: BandProfile, sym: Symbol, tol: float = 1e-11) -> SpectralMoments:
    """All band-side moments by adaptive quadrature over [p1, p2].

    The spatial mean and second moment come from the Fourier-side identities
    M1 = Re[(i/2pi) int damp conj(amp)] and M2 = (1/2pi) ||damp||^2.
    """
    p1, p2 = prof.band
    inv2pi = 1.0 / (2.0 * np.pi)

    def density(p):
        return np.abs(prof.amp(p)) ** 2

    m_fp = inv2pi * integrate_smooth(lambda p: sym.df(p) * density(p), p1, p2, tol).real
    m_fp2 = inv2pi * integrate_smooth(lambda p: sym.df(p) ** 2 * density(p), p1, p2, tol).real
    cross = integrate_smooth(
        lambda p: sym.df(p) * prof.amp(p) * np.conj(prof.damp(p)), p1, p2, tol
    )
    m1 = (1j * inv2pi) * integrate_smooth(
        lambda p: prof.damp(p) * np.conj(prof.amp(p)), p1, p2, tol
    )
    m2 = inv2pi * integrate_smooth(lambda p: np.abs(prof.damp(p)) ** 2, p1, p2, tol).real
    m1_u0 = float(m1.real)
    return SpectralMoments(
        m_fp=m_fp,
        m_fp2=m_fp2,
        v_fp=m_fp2 - m_fp ** 2,
        cross_im=float(cross.imag),
        m1_u0=m1_u0,
        m2_u0=m2,
        v_u0=m2 - m1_u0 ** 2,
    )


_L1_MAX_N = 2 ** 20
_L1_TAIL_TOL = 1e-8


def l1_norm_u0(prof: BandProfile) -> float:
    """||u0||_L1 by synthesizing u0 on a widening grid until the tail settles.

    The result is cached on the profile.  Raises AccuracyError if the
    doubling cap (2^20 points) is reached before convergence.
    """
    if prof._l1_cache is not None:
        return prof._l1_cache

    # Crude center: the spatial mean from the Fourier-side identity.
    m1 = (1j / (2.0 * np.pi)) * integrate_smooth(
        lambda p: prof.damp(p) * np.conj(prof.amp(p)), prof.p1, prof.p2, 1e-11
    )
    center = float(m1.real)

    half = 128.0
    dx = 0.01
    prev = None
    while True:
        n = int(2 ** np.ceil(np.log2(2.0 * half / dx)))
        if n > _L1_MAX_N:
            raise AccuracyError("L1 norm did not converge within the domain-doubling cap")
        x, u = synthesize(prof.amp, prof.p1, prof.p2, center, 2.0 * half, n)
        mod = np.abs(u)
        total = simpson(mod, x=x)
        core = np.abs(x - center) <= 0.5 * half
        tail = total - simpson(mod[core], x=x[core])
        if prev is not None and abs(total - prev) < _L1_TAIL_TOL and tail < _L1_TAIL_TOL:
            prof._l1_cache = float(total)
            return prof._l1_cache
        prev = total
        half *= 2.0
