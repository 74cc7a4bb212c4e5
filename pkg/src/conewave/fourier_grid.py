"""Spectrally accurate synthesis of band-limited functions on uniform grids.

Given spectral data c(p) supported in a compact band, the inverse transform
``(1/2pi) int c(p) exp(ixp) dp`` restricted to a uniform x-grid of period X
equals an FFT of equispaced band samples, up to periodization images located
a full period away.  Because the spectral data is smooth and compactly
supported, the equispaced trapezoid sum is spectrally accurate, so the only
error is aliasing, controlled by choosing X much larger than the window of
interest.
"""

from __future__ import annotations

import numpy as np

__all__ = ["synthesize"]


def synthesize(c, p1: float, p2: float, center: float, period: float, n: int):
    """Sample (1/2pi) int_{p1}^{p2} c(p) e^{ixp} dp on a uniform grid.

    Returns (x, u) with x = center - period/2 + j*period/n, j = 0..n-1.
    Aliasing images sit at distance `period`; callers pick the period so the
    true function is negligible there.
    """
    dp = 2.0 * np.pi / period
    m_lo = int(np.floor(p1 / dp)) - 1
    m_hi = int(np.ceil(p2 / dp)) + 1
    if m_hi - m_lo + 1 >= n:
        raise ValueError(
            f"grid too coarse for the band: {m_hi - m_lo + 1} spectral samples "
            f"but only {n} grid points"
        )
    m = np.arange(m_lo, m_hi + 1)
    p = m * dp
    x_lo = center - 0.5 * period
    coeff = np.asarray(c(p), dtype=complex) * (dp / (2.0 * np.pi)) * np.exp(1j * x_lo * p)
    spec = np.zeros(n, dtype=complex)
    np.add.at(spec, m % n, coeff)
    u = np.fft.ifft(spec) * n
    x = x_lo + (period / n) * np.arange(n)
    return x, u
