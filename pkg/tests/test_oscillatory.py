import numpy as np
import pytest

from conewave.errors import AccuracyError, DomainError
from conewave.fourier_grid import synthesize
from conewave.oscillatory import OscillatoryJob, integrate_smooth, oscillatory_integral


def test_integrate_smooth_polynomial():
    val = integrate_smooth(lambda p: 3.0 * p ** 2, 0.0, 2.0)
    assert val.real == pytest.approx(8.0, rel=1e-13)


def test_integrate_smooth_complex_exponential():
    val = integrate_smooth(lambda p: np.exp(1j * p), 0.0, np.pi, 1e-13)
    assert val == pytest.approx(2j, abs=1e-12)


def test_integrate_smooth_bad_interval():
    with pytest.raises(DomainError):
        integrate_smooth(lambda p: p, 1.0, 1.0)


def _linear_job(omega, tol=1e-12):
    return OscillatoryJob(
        U=lambda p: np.ones_like(np.asarray(p, dtype=float)),
        psi=lambda p: np.asarray(p, dtype=float),
        dpsi=lambda p: np.ones_like(np.asarray(p, dtype=float)),
        omega=omega,
        band=(0.0, 1.0),
        tol=tol,
    )


@pytest.mark.parametrize("omega", [1.0, 50.0, 1.0e3, 1.0e4])
def test_oscillatory_linear_phase_closed_form(omega):
    # int_0^1 e^{i w p} dp = (e^{iw} - 1)/(iw)
    exact = (np.exp(1j * omega) - 1.0) / (1j * omega)
    assert oscillatory_integral(_linear_job(omega)) == pytest.approx(exact, abs=1e-11)


def test_oscillatory_zero_omega_is_plain_integral():
    job = OscillatoryJob(
        U=lambda p: np.asarray(p, dtype=float) ** 2,
        psi=lambda p: np.sin(p),
        dpsi=lambda p: np.cos(p),
        omega=0.0,
        band=(0.0, 1.0),
    )
    assert oscillatory_integral(job) == pytest.approx(1.0 / 3.0, rel=1e-10)


def test_oscillatory_quadratic_phase_vs_adaptive():
    # Independent route: brute-force adaptive quadrature of the full integrand.
    omega = 30.0
    direct = integrate_smooth(lambda p: np.exp(1j * omega * p ** 2) * np.cos(p), -1.0, 1.0, 1e-12)
    job = OscillatoryJob(
        U=np.cos,
        psi=lambda p: np.asarray(p, dtype=float) ** 2,
        dpsi=lambda p: 2.0 * np.asarray(p, dtype=float),
        omega=omega,
        band=(-1.0, 1.0),
    )
    assert oscillatory_integral(job) == pytest.approx(direct, abs=1e-10)


def test_job_validation():
    with pytest.raises(DomainError):
        OscillatoryJob(U=None, psi=None, dpsi=None, omega=1.0, band=(2.0, 1.0))
    with pytest.raises(DomainError):
        _linear_job(-1.0)
    with pytest.raises(DomainError):
        _linear_job(1.0, tol=0.0)


def test_adaptive_depth_cap():
    # |x|^{0.1} has an endpoint singularity in every derivative; an absurd
    # tolerance forces the recursion to the cap.
    with pytest.raises(AccuracyError):
        integrate_smooth(lambda p: np.abs(p) ** 0.1, 0.0, 1.0, 1e-300)


def test_synthesize_matches_direct_quadrature():
    def c(p):
        p = np.asarray(p, dtype=float)
        out = np.zeros_like(p, dtype=complex)
        m = (p > 1.0) & (p < 2.0)
        out[m] = np.exp(-1.0 / ((p[m] - 1.0) * (2.0 - p[m])))
        return out

    x, u = synthesize(c, 1.0, 2.0, 0.0, 400.0, 2 ** 14)
    for i in (100, 2 ** 13, 2 ** 13 + 77):
        direct = integrate_smooth(lambda p: c(p) * np.exp(1j * x[i] * p), 1.0, 2.0, 1e-13)
        assert u[i] == pytest.approx(direct / (2.0 * np.pi), abs=1e-10)


def test_synthesize_rejects_coarse_grid():
    with pytest.raises(ValueError):
        synthesize(lambda p: np.ones_like(p), 0.0, 1.0, 0.0, 1000.0, 64)
