import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.special import erf

from cavity_cpf import REFERENCE_PARAMS, PulseSpec, default_grid, envelope, make_grid, spectral_amplitudes
from cavity_cpf.errors import DomainError, SpectralCoverageError
from cavity_cpf.pulse import finite_fourier_transform


def test_envelope_shape(ref_pulse):
    T = ref_pulse.duration
    alpha = ref_pulse.normalization
    assert envelope(T / 2, ref_pulse) == alpha
    assert envelope(0.0, ref_pulse) / alpha == pytest.approx(math.exp(-6), rel=1e-14)
    assert math.exp(-6) == pytest.approx(2.4788e-3, rel=1e-4)


def test_envelope_unit_energy(ref_pulse):
    T = ref_pulse.duration
    energy, _ = quad(lambda t: envelope(t, ref_pulse) ** 2, 0, T, epsabs=0, epsrel=1e-12)
    assert energy == pytest.approx(1.0, abs=1e-12)
    # closed form of the normalization integral
    closed = T * math.sqrt(math.pi / 48) * erf(math.sqrt(12))
    assert ref_pulse.normalization == pytest.approx(1 / math.sqrt(closed), rel=1e-12)


def test_envelope_domain(ref_pulse):
    with pytest.raises(DomainError):
        envelope(-1e-9, ref_pulse)
    with pytest.raises(DomainError):
        envelope(ref_pulse.duration * 1.01, ref_pulse)


def test_transform_matches_closed_form(ref_pulse):
    T = ref_pulse.duration
    a = 24 / T**2
    w = np.linspace(-8, 8, 41) * ref_pulse.sigma_omega
    # int_{-T/2}^{T/2} exp(-a u^2 + i w u) du, shifted by exp(i w T/2)
    centered = np.sqrt(np.pi / a) * np.exp(-(w**2) / (4 * a)) * np.real(erf(np.sqrt(a) * T / 2 + 1j * w / (2 * np.sqrt(a))))
    expected = ref_pulse.normalization * np.exp(1j * w * T / 2) * centered
    got = finite_fourier_transform(ref_pulse, w)
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12 * np.max(np.abs(expected)))


def test_spectral_amplitudes_invariants(ref_pulse, ref_grid, ref_c0):
    w = ref_c0.weights
    assert np.sum(w) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(np.abs(ref_c0.values), np.abs(ref_c0.values[::-1]), atol=1e-10)
    # peak at the mode nearest zero (two central modes tie on an even grid)
    assert np.min(np.abs(ref_grid.omegas[np.argmax(w)])) == np.min(np.abs(ref_grid.omegas))
    inside = np.abs(ref_grid.omegas) <= 3 * ref_pulse.sigma_omega
    assert np.sum(w[inside]) > 0.99
    # untruncated Gaussian mass for the same window
    assert erf(3.0) > 0.99


def test_conjugation_symmetry(ref_c0):
    phases = np.angle(ref_c0.values) + np.angle(ref_c0.values[::-1])
    wrapped = np.angle(np.exp(1j * (phases - phases[0])))
    assert np.max(np.abs(wrapped)) < 1e-8


def test_grid_refinement_stability(ref_pulse, ref_grid):
    fine = make_grid(ref_grid.omega_b, 2 * ref_grid.n_modes)
    coarse_density = spectral_amplitudes(ref_pulse, ref_grid).weights / ref_grid.delta_omega
    fine_density = spectral_amplitudes(ref_pulse, fine).weights / fine.delta_omega
    # interpolate the fine log-density (near-parabolic) onto the coarse nodes
    spline = CubicSpline(fine.omegas, np.log(fine_density))
    inside = np.abs(ref_grid.omegas) <= 3 * ref_pulse.sigma_omega
    rel = np.abs(np.exp(spline(ref_grid.omegas[inside])) / coarse_density[inside] - 1)
    assert np.max(rel) < 1e-6


def test_narrow_grid_rejected(ref_pulse):
    grid = make_grid(3 * ref_pulse.sigma_omega, 64)
    with pytest.raises(SpectralCoverageError, match="fraction"):
        spectral_amplitudes(ref_pulse, grid)
    c = spectral_amplitudes(ref_pulse, grid, check_coverage=False)
    assert np.sum(c.weights) == pytest.approx(1.0, abs=1e-12)


def test_wide_grid_quadrature_resolves_fast_carriers():
    pulse = PulseSpec(3e-6)
    grid = default_grid(REFERENCE_PARAMS, pulse, omega_b=3e8)
    c = spectral_amplitudes(pulse, grid)
    assert np.sum(c.weights) == pytest.approx(1.0, abs=1e-12)
    w = np.array([2.9e8])
    T = pulse.duration
    # closed form in arbitrary precision (erf of a large complex argument)
    mpmath.mp.dps = 50
    a = mpmath.mpf(24) / mpmath.mpf(T) ** 2
    wm = mpmath.mpf(w[0])
    centered = mpmath.sqrt(mpmath.pi / a) * mpmath.exp(-wm**2 / (4 * a)) * mpmath.re(
        mpmath.erf(mpmath.sqrt(a) * T / 2 + 1j * wm / (2 * mpmath.sqrt(a)))
    )
    expected = complex(pulse.normalization * mpmath.exp(1j * wm * T / 2) * centered)
    np.testing.assert_allclose(finite_fourier_transform(pulse, w)[0], expected, rtol=1e-9)
