"""Gaussian single-photon pulse and its initial free-space mode amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .core import ENVELOPE_EXPONENT, ModeGrid, PulseSpec
from .errors import DomainError, SpectralCoverageError

# rows of the (modes x nodes) quadrature matrix evaluated at once
_CHUNK = 512


@dataclass(frozen=True)
class SpectralAmplitudes:
    """Complex mode amplitudes c_k(0) of a single photon, sum |c_k|^2 = 1."""

    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def __len__(self):
        return len(self.values)


def envelope(t, pulse: PulseSpec):
    """Temporal amplitude f(t) = alpha * exp(-24 (t - T/2)^2 / T^2), 0 <= t <= T."""
    T = pulse.duration
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > T) or not np.all(np.isfinite(t_arr)):
        raise DomainError(f"envelope is defined on [0, {T}] s only")
    value = pulse.normalization * np.exp(-ENVELOPE_EXPONENT * ((t_arr - T / 2) / T) ** 2)
    return float(value) if np.ndim(t) == 0 else value


def spectral_coverage(pulse: PulseSpec, omega_b: float) -> float:
    """Fraction of the (untruncated) Gaussian spectral weight inside |omega| <= omega_b."""
    return float(erf(omega_b / pulse.sigma_omega))


def _quadrature_order(omega_max: float, T: float) -> int:
    # enough Gauss-Legendre nodes to resolve the fastest carrier across [0, T]
    return max(200, int(1.5 * omega_max * T) + 64)


def finite_fourier_transform(pulse: PulseSpec, omegas: np.ndarray) -> np.ndarray:
    """Return int_0^T f(t) exp(i omega t) dt for each omega (Gauss-Legendre)."""
    T = pulse.duration
    omegas = np.asarray(omegas, dtype=float)
    nodes, weights = np.polynomial.legendre.leggauss(_quadrature_order(np.max(np.abs(omegas)), T))
    t = 0.5 * T * (nodes + 1.0)
    fw = envelope(t, pulse) * weights * (0.5 * T)
    out = np.empty(omegas.shape, dtype=complex)
    for start in range(0, len(omegas), _CHUNK):
        block = omegas[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(1j * np.outer(block, t)) @ fw
    return out


def spectral_amplitudes(pulse: PulseSpec, grid: ModeGrid, check_coverage: bool = True) -> SpectralAmplitudes:
    """Initial amplitudes c_k(0) of the pulse on ``grid``.

    c_k(0) is proportional to the finite-window transform of the envelope at
    omega_k, taken with t measured from the start of the pulse, so the input
    field reaching the cavity is f(t) for 0 <= t <= T.  The values carry the
    linear phase exp(i omega_k T/2); the vector is renormalized to unit norm.

    Raises:
        SpectralCoverageError: if ``grid.omega_b < 4 * sigma_omega`` and
            ``check_coverage`` is true.
    """
    if check_coverage and grid.omega_b < 4 * pulse.sigma_omega:
        raise SpectralCoverageError(spectral_coverage(pulse, grid.omega_b), grid.omega_b, pulse.sigma_omega)
    c = finite_fourier_transform(pulse, grid.omegas)
    norm = math.sqrt(float(np.sum(np.abs(c) ** 2)))
    return SpectralAmplitudes(c / norm)
