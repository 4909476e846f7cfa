"""Per-mode reflection of the pulse, from the dynamics and from input-output theory."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModeGrid, PhysicalParams
from .dynamics import EvolutionReport
from .errors import DomainError
from .pulse import SpectralAmplitudes

#: Modes carrying less than this fraction of the peak weight are masked.
MASK_THRESHOLD = 1e-6


def free_propagation(c0: SpectralAmplitudes, grid: ModeGrid, T: float) -> np.ndarray:
    """Amplitudes exp(-i w_k T) c_k(0) of the pulse after propagating in vacuum."""
    return np.exp(-1j * grid.omegas * T) * c0.values


def valid_mask(c0: SpectralAmplitudes, threshold: float = MASK_THRESHOLD) -> np.ndarray:
    w = c0.weights
    return (w > 0) & (w >= threshold * np.max(w))


def wrap_angle(theta):
    """Reduce angles to (-pi, pi]."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), 2 * np.pi)
    return wrapped


def check_report(report: EvolutionReport, c0: SpectralAmplitudes, grid: ModeGrid, T: float) -> None:
    if len(report.final.modes) != grid.n_modes or len(c0) != grid.n_modes:
        raise DomainError("evolution report, amplitudes and grid have different mode counts")
    if report.duration != T:
        raise DomainError(f"report was evolved for {report.duration} s, not {T} s")


@dataclass(frozen=True)
class PhaseProfile:
    """Reflection phase per mode for each ion state, relative to free propagation."""

    omegas: np.ndarray
    dtheta0: np.ndarray
    dtheta1: np.ndarray
    weights: np.ndarray


def phase_profile(
    report0: EvolutionReport,
    report1: EvolutionReport,
    c0: SpectralAmplitudes,
    grid: ModeGrid,
    T: float,
) -> PhaseProfile:
    """dtheta = arg c_k(T) - arg[exp(-i w_k T) c_k(0)] for both branches, in (-pi, pi]."""
    check_report(report0, c0, grid, T)
    check_report(report1, c0, grid, T)
    ref = free_propagation(c0, grid, T)
    with np.errstate(invalid="ignore", divide="ignore"):
        d0 = np.angle(report0.final.modes / ref)
        d1 = np.angle(report1.final.modes / ref)
    return PhaseProfile(grid.omegas.copy(), wrap_angle(d0), wrap_angle(d1), c0.weights)


def extract_reflection(report: EvolutionReport, c0: SpectralAmplitudes, grid: ModeGrid, T: float) -> np.ndarray:
    """r(w_k) = c_k(T) exp(+i w_k T) / c_k(0); NaN on masked modes."""
    check_report(report, c0, grid, T)
    mask = valid_mask(c0)
    if not np.any(mask):
        raise DomainError("every mode is masked; no reflection can be extracted")
    r = np.full(grid.n_modes, np.nan + 0j)
    r[mask] = report.final.modes[mask] * np.exp(1j * grid.omegas[mask] * T) / c0.values[mask]
    return r


def _band_shift(omega, kappa: float, omega_b: float):
    # principal-value part of the cavity self-energy for a flat band [-omega_b, omega_b]
    return (kappa / (2 * math.pi)) * np.log((omega_b + omega) / (omega_b - omega))


def analytic_reflection(omega, params: PhysicalParams, coupled: bool, bandwidth: float | None = None):
    """Reflection coefficient of a single-sided cavity from input-output theory.

        r(w) = 1 - kappa / [kappa/2 - i w + g_eff^2 / (gamma/2 - i (w - delta))]

    with g_eff = g when ``coupled`` (ion in |1>) and 0 otherwise.

    With ``bandwidth`` set, the cavity couples only to the flat band
    |w| < bandwidth and the denominator gains the frequency shift
    i (kappa / 2 pi) ln[(bandwidth + w) / (bandwidth - w)].  This is the
    continuum limit of a finite mode grid.
    """
    omega = np.asarray(omega, dtype=float)
    kappa = params.kappa
    if kappa == 0:
        r = np.ones(omega.shape, dtype=complex)
        return complex(r) if r.ndim == 0 else r
    denom = kappa / 2 - 1j * omega
    if bandwidth is not None:
        if np.any(np.abs(omega) >= bandwidth):
            raise DomainError("frequencies must lie strictly inside the band")
        denom = denom + 1j * _band_shift(omega, kappa, bandwidth)
    if coupled and params.g > 0:
        # multiplied through by the atomic term, so a lossless atom on
        # resonance (atom = 0) cleanly gives r = 1
        atom = params.gamma / 2 - 1j * (omega - params.delta)
        r = 1 - kappa * atom / (denom * atom + params.g ** 2)
    else:
        r = 1 - kappa / denom
    return complex(r) if r.ndim == 0 else r


@dataclass(frozen=True)
class ScatteringProfile:
    """Frequency-diagonal summary of one ion-cavity system.

    ``r0``/``r1`` hold the reflection for the ion in |0>/|1>; both are zero on
    masked modes, so amplitude outside the pulse band is dropped.
    """

    omegas: np.ndarray
    r0: np.ndarray
    r1: np.ndarray
    valid_mask: np.ndarray

    @classmethod
    def ideal(cls, grid: ModeGrid) -> "ScatteringProfile":
        """Perfect conditional phase flip: r0 = -1, r1 = +1 on every mode."""
        n = grid.n_modes
        return cls(grid.omegas.copy(), -np.ones(n, complex), np.ones(n, complex), np.ones(n, bool))

    @classmethod
    def analytic(cls, grid: ModeGrid, params: PhysicalParams, c0: SpectralAmplitudes | None = None) -> "ScatteringProfile":
        mask = valid_mask(c0) if c0 is not None else np.ones(grid.n_modes, bool)
        r0 = np.where(mask, analytic_reflection(grid.omegas, params, False), 0)
        r1 = np.where(mask, analytic_reflection(grid.omegas, params, True), 0)
        return cls(grid.omegas.copy(), r0, r1, mask)


def scattering_profile(
    report0: EvolutionReport,
    report1: EvolutionReport,
    c0: SpectralAmplitudes,
    grid: ModeGrid,
    T: float,
) -> ScatteringProfile:
    """Per-mode reflections extracted from the two branch evolutions."""
    r0 = extract_reflection(report0, c0, grid, T)
    r1 = extract_reflection(report1, c0, grid, T)
    mask = ~np.isnan(r0)
    return ScatteringProfile(grid.omegas.copy(), np.where(mask, r0, 0), np.where(mask, r1, 0), mask)
