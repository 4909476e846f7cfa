"""Ion-photon gate fidelity, its worst case over inputs, and the loss estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModeGrid, PhysicalParams
from .dynamics import EvolutionReport
from .errors import DomainError
from .pulse import SpectralAmplitudes
from .scattering import check_report, free_propagation


@dataclass(frozen=True)
class XiPair:
    """Branch overlaps with the ideally reflected, freely propagated pulse.

    xi1 = -<ref|c(T)> for the ion in |0> (the sign makes a perfect pi phase
    give +1) and xi2 = <ref|c'(T)> for the ion in |1>.
    """

    xi1: complex
    xi2: complex


def xi_coefficients(
    report0: EvolutionReport,
    report1: EvolutionReport,
    c0: SpectralAmplitudes,
    grid: ModeGrid,
    T: float,
) -> XiPair:
    check_report(report0, c0, grid, T)
    check_report(report1, c0, grid, T)
    if report0.branch != "uncoupled" or report1.branch != "coupled":
        raise DomainError("expected an uncoupled report followed by a coupled report")
    ref = free_propagation(c0, grid, T)
    return XiPair(-complex(np.vdot(ref, report0.final.modes)), complex(np.vdot(ref, report1.final.modes)))


def quadratic_coefficients(xi: XiPair) -> tuple[float, float, float]:
    """(s0, s1, s2) with F(x) = (s2 x^2 + s1 x + s0) / 4."""
    d = xi.xi1 - xi.xi2
    s2 = abs(d) ** 2
    s1 = 2 * ((xi.xi2.conjugate() + 1) * d).real
    s0 = abs(xi.xi2 + 1) ** 2
    return s0, s1, s2


def fidelity_quadratic(xi: XiPair, x: float) -> float:
    """F(x) = |xi1 x + xi2 (1 - x) + 1|^2 / 4 for x = |beta0|^2 in [0, 1]."""
    if not 0 <= x <= 1:
        raise DomainError(f"x = |beta0|^2 must lie in [0, 1], got {x!r}")
    s0, s1, s2 = quadratic_coefficients(xi)
    return 0.25 * (s2 * x * x + s1 * x + s0)


def fidelity_min(xi: XiPair) -> tuple[float, float]:
    """Worst-case fidelity over x in [0, 1]; returns ``(x_min, F_min)``."""
    s0, s1, s2 = quadratic_coefficients(xi)
    if s2 == 0:
        # F is linear in x: the minimum sits at an endpoint
        return (0.0, 0.25 * s0) if s1 >= 0 else (1.0, 0.25 * (s0 + s1))
    vertex = -s1 / (2 * s2)
    if vertex < 0:
        return 0.0, 0.25 * s0
    if vertex > 1:
        return 1.0, 0.25 * (s0 + s1 + s2)
    return vertex, 0.25 * (s0 - s1 * s1 / (4 * s2))


@dataclass(frozen=True)
class FidelityCurve:
    s0: float
    s1: float
    s2: float
    x_min: float
    f_min: float

    def f_of(self, x):
        x = np.asarray(x, dtype=float)
        if np.any((x < 0) | (x > 1)):
            raise DomainError("x = |beta0|^2 must lie in [0, 1]")
        f = 0.25 * (self.s2 * x * x + self.s1 * x + self.s0)
        return float(f) if f.ndim == 0 else f

    __call__ = f_of


def fidelity_curve(xi: XiPair) -> FidelityCurve:
    s0, s1, s2 = quadratic_coefficients(xi)
    x_min, f_min = fidelity_min(xi)
    return FidelityCurve(s0, s1, s2, x_min, f_min)


def overlap_fidelity(
    report0: EvolutionReport,
    report1: EvolutionReport,
    c0: SpectralAmplitudes,
    grid: ModeGrid,
    T: float,
    beta0: complex,
) -> float:
    """Fidelity by direct construction of the ion-photon state vectors.

    The basis is ordered per ion state (|0>, |1>, |e>) as
    [H-photon modes (N), cavity photon, V photon]; the V photon and the
    ion's |e> level carry no mode index.  Cavity and excited-state
    components are orthogonal to the ideal state, so tracing out the cavity
    reduces the fidelity to |<ideal|actual>|^2.
    """
    if abs(beta0) > 1 + 1e-15:
        raise DomainError(f"|beta0| must not exceed 1, got {abs(beta0)!r}")
    check_report(report0, c0, grid, T)
    check_report(report1, c0, grid, T)
    beta0 = complex(beta0)
    beta1 = math.sqrt(max(0.0, 1.0 - abs(beta0) ** 2))
    N = grid.n_modes
    block = N + 2
    # blocks: ion |0>, ion |1>, ion |e> (only the vacuum slot of |e> is used)
    actual = np.zeros(3 * block, dtype=complex)
    ideal = np.zeros(3 * block, dtype=complex)
    h = 1 / math.sqrt(2)
    f0, f1 = report0.final, report1.final
    actual[0:N] = h * beta0 * f0.modes
    actual[N] = h * beta0 * f0.cavity
    actual[N + 1] = h * beta0
    actual[block:block + N] = h * beta1 * f1.modes
    actual[block + N] = h * beta1 * f1.cavity
    actual[block + N + 1] = h * beta1
    actual[2 * block] = h * beta1 * f1.excited
    ref = free_propagation(c0, grid, T)
    ideal[0:N] = -h * beta0 * ref
    ideal[N + 1] = h * beta0
    ideal[block:block + N] = h * beta1 * ref
    ideal[block + N + 1] = h * beta1
    return abs(np.vdot(ideal, actual)) ** 2


def spontaneous_loss(params: PhysicalParams) -> float:
    """Photon-loss probability from spontaneous emission, 1 / [2 (1 + 2 g^2 / (kappa gamma))]."""
    kg = params.kappa * params.gamma
    if kg == 0:
        raise ZeroDivisionError("spontaneous loss needs kappa * gamma > 0")
    return 1.0 / (2.0 * (1.0 + 2.0 * params.g ** 2 / kg))
