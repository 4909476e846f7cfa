"""One-call simulation of an ion-cavity system driven by the Gaussian pulse."""

from __future__ import annotations

from dataclasses import dataclass

from .core import ModeGrid, PhysicalParams, PulseSpec, default_grid
from .dynamics import EvolutionReport, Method, evolve
from .fidelity import FidelityCurve, XiPair, fidelity_curve, xi_coefficients
from .pulse import SpectralAmplitudes, spectral_amplitudes
from .scattering import PhaseProfile, ScatteringProfile, phase_profile, scattering_profile


@dataclass(frozen=True)
class BranchRun:
    params: PhysicalParams
    pulse: PulseSpec
    grid: ModeGrid
    c0: SpectralAmplitudes
    uncoupled: EvolutionReport
    coupled: EvolutionReport
    xi: XiPair
    curve: FidelityCurve

    @property
    def duration(self) -> float:
        return self.pulse.duration

    def phase_profile(self) -> PhaseProfile:
        return phase_profile(self.uncoupled, self.coupled, self.c0, self.grid, self.duration)

    def scattering_profile(self) -> ScatteringProfile:
        return scattering_profile(self.uncoupled, self.coupled, self.c0, self.grid, self.duration)


def simulate(
    params: PhysicalParams,
    pulse: PulseSpec,
    grid: ModeGrid | None = None,
    method: Method = "exact",
) -> BranchRun:
    """Evolve both ion branches and reduce them to the gate fidelity curve."""
    if grid is None:
        grid = default_grid(params, pulse)
    c0 = spectral_amplitudes(pulse, grid)
    r0 = evolve(c0, params, grid, pulse, "uncoupled", method)
    r1 = evolve(c0, params, grid, pulse, "coupled", method)
    xi = xi_coefficients(r0, r1, c0, grid, pulse.duration)
    return BranchRun(params, pulse, grid, c0, r0, r1, xi, fidelity_curve(xi))
