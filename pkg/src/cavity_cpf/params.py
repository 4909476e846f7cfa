"""Experimental estimates: coupling rate, cavity decay, operation count."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import CONSTANTS, PhysicalConstants, PulseSpec
from .errors import DomainError

#: Coupling rate quoted for the Eu3+ / microsphere system (read as rad/s).
CLAIMED_G0 = 1.0e9
_C_NM_TO_C_M = 1e-9


def _positive(**values):
    for name, value in values.items():
        if value is None or not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be a positive number, got {value!r}")


@dataclass(frozen=True)
class CavitySpec:
    """Whispering-gallery cavity: wavelength (m), quality factor, mode volume (m^3)."""

    wavelength: float
    quality: float
    mode_volume: float

    def __post_init__(self):
        _positive(wavelength=self.wavelength, quality=self.quality, mode_volume=self.mode_volume)


@dataclass(frozen=True)
class IonSpec:
    """Ion transition dipole (C m) and ground-state coherence time (s)."""

    dipole: float
    coherence_time: float

    def __post_init__(self):
        _positive(dipole=self.dipole, coherence_time=self.coherence_time)

    @classmethod
    def from_c_nm(cls, dipole_c_nm: float, coherence_time: float) -> "IonSpec":
        """Build from a dipole given in C nm (as in "7.5e-19 C nm")."""
        _positive(dipole=dipole_c_nm)
        return cls(dipole_c_nm * _C_NM_TO_C_M, coherence_time)


REFERENCE_CAVITY = CavitySpec(wavelength=579.879e-9, quality=5e7, mode_volume=300e-18)
REFERENCE_ION = IonSpec.from_c_nm(7.5e-19, coherence_time=82e-3)


class CouplingRate(NamedTuple):
    value: float  # rad/s from the formula
    claimed: float  # the quoted 1.0e9 rad/s
    ratio: float  # value / claimed


def cavity_frequency(cavity: CavitySpec, constants: PhysicalConstants = CONSTANTS) -> float:
    return 2 * math.pi * constants.c_light / cavity.wavelength


def coupling_rate(ion: IonSpec, cavity: CavitySpec, constants: PhysicalConstants = CONSTANTS) -> CouplingRate:
    """g0 = sqrt(mu^2 w_c / (2 hbar eps0 V_m)), reported alongside the quoted value.

    The formula evaluated with the quoted inputs does not reproduce the quoted
    1.0e9 rad/s, so the ratio is returned instead of being asserted.
    """
    wc = cavity_frequency(cavity, constants)
    g0 = math.sqrt(ion.dipole ** 2 * wc / (2 * constants.hbar * constants.eps0 * cavity.mode_volume))
    return CouplingRate(g0, CLAIMED_G0, g0 / CLAIMED_G0)


def cavity_decay(cavity: CavitySpec, constants: PhysicalConstants = CONSTANTS) -> float:
    """kappa = w0 / 2Q in rad/s."""
    return cavity_frequency(cavity, constants) / (2 * cavity.quality)


def operation_count(ion: IonSpec, pulse: PulseSpec) -> float:
    """Number of gates within the coherence time, tau_coh / 2T."""
    return ion.coherence_time / (2 * pulse.duration)
