"""Physical constants, rate parameters, pulse and mode-grid types.

All rates are angular frequencies in rad/s.  Laboratory figures quoted as
"MHz", "GHz" or "kHz" for this system are read as 1e6, 1e9 and 1e3 rad/s,
e.g. the cavity decay rate ``kappa = 3.2e7`` rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants as sc
from scipy.integrate import quad

from .errors import DomainError, GridError

# Gaussian envelope exp(-ENVELOPE_EXPONENT * (t - T/2)**2 / T**2) on [0, T]
ENVELOPE_EXPONENT = 24.0


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants (SI) used by the experimental parameter estimates."""

    hbar: float = field(default=sc.hbar, init=False)
    eps0: float = field(default=sc.epsilon_0, init=False)
    c_light: float = field(default=sc.c, init=False)


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class PhysicalParams:
    """Rates of one ion-cavity system, in rad/s.

    Attributes:
        g: ion-cavity coupling rate.
        kappa: cavity field decay rate into the free-space continuum.
        gamma: spontaneous emission rate out of the excited state.
        delta: detuning of the |1> -> |e> transition from the cavity/pulse
            carrier (signed).
    """

    g: float
    kappa: float
    gamma: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("g", "kappa", "gamma", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        # kappa == 0 is allowed: it switches the cavity off (free propagation)
        if self.g < 0 or self.kappa < 0 or self.gamma < 0:
            raise DomainError(f"rates must be non-negative: g={self.g}, kappa={self.kappa}, gamma={self.gamma}")

    def replace(self, **changes) -> "PhysicalParams":
        values = dict(g=self.g, kappa=self.kappa, gamma=self.gamma, delta=self.delta)
        values.update(changes)
        return PhysicalParams(**values)


#: Rates used for the microsphere / Eu3+ system (rad/s).
REFERENCE_PARAMS = PhysicalParams(g=1.0e9, kappa=3.2e7, gamma=1.0e3)
#: Pulse duration used for the headline numbers (s).
REFERENCE_DURATION = 3.0e-6


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian single-photon pulse of duration ``duration`` seconds.

    ``normalization`` (s^-1/2) is fixed at construction so that the envelope
    has unit squared integral over [0, T].
    """

    duration: float
    normalization: float = field(init=False, repr=False)

    def __post_init__(self):
        T = self.duration
        if not (math.isfinite(T) and T > 0):
            raise DomainError(f"pulse duration must be positive, got {T!r}")
        # integrate in the dimensionless variable u = t/T to stay well scaled
        area, _ = quad(lambda u: math.exp(-2 * ENVELOPE_EXPONENT * (u - 0.5) ** 2), 0.0, 1.0, epsabs=0, epsrel=1e-13)
        object.__setattr__(self, "normalization", 1.0 / math.sqrt(area * T))

    @property
    def sigma_omega(self) -> float:
        """Standard deviation of the Gaussian spectral amplitude, sqrt(48)/T."""
        return math.sqrt(2 * ENVELOPE_EXPONENT) / self.duration


@dataclass(frozen=True)
class ModeGrid:
    """Discretized free-space continuum: ``n_modes`` modes spaced ``delta_omega``
    apart, symmetric about the cavity frequency (omega = 0)."""

    omega_b: float
    n_modes: int
    delta_omega: float
    omegas: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        self.omegas.setflags(write=False)

    def same_as(self, other: "ModeGrid") -> bool:
        return (
            self.n_modes == other.n_modes
            and self.delta_omega == other.delta_omega
            and np.array_equal(self.omegas, other.omegas)
        )


def make_grid(omega_b: float, n_modes: int) -> ModeGrid:
    """Build the grid omega_k = [k - (N+1)/2] * d_omega, k = 1..N, with
    d_omega = 2 * omega_b / N."""
    if not (math.isfinite(omega_b) and omega_b > 0):
        raise GridError(f"bandwidth must be positive, got {omega_b!r}")
    if int(n_modes) != n_modes or n_modes < 2:
        raise GridError(f"need an integer mode count >= 2, got {n_modes!r}")
    n_modes = int(n_modes)
    return _build_grid(omega_b, n_modes, 2.0 * omega_b / n_modes)


def _build_grid(omega_b: float, n_modes: int, delta_omega: float) -> ModeGrid:
    k = np.arange(1, n_modes + 1)
    # (2k - N - 1) is an exact integer, so omega_k = -omega_{N+1-k} holds bitwise
    omegas = (2 * k - n_modes - 1) * (delta_omega / 2)
    return ModeGrid(omega_b, n_modes, delta_omega, omegas)


#: Default bandwidth in units of the pulse spectral width.
BANDWIDTH_FACTOR = 8.0
#: Default recurrence time 2*pi/d_omega in units of the pulse duration.
RECURRENCE_FACTOR = 10.0


def default_grid(
    params: PhysicalParams,
    pulse: PulseSpec,
    omega_b: float | None = None,
    n_modes: int | None = None,
) -> ModeGrid:
    """Grid sized from the pulse: omega_b = 8 sigma_omega, d_omega = 2 pi / (10 T).

    N is rounded up to an even integer and omega_b re-derived from it, so
    ``d_omega * T == 2 pi / 10`` holds exactly.  Either default can be
    overridden; with both overrides this is just :func:`make_grid`.

    The bandwidth is set by the pulse alone.  Note that when omega_b is not
    much larger than ``params.kappa`` the discretized continuum is band
    limited and the cavity response acquires a frequency-dependent shift.
    """
    del params  # sizing depends only on the pulse
    if omega_b is not None and n_modes is not None:
        return make_grid(omega_b, n_modes)
    if n_modes is not None:
        return make_grid(BANDWIDTH_FACTOR * pulse.sigma_omega, n_modes)
    delta_omega = 2 * math.pi / (RECURRENCE_FACTOR * pulse.duration)
    target = omega_b if omega_b is not None else BANDWIDTH_FACTOR * pulse.sigma_omega
    n = math.ceil(2 * target / delta_omega - 1e-9)
    n += n % 2
    return _build_grid(n * delta_omega / 2, n, delta_omega)
