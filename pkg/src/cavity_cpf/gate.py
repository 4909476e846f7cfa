"""Two-ion controlled phase flip built from three ion-photon reflections.

Joint amplitudes are indexed ``[ion1, ion2, polarization, ...]`` with ion
states 0/1 and polarization 0 = H, 1 = V.  The multimode variant adds a
trailing free-space mode index.  The protocol reflects the photon off
cavity 1, rotates its polarization with a half-wave plate, reflects off
cavity 2, rotates again and reflects off cavity 1 a second time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import ModeGrid
from .errors import DomainError
from .pulse import SpectralAmplitudes
from .scattering import ScatteringProfile

H, V = 0, 1
SQRT_HALF = np.sqrt(0.5)

#: Half-wave-plate action on (H, V): R|H> = (-|H> + |V>)/sqrt2, R|V> = (|H> + |V>)/sqrt2.
HWP_MATRIX = SQRT_HALF * np.array([[-1.0, 1.0], [1.0, 1.0]])
#: Polarization state (|H> + |V>)/sqrt2 the photon starts (and must end) in.
PHOTON_PLUS = np.array([SQRT_HALF, SQRT_HALF], dtype=complex)


def _qubit(beta) -> np.ndarray:
    b = np.asarray(beta, dtype=complex)
    if b.shape != (2,):
        raise DomainError("an ion state needs two amplitudes (beta_i0, beta_i1)")
    n = np.linalg.norm(b)
    if abs(n - 1) > 1e-12:
        raise DomainError(f"ion amplitudes must be normalized, got norm {n}")
    return b


@dataclass(frozen=True)
class IdealJointState:
    amplitudes: np.ndarray  # shape (2, 2, 2)

    def __post_init__(self):
        if self.amplitudes.shape != (2, 2, 2):
            raise DomainError(f"expected amplitudes of shape (2, 2, 2), got {self.amplitudes.shape}")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def atoms(self) -> np.ndarray:
        """Two-ion amplitudes if the photon factors out as (|H>+|V>)/sqrt2."""
        return self.amplitudes @ PHOTON_PLUS.conj()


@dataclass(frozen=True)
class MultimodeJointState:
    """Joint state with the photon's spectral amplitudes kept per mode.

    ``elapsed`` is the total free-propagation time accumulated by the photon.
    """

    amplitudes: np.ndarray  # shape (2, 2, 2, N)
    omegas: np.ndarray = field(repr=False)
    elapsed: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def product_state(beta1, beta2, photon=PHOTON_PLUS) -> IdealJointState:
    """(beta10|0> + beta11|1>) (beta20|0> + beta21|1>) (x) photon."""
    return IdealJointState(np.einsum("i,j,p->ijp", _qubit(beta1), _qubit(beta2), np.asarray(photon, dtype=complex)))


def multimode_product_state(beta1, beta2, c0: SpectralAmplitudes, grid: ModeGrid) -> MultimodeJointState:
    """Two-ion product state times the pulse c(0) (x) (|H> + |V>)/sqrt2."""
    amps = np.einsum("i,j,p,k->ijpk", _qubit(beta1), _qubit(beta2), PHOTON_PLUS, c0.values)
    return MultimodeJointState(amps, grid.omegas.copy())


def _check_atom(atom: int) -> int:
    if atom not in (1, 2):
        raise DomainError(f"atom must be 1 or 2, got {atom!r}")
    return atom - 1


def ideal_cpf_atom_photon(state: IdealJointState, atom: int) -> IdealJointState:
    """exp(i pi |0><0| (x) |H><H|) on the chosen ion and the photon."""
    axis = _check_atom(atom)
    amps = state.amplitudes.copy()
    idx = [slice(None)] * 3
    idx[axis] = 0
    idx[2] = H
    amps[tuple(idx)] *= -1
    return IdealJointState(amps)


def ideal_cpf_two_atom(state: IdealJointState) -> IdealJointState:
    """exp(i pi |0><0| (x) |0><0|) on the two ions, photon untouched."""
    amps = state.amplitudes.copy()
    amps[0, 0] *= -1
    return IdealJointState(amps)


def hwp_rotation(state):
    """Apply the half-wave plate to the polarization index of either state type."""
    amps = np.einsum("qp,ijp...->ijq...", HWP_MATRIX, state.amplitudes)
    if isinstance(state, MultimodeJointState):
        return replace(state, amplitudes=amps)
    return IdealJointState(amps)


def _require_plus_photon(amplitudes: np.ndarray, tol: float) -> None:
    scale = max(np.max(np.abs(amplitudes)), 1e-300)
    if np.max(np.abs(amplitudes[:, :, H] - amplitudes[:, :, V])) > tol * scale:
        raise DomainError("photon polarization must be (|H> + |V>)/sqrt2 for the gate identity to hold")


def compose_ideal_cpf(state: IdealJointState) -> IdealJointState:
    """U_1p R U_2p R U_1p applied to ``state`` (photon must be (|H>+|V>)/sqrt2)."""
    _require_plus_photon(state.amplitudes, 1e-12)
    out = ideal_cpf_atom_photon(state, 1)
    out = hwp_rotation(out)
    out = ideal_cpf_atom_photon(out, 2)
    out = hwp_rotation(out)
    return ideal_cpf_atom_photon(out, 1)


def operator_identity_errors(rng: np.random.Generator, trials: int = 100) -> tuple[float, float]:
    """Check the composed sequence against the two-ion gate on random product inputs.

    Returns ``(gate_error, photon_error)``: the largest deviation of the
    composed output from the two-ion gate applied to the input, and the
    largest deviation of the output photon from (|H>+|V>)/sqrt2 after
    factoring out the ions.
    """
    gate_err = photon_err = 0.0
    for _ in range(trials):
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        state = product_state(b[0], b[1])
        out = compose_ideal_cpf(state)
        gate_err = max(gate_err, float(np.max(np.abs(out.amplitudes - ideal_cpf_two_atom(state).amplitudes))))
        atoms = out.atoms
        photon_err = max(photon_err, float(np.max(np.abs(out.amplitudes - np.multiply.outer(atoms, PHOTON_PLUS)))))
    return gate_err, photon_err


def realistic_reflection(state: MultimodeJointState, atom: int, profile: ScatteringProfile, T: float) -> MultimodeJointState:
    """Reflect the photon off the cavity of ``atom`` using per-mode reflections.

    H amplitudes pick up r0 or r1 (ion in |0> or |1>) times exp(-i w_k T);
    V amplitudes bypass the cavity and only propagate.
    """
    axis = _check_atom(atom)
    if len(profile.omegas) != len(state.omegas) or not np.array_equal(profile.omegas, state.omegas):
        raise DomainError("scattering profile and state live on different mode grids")
    delay = np.exp(-1j * state.omegas * T)
    amps = state.amplitudes * delay
    for ion_state, r in ((0, profile.r0), (1, profile.r1)):
        idx = [slice(None)] * 3
        idx[axis] = ion_state
        idx[2] = H
        amps[tuple(idx)] *= r
    return MultimodeJointState(amps, state.omegas, state.elapsed + T)


def compose_realistic_cpf(
    state: MultimodeJointState,
    profile1: ScatteringProfile,
    profile2: ScatteringProfile,
    T: float,
) -> tuple[MultimodeJointState, float]:
    """Run the three-reflection protocol with simulated cavities.

    Returns the final state and its fidelity |<ideal|actual>|^2, where the
    ideal is the two-ion gate applied to the input with the photon freely
    propagated for the same total time.
    """
    _require_plus_photon(state.amplitudes, 1e-12)
    out = realistic_reflection(state, 1, profile1, T)
    out = hwp_rotation(out)
    out = realistic_reflection(out, 2, profile2, T)
    out = hwp_rotation(out)
    out = realistic_reflection(out, 1, profile1, T)
    ideal = state.amplitudes * np.exp(-1j * state.omegas * (out.elapsed - state.elapsed))
    ideal[0, 0] *= -1
    return out, abs(np.vdot(ideal, out.amplitudes)) ** 2


def beta_grid_fidelities(
    profile1: ScatteringProfile,
    profile2: ScatteringProfile,
    c0: SpectralAmplitudes,
    grid: ModeGrid,
    T: float,
    points: int = 9,
) -> tuple[np.ndarray, np.ndarray]:
    """F12 over real inputs with |beta10|^2 and |beta20|^2 on an even grid in [0, 1].

    Returns ``(weights, F)`` with ``F[i, j]`` for ``weights[i], weights[j]``.
    """
    xs = np.linspace(0.0, 1.0, points)
    F = np.empty((points, points))
    for i, x1 in enumerate(xs):
        for j, x2 in enumerate(xs):
            state = multimode_product_state(
                (np.sqrt(x1), np.sqrt(1 - x1)), (np.sqrt(x2), np.sqrt(1 - x2)), c0, grid
            )
            F[i, j] = compose_realistic_cpf(state, profile1, profile2, T)[1]
    return xs, F
