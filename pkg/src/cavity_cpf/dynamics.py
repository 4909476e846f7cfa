"""Single-excitation dynamics of a pulse scattering off an ion-cavity system.

The state vector is ``x = [c_1 .. c_N, lambda]`` for the uncoupled branch
(ion in |0>, which does not couple to the cavity mode) and
``x = [c_1 .. c_N, lambda, mu]`` for the coupled branch (ion in |1>), with

    dc_k/dt    = -i w_k c_k - s * lambda,        s = sqrt(kappa * dw / 2 pi)
    dlambda/dt =  s * sum_k c_k  [- i g mu]
    dmu/dt     = -i g lambda - (gamma/2 + i delta) mu

The equations are linear and time independent, so ``x(T) = exp(A T) x(0)``.
Two routes compute it: :func:`propagate_exact` (matrix exponential) and a
fixed-step classical Runge-Kutta integrator (:func:`propagate_stepped`), which
serves as an independent check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .core import ModeGrid, PhysicalParams, PulseSpec
from .errors import DomainError, NormDriftError, PropagationError, StepSizeError
from .pulse import SpectralAmplitudes

log = logging.getLogger(__name__)

Branch = Literal["uncoupled", "coupled"]
Method = Literal["exact", "stepped"]

#: Largest (fastest rate) x dt accepted by the stepped integrator.
MAX_RATE_STEP = 0.1
#: Dense matrix exponentials are used up to this dimension; beyond it the
#: action of the exponential on the state is computed on the sparse generator.
DENSE_LIMIT = 800


@dataclass(frozen=True)
class AmplitudeState:
    """Free-space mode amplitudes, cavity amplitude and excited-state amplitude."""

    modes: np.ndarray
    cavity: complex
    excited: complex = 0j

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.modes) ** 2) + abs(self.cavity) ** 2 + abs(self.excited) ** 2)

    @classmethod
    def from_vector(cls, x: np.ndarray, n_modes: int) -> "AmplitudeState":
        excited = complex(x[n_modes + 1]) if len(x) > n_modes + 1 else 0j
        return cls(np.array(x[:n_modes]), complex(x[n_modes]), excited)


@dataclass(frozen=True)
class EvolutionReport:
    """Outcome of one evolution over [0, T].

    ``emitted`` is gamma * int_0^T |mu|^2 dt accumulated while stepping; it is
    ``None`` for the exact propagator and for the uncoupled branch.
    """

    final: AmplitudeState
    norm_leak: float
    cavity_residual: float
    excited_residual: float
    steps: int
    branch: str
    method: str
    duration: float
    emitted: float | None = None


def _coupling(params: PhysicalParams, grid: ModeGrid) -> float:
    return math.sqrt(params.kappa * grid.delta_omega / (2 * math.pi))


def _check_branch(branch: str) -> None:
    if branch not in ("uncoupled", "coupled"):
        raise DomainError(f"branch must be 'uncoupled' or 'coupled', got {branch!r}")


def build_generator(params: PhysicalParams, grid: ModeGrid, branch: Branch) -> np.ndarray:
    """Dense generator A of dx/dt = A x for the chosen branch."""
    _check_branch(branch)
    N = grid.n_modes
    n = N + 1 if branch == "uncoupled" else N + 2
    s = _coupling(params, grid)
    A = np.zeros((n, n), dtype=complex)
    A[np.arange(N), np.arange(N)] = -1j * grid.omegas
    A[:N, N] = -s
    A[N, :N] = s
    if branch == "coupled":
        A[N, N + 1] = -1j * params.g
        A[N + 1, N] = -1j * params.g
        A[N + 1, N + 1] = -(params.gamma / 2 + 1j * params.delta)
    return A


def _is_diagonal(A: np.ndarray) -> bool:
    return not np.any(A - np.diag(np.diag(A)))


def propagate_exact(A: np.ndarray, T: float, x0: np.ndarray) -> np.ndarray:
    """Return exp(A T) x0.

    Diagonal generators are exponentiated elementwise, anti-Hermitian ones
    through a Hermitian eigendecomposition (exactly norm preserving), and the
    rest by scaling and squaring.  Above :data:`DENSE_LIMIT` the action of the
    exponential is evaluated on the sparse generator instead.
    """
    x0 = np.asarray(x0, dtype=complex)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(x0))):
        raise PropagationError("generator or initial state has non-finite entries")
    try:
        if _is_diagonal(A):
            x = np.exp(np.diag(A) * T) * x0
        elif len(A) > DENSE_LIMIT:
            x = scipy.sparse.linalg.expm_multiply(scipy.sparse.csr_matrix(A) * T, x0)
        elif np.max(np.abs(A + A.conj().T)) <= 1e-14 * np.max(np.abs(A)):
            # A = -i H with H Hermitian
            w, V = scipy.linalg.eigh(1j * A)
            x = V @ (np.exp(-1j * w * T) * (V.conj().T @ x0))
        else:
            x = scipy.linalg.expm(A * T) @ x0
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise PropagationError(f"matrix exponential failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise PropagationError("matrix exponential produced non-finite amplitudes")
    return x


def default_step(params: PhysicalParams, T: float) -> float:
    """dt = min(0.02 / g, T / 1e5)."""
    return min(0.02 / params.g, T / 1e5) if params.g > 0 else T / 1e5


def _fastest_rate(params: PhysicalParams, grid: ModeGrid, branch: str) -> float:
    rate = max(float(np.max(np.abs(grid.omegas))), math.sqrt(params.kappa * grid.omega_b / math.pi))
    if branch == "coupled":
        rate = max(rate, params.g, params.gamma / 2 + abs(params.delta))
    return rate


def propagate_stepped(A, T: float, x0: np.ndarray, dt: float, emission_index: int | None = None, gamma: float = 0.0):
    """Classical fourth-order Runge-Kutta with a fixed step close to ``dt``.

    Returns ``(x(T), steps, emitted)`` where ``emitted`` is
    gamma * int |x[emission_index]|^2 dt by the trapezoid rule (0.0 if no
    index is given).
    """
    steps = max(1, math.ceil(T / dt - 1e-9))
    h = T / steps
    op = scipy.sparse.csr_matrix(A)
    x = np.array(x0, dtype=complex)
    track = emission_index is not None
    prev = abs(x[emission_index]) ** 2 if track else 0.0
    area = 0.0
    half = 0.5 * h
    for _ in range(steps):
        k1 = op @ x
        k2 = op @ (x + half * k1)
        k3 = op @ (x + half * k2)
        k4 = op @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if track:
            cur = abs(x[emission_index]) ** 2
            area += half * (prev + cur)
            prev = cur
    return x, steps, gamma * area


def evolve(
    c0: SpectralAmplitudes,
    params: PhysicalParams,
    grid: ModeGrid,
    pulse: PulseSpec,
    branch: Branch,
    method: Method = "exact",
    dt: float | None = None,
    norm_tol: float = 1e-8,
    horizon: float | None = None,
) -> EvolutionReport:
    """Evolve the pulse from t = 0 to t = T on one branch.

    ``horizon`` (>= T) extends the evolution past the pulse duration, e.g. to
    let the cavity empty before per-mode reflections are read off.

    Raises:
        StepSizeError: a user-supplied ``dt`` does not resolve the fastest rate.
        NormDriftError: the norm changed by more than ``norm_tol`` beyond
            what spontaneous emission accounts for.
    """
    _check_branch(branch)
    if method not in ("exact", "stepped"):
        raise DomainError(f"method must be 'exact' or 'stepped', got {method!r}")
    if len(c0) != grid.n_modes:
        raise DomainError(f"{len(c0)} amplitudes for a grid of {grid.n_modes} modes")
    T = pulse.duration
    if horizon is not None:
        if not horizon >= T:
            raise DomainError(f"horizon {horizon} s is shorter than the pulse ({T} s)")
        T = float(horizon)
    A = build_generator(params, grid, branch)
    N = grid.n_modes
    x0 = np.zeros(len(A), dtype=complex)
    x0[:N] = c0.values
    norm0 = float(np.sum(np.abs(x0) ** 2))

    emitted = None
    steps = 0
    if method == "exact":
        try:
            x = propagate_exact(A, T, x0)
            steps = 1
        except PropagationError as exc:
            log.warning("%s; falling back to the stepped integrator", exc)
            method = "stepped"
    if method == "stepped":
        if dt is None:
            dt = default_step(params, T)
        else:
            required = MAX_RATE_STEP / _fastest_rate(params, grid, branch)
            if dt > required:
                raise StepSizeError(dt, required)
        idx = N + 1 if branch == "coupled" else None
        x, steps, emitted = propagate_stepped(A, T, x0, dt, idx, params.gamma)
        if branch == "uncoupled":
            emitted = None

    state = AmplitudeState.from_vector(x, N)
    leak = norm0 - state.norm
    accounted = emitted if emitted is not None else 0.0
    if branch == "uncoupled" or params.gamma == 0:
        drift = abs(leak)
    elif emitted is not None:
        drift = abs(leak - accounted)
    else:
        drift = max(0.0, -leak)  # exact propagation: only forbid norm gain
    if drift > norm_tol:
        raise NormDriftError(drift, norm_tol)
    return EvolutionReport(
        final=state,
        norm_leak=leak,
        cavity_residual=abs(state.cavity) ** 2,
        excited_residual=abs(state.excited) ** 2,
        steps=steps,
        branch=branch,
        method=method,
        duration=T,
        emitted=emitted,
    )


def evolve_uncoupled(c0, params, grid, pulse, method: Method = "exact", **kwargs) -> EvolutionReport:
    """Ion in |0>: the pulse sees an empty cavity."""
    return evolve(c0, params, grid, pulse, "uncoupled", method, **kwargs)


def evolve_coupled(c0, params, grid, pulse, method: Method = "exact", **kwargs) -> EvolutionReport:
    """Ion in |1>: the cavity mode is coupled to the |1> -> |e> transition."""
    return evolve(c0, params, grid, pulse, "coupled", method, **kwargs)
