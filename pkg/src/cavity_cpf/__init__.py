"""Controlled phase flip between ions in separate cavities, mediated by a
single-photon pulse: scattering dynamics, gate fidelity and parameter
estimates."""

from .core import (
    CONSTANTS,
    REFERENCE_DURATION,
    REFERENCE_PARAMS,
    ModeGrid,
    PhysicalConstants,
    PhysicalParams,
    PulseSpec,
    default_grid,
    make_grid,
)
from .dynamics import (
    AmplitudeState,
    EvolutionReport,
    build_generator,
    evolve,
    evolve_coupled,
    evolve_uncoupled,
    propagate_exact,
    propagate_stepped,
)
from .errors import (
    ConfigError,
    CPFError,
    DomainError,
    GridError,
    NormDriftError,
    NumericalError,
    PropagationError,
    SpectralCoverageError,
    StepSizeError,
)
from .fidelity import (
    FidelityCurve,
    XiPair,
    fidelity_curve,
    fidelity_min,
    fidelity_quadratic,
    overlap_fidelity,
    spontaneous_loss,
    xi_coefficients,
)
from .gate import (
    IdealJointState,
    MultimodeJointState,
    compose_ideal_cpf,
    compose_realistic_cpf,
    hwp_rotation,
    ideal_cpf_atom_photon,
    ideal_cpf_two_atom,
    realistic_reflection,
)
from .params import CavitySpec, IonSpec, cavity_decay, coupling_rate, operation_count
from .pipeline import BranchRun, simulate
from .pulse import SpectralAmplitudes, envelope, spectral_amplitudes
from .scattering import (
    PhaseProfile,
    ScatteringProfile,
    analytic_reflection,
    extract_reflection,
    phase_profile,
    scattering_profile,
)

__version__ = "0.1.0"
