"""Exception hierarchy shared by the simulation modules and the CLI."""


class CPFError(Exception):
    """Base class for every error raised by :mod:`cavity_cpf`."""


class DomainError(CPFError, ValueError):
    """An argument lies outside the domain of the operation."""


class GridError(DomainError):
    """A mode grid cannot be built or does not fit the request."""


class SpectralCoverageError(GridError):
    """The mode grid is too narrow for the pulse spectrum."""

    def __init__(self, coverage: float, omega_b: float, sigma_omega: float):
        self.coverage = coverage
        super().__init__(
            f"grid bandwidth {omega_b:.4g} rad/s is below 4 spectral widths "
            f"({4 * sigma_omega:.4g} rad/s); it captures a fraction {coverage:.12f} "
            "of the pulse spectral weight"
        )


class ConfigError(CPFError):
    """Invalid or incomplete run configuration."""


class NumericalError(CPFError):
    """A numerical procedure failed or produced untrustworthy output."""


class NormDriftError(NumericalError):
    def __init__(self, drift: float, tolerance: float):
        self.drift = drift
        super().__init__(f"norm drift {drift:.3e} exceeds tolerance {tolerance:.1e}")


class StepSizeError(NumericalError):
    def __init__(self, dt: float, required: float):
        self.dt = dt
        self.required = required
        super().__init__(f"time step {dt:.3e} s is unstable/inaccurate; need dt <= {required:.3e} s")


class PropagationError(NumericalError):
    """Exact propagation via the matrix exponential failed."""
