"""Exception types shared across the package."""


class HeatwaveError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HeatwaveError, ValueError):
    """An input lies outside the physical domain of a closure evaluation."""


class NonPhysicalStateError(HeatwaveError, ValueError):
    """A conserved state decodes to non-positive density or internal energy."""


class ConfigError(HeatwaveError, ValueError):
    """Parameters or a run configuration are inconsistent."""


class NumericalError(HeatwaveError, RuntimeError):
    """An iteration failed to converge or a scheme produced invalid data."""


class StabilityError(HeatwaveError, RuntimeError):
    """A dispersion root with positive imaginary part (growing mode)."""


class BranchPoleError(HeatwaveError, ValueError):
    """A Hugoniot branch was evaluated at (or across) a pole of its closed form."""

    def __init__(self, message, poles=()):
        super().__init__(message)
        self.poles = tuple(poles)


class NoShockError(HeatwaveError, ValueError):
    """The sampled point does not define a shock candidate (M^2 <= 0)."""


class DegenerateFieldError(HeatwaveError, ValueError):
    """Characteristic fields coincide and eigenvector directions are undefined."""
