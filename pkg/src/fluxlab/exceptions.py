"""Exception hierarchy shared across fluxlab."""


class FluxlabError(Exception):
    """Base class for all fluxlab errors."""


class ParameterError(FluxlabError, ValueError):
    """An input lies outside its physical or numerical domain."""


class NumericError(FluxlabError, ArithmeticError):
    """A numerical routine failed to converge or produced an invalid result."""


class LabelingError(NumericError):
    """Dressed states could not be matched to bare product states.

    Raised close to a qubit-qubit resonance, where hybridization makes the
    computational labels ambiguous. Callers should keep the flux trajectory
    away from the avoided crossing.
    """

    def __init__(self, message, flux_a=None, flux_b=None, overlap=None):
        super().__init__(message)
        self.flux_a = flux_a
        self.flux_b = flux_b
        self.overlap = overlap


class CalibrationError(FluxlabError):
    """No companion amplitude yields the requested conditional phase."""

    def __init__(self, message, phi_range=None):
        super().__init__(message)
        self.phi_range = phi_range


class ConfigError(FluxlabError):
    """A run configuration could not be parsed or validated."""
