"""Exception types shared across the package."""


class WPMEError(Exception):
    """Base class for every error raised by this package."""


class DomainError(WPMEError, ValueError):
    """A point or cell lies outside the weight's domain."""


class InfiniteMeasureError(WPMEError, ValueError):
    """The nu-measure of a cell (or of the whole domain) diverges."""


class UnsupportedSpecError(WPMEError, ValueError):
    """The weight family / domain pair is not one of the tabulated cases."""


class AssemblyError(WPMEError):
    pass


class StepError(WPMEError):
    """A single implicit step failed (Newton divergence or non-finite iterate)."""


class EvolutionError(WPMEError):
    pass


class MultiplicityError(WPMEError):
    """The Neumann operator is disconnected, so the zero eigenvalue is not simple."""


class ConvergenceError(WPMEError):
    pass


class FitError(WPMEError, ValueError):
    pass


class ConfigError(WPMEError, ValueError):
    pass
