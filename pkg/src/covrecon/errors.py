"""Exception hierarchy shared by all modules."""


class CovreconError(Exception):
    """Base class for all package errors."""


class DegenerateInputError(CovreconError):
    """A polygon without the dimension/area needed by the operation."""


class BodyOutOfBoxError(CovreconError):
    """Body is not contained in the unit working box [-1/2, 1/2]^2."""


class InfeasibleMeasureError(CovreconError):
    """Surface area measure is unbalanced or does not span the plane."""


class ConfigurationError(CovreconError):
    """Invalid parameter combination (gamma windows, direction sets, ...)."""


class ReconstructionFailureError(CovreconError):
    """A pipeline stage produced a degenerate or empty reconstruction."""


class ShapeError(CovreconError):
    """Measurement payload has the wrong layout for the requested operation."""
