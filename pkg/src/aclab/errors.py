"""Exception types shared across the package."""


class AclabError(Exception):
    """Base class for all package-specific errors."""


class ZeroStateError(AclabError):
    """Raised when a state vector with no nonzero amplitude is supplied."""


class NumericalError(AclabError):
    """Raised when an iterative numerical procedure fails to converge
    or produces results outside its certified residual bounds."""


class NoRepresentativeError(AclabError):
    """Raised when a SLOCC class contains no anticoherent state
    (a Majorana multiplicity of at least N/2 sits at a pole)."""


class BadShapeError(AclabError):
    """Raised for structurally invalid problem parameters
    (divisibility violations, unsupported family parameters, ...)."""
