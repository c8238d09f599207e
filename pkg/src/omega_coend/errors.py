"""Exception hierarchy for omega-coend

Every failure raised by the engine derives from OmegaCoendError and carries
a stable ``code`` plus a ``message``, so the CLI can render any of them the
same way and pick an exit status from the family.
"""
from typing import Any, Dict, Optional


class OmegaCoendError(Exception):
    """Base class of all engine errors"""

    code = "OMEGA_COEND_ERROR"
    exit_code = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ValidationError(OmegaCoendError):
    """Input that is malformed or ill-typed"""

    code = "VALIDATION_ERROR"


class MissingReference(ValidationError):
    code = "MISSING_REFERENCE"


class DimensionMismatch(ValidationError):
    code = "DIMENSION_MISMATCH"


class GlobularIdentityViolation(ValidationError):
    code = "GLOBULAR_IDENTITY_VIOLATION"


class MalformedMatrix(ValidationError):
    code = "MALFORMED_MATRIX"


class TruncationMismatch(ValidationError):
    code = "TRUNCATION_MISMATCH"


class BadLevel(ValidationError):
    code = "BAD_LEVEL"


class BoundaryMismatch(ValidationError):
    code = "BOUNDARY_MISMATCH"


class ArityMismatch(ValidationError):
    code = "ARITY_MISMATCH"


class ParseError(ValidationError):
    code = "PARSE_ERROR"


class MissingImage(ValidationError):
    code = "MISSING_IMAGE"


class OutOfBounds(ValidationError):
    code = "OUT_OF_BOUNDS"


class NotEligible(ValidationError):
    code = "NOT_ELIGIBLE"


class GluingMismatch(ValidationError):
    code = "GLUING_MISMATCH"


class TypingUnresolvable(ValidationError):
    code = "TYPING_UNRESOLVABLE"


class BudgetExceeded(OmegaCoendError):
    """Saturation produced more cells than the configured cap"""

    code = "BUDGET_EXCEEDED"

    def __init__(self, message: str, dim: int, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, details)
        self.dim = dim


class VerificationFailure(OmegaCoendError):
    """A construction that should exist within bounds does not"""

    code = "VERIFICATION_FAILURE"
    exit_code = 1


class ContractionUnavailable(VerificationFailure):
    code = "CONTRACTION_UNAVAILABLE"
