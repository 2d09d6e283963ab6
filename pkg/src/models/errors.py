"""Domain exceptions for mobiflow.

Every error subclasses ValueError through MobiflowError, so callers that
only care about "bad input" can keep catching ValueError while the
command layer maps specific failures to exit codes.
"""

from typing import Optional


class MobiflowError(ValueError):
    """Base class for all mobiflow domain errors."""


class NotAdditiveError(MobiflowError):
    """Raised when tensions or mobilities admit no additive split.

    Attributes:
        reason: Human-readable description of the first violated condition
    """

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class DimensionMismatchError(MobiflowError):
    """Raised when phase counts or spatial dimensions disagree."""


class SizeMismatchError(MobiflowError):
    """Raised when an array does not match the grid it is used with."""


class FrequencyOutOfRangeError(MobiflowError):
    """Raised for a frequency vector outside the signed box [-K/2, K/2-1]."""


class IndexOutOfRangeError(MobiflowError):
    """Raised for a phase index outside [0, n_phases)."""


class NonFiniteFieldError(MobiflowError):
    """Raised when a phase field picks up NaN or infinite values.

    Attributes:
        step: Time step at which the values were detected
        phase: First phase index holding a non-finite value
    """

    def __init__(self, step: int, phase: int):
        super().__init__(f"Non-finite value in phase {phase} after step {step}")
        self.step = step
        self.phase = phase


class ConfigInvalidError(MobiflowError):
    """Raised when a run configuration fails validation.

    Attributes:
        path: Dotted path of the offending config field (e.g. 'mobilities.pairs[2]')
        message: What is wrong with it
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class ShapeOverlapWarning(UserWarning):
    """Emitted when initial shapes are closer than a few interface widths."""


def describe(error: Exception, context: Optional[str] = None) -> str:
    """Format an error for console output.

    Args:
        error: The exception to describe
        context: Optional prefix such as the config file name

    Returns:
        Single-line description
    """
    label = type(error).__name__.replace('Error', '')
    text = f"{label}: {error}"
    return f"{context}: {text}" if context else text
