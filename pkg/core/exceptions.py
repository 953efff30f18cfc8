"""
Centralized error handling for tworep.

Provides:
- Custom exception types carrying a stable error code and an exit code
- A decorator that turns exceptions raised by a command into error reports
"""
import logging
import traceback
from functools import wraps
from typing import Callable, Optional

from core.report import ErrorCode, Report, report_error


logger = logging.getLogger(__name__)


class AppException(Exception):
    """Base application exception."""

    def __init__(
        self,
        code: str,
        message: str,
        exit_code: int = 1,
        details: Optional[dict] = None
    ):
        super().__init__(message)
        self.code = code
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}


class InvalidInputError(AppException):
    """Raised when a builder or operation receives input outside its domain."""

    def __init__(self, message: str = "Invalid input", details: Optional[dict] = None):
        super().__init__(ErrorCode.INVALID_INPUT[0], message, details=details)


class InputFormatError(AppException):
    """Raised when an input document cannot be parsed."""

    def __init__(self, message: str = "Malformed input document", details: Optional[dict] = None):
        super().__init__(ErrorCode.INPUT_FORMAT[0], message, exit_code=2, details=details)


class StructuralError(AppException):
    """Raised when matrix shapes disagree with domains and codomains."""

    def __init__(self, message: str = "Matrix shapes do not match the category", details: Optional[dict] = None):
        super().__init__(ErrorCode.STRUCTURAL_ERROR[0], message, details=details)


class CompositionUndefinedError(AppException):
    """Raised when composing 1-morphisms whose domain and codomain disagree."""

    def __init__(self, first: str, second: str):
        super().__init__(
            ErrorCode.COMPOSITION_UNDEFINED[0],
            f"Cannot compose {first} with {second}: domain of {first} is not the codomain of {second}",
            details={"pair": [first, second]},
        )


class NotABasedRingError(AppException):
    """Raised when a change of basis produces a negative or fractional structure constant."""

    def __init__(self, message: str = "Structure constants are not non-negative integers", details: Optional[dict] = None):
        super().__init__(ErrorCode.NOT_A_BASED_RING[0], message, details=details)


class MissingInvolutionError(AppException):
    """Raised when an operation needs the involution * and the category has none."""

    def __init__(self, operation: str):
        super().__init__(
            ErrorCode.MISSING_INVOLUTION[0],
            f"{operation} requires a category with an involution",
            details={"operation": operation},
        )


class PreconditionError(AppException):
    """Raised when an operation's precondition does not hold."""

    def __init__(self, message: str = "Precondition failed", details: Optional[dict] = None):
        super().__init__(ErrorCode.PRECONDITION_FAILED[0], message, details=details)


class BudgetExceededError(AppException):
    """Raised when an exhaustive search would exceed the configured budget."""

    def __init__(self, needed: int, budget: int):
        super().__init__(
            ErrorCode.BUDGET_EXCEEDED[0],
            f"Search needs {needed} candidates, budget is {budget}",
            details={"needed": needed, "budget": budget},
        )


class StageMismatchError(AppException):
    """Raised when a pipeline stage produces something other than its expected form."""

    def __init__(self, stage: str, message: str, details: Optional[dict] = None):
        payload = {"stage": stage}
        payload.update(details or {})
        super().__init__(ErrorCode.STAGE_MISMATCH[0], f"[{stage}] {message}", details=payload)
        self.stage = stage


def handle_errors(command: str) -> Callable:
    """Decorator turning exceptions raised by a command body into error reports.

    The wrapped function returns a Report; the decorated one returns
    (report, exit code), with an error report when the body raised.

    Usage:
        @handle_errors("cells")
        def _cells(...) -> Report:
            ...
    """
    def decorator(f: Callable) -> Callable:
        @wraps(f)
        def decorated(*args, **kwargs) -> tuple[Report, int]:
            try:
                report = f(*args, **kwargs)
                return report, (0 if report.passed else 1)
            except AppException as e:
                logger.warning(f"{command} failed: {e.code} - {e.message}")
                return report_error(command, e.code, e.message, e.details), e.exit_code
            except Exception as e:
                logger.error(
                    f"Unhandled error in {command}: {str(e)}\n"
                    f"{traceback.format_exc()}"
                )
                return report_error(
                    command,
                    ErrorCode.INTERNAL_ERROR[0],
                    message="An unexpected error occurred",
                    details={"exception": type(e).__name__},
                ), 1

        return decorated

    return decorator
