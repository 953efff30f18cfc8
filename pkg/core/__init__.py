"""
Core module for tworep.
Re-exports constants, config, the report envelope and the exception types.
"""
from core.constants import (
    NAME_PATTERN,
    COMPOSITION_KEY_SEP,
    REPORT_VERSION,
    TOOL_NAME,
    OUTPUT_FORMATS,
)

from core.config import settings, Settings
from core.report import ErrorCode, Report, report_error, report_success
from core.exceptions import (
    AppException,
    BudgetExceededError,
    CompositionUndefinedError,
    InputFormatError,
    InvalidInputError,
    MissingInvolutionError,
    NotABasedRingError,
    PreconditionError,
    StageMismatchError,
    StructuralError,
    handle_errors,
)
