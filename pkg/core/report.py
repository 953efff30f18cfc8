"""
Standardized report envelope for every tworep command.
Reports are deterministic: no timestamps, no random identifiers.
"""
from dataclasses import dataclass, field, asdict
from typing import Any, Generic, Optional, TypeVar

from core.constants import REPORT_VERSION, TOOL_NAME

T = TypeVar('T')


@dataclass
class ReportMeta:
    """Metadata included in every report."""
    tool: str = TOOL_NAME
    version: str = REPORT_VERSION


@dataclass
class Report(Generic[T]):
    """Report envelope.

    SUCCESS FORMAT:
    {
        "success": true,
        "command": "cells",
        "data": {},
        "meta": {}
    }

    ERROR FORMAT:
    {
        "success": false,
        "command": "cells",
        "error": {
            "code": "",
            "message": "",
            "details": {}
        },
        "meta": {}
    }

    A successful run may still carry a failing verdict (e.g. validate with
    violations); the CLI derives its exit code from `success` and `passed`.
    """
    success: bool
    command: str
    data: Optional[T] = None
    error: Optional[dict] = None
    passed: bool = True
    meta: ReportMeta = field(default_factory=ReportMeta)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        result = {
            "success": self.success,
            "command": self.command,
            "meta": asdict(self.meta),
        }
        if self.success:
            result["passed"] = self.passed
            result["data"] = self.data
        else:
            result["error"] = self.error
        return result


# Error codes for consistent error handling
class ErrorCode:
    # Input errors
    INVALID_INPUT = ("INVALID_INPUT", "Invalid input")
    INPUT_FORMAT = ("INPUT_FORMAT", "Malformed input document")
    STRUCTURAL_ERROR = ("STRUCTURAL_ERROR", "Matrix shapes do not match the category")

    # Algebraic errors
    COMPOSITION_UNDEFINED = ("COMPOSITION_UNDEFINED", "Composition is undefined")
    NOT_A_BASED_RING = ("NOT_A_BASED_RING", "Structure constants are not non-negative integers")
    MISSING_INVOLUTION = ("MISSING_INVOLUTION", "Category has no involution")
    PRECONDITION_FAILED = ("PRECONDITION_FAILED", "Precondition failed")

    # Search errors
    BUDGET_EXCEEDED = ("BUDGET_EXCEEDED", "Search budget exceeded")
    STAGE_MISMATCH = ("STAGE_MISMATCH", "Pipeline stage mismatch")

    # Internal
    INTERNAL_ERROR = ("INTERNAL_ERROR", "Internal error")

    @classmethod
    def get_message(cls, code: str) -> str:
        """Get error message for a code."""
        for attr in dir(cls):
            if attr.isupper():
                value = getattr(cls, attr)
                if isinstance(value, tuple) and value[0] == code:
                    return value[1]
        return "Unknown error"


def report_success(command: str, data: Any, passed: bool = True) -> Report:
    """Create a successful report.

    Usage:
        return report_success("cells", structure.to_dict())
        return report_success("validate", report.to_dict(), passed=report.ok)
    """
    return Report(success=True, command=command, data=data, passed=passed)


def report_error(
    command: str,
    code: str,
    message: Optional[str] = None,
    details: Optional[dict] = None,
) -> Report:
    """Create an error report.

    Usage:
        return report_error("compose", "COMPOSITION_UNDEFINED", details={"pair": ["F", "G"]})
    """
    return Report(
        success=False,
        command=command,
        error={
            "code": code,
            "message": message or ErrorCode.get_message(code),
            "details": details or {},
        },
    )
