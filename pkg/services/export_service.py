"""
Export service for tworep.
Renders report envelopes as JSON, YAML or human-readable text.
"""
import json
from typing import Any

import yaml

from core.constants import OUTPUT_FORMATS


def format_as_json(data: dict, indent: int = 2) -> str:
    """Format a report as JSON.

    Args:
        data: Report dictionary
        indent: Number of spaces for indentation (default 2)

    Returns:
        JSON string with sorted keys
    """
    return json.dumps(data, indent=indent, sort_keys=True, ensure_ascii=False)


def format_as_yaml(data: dict) -> str:
    """Format a report as YAML."""
    return yaml.safe_dump(data, default_flow_style=False, allow_unicode=True, sort_keys=True)


def _is_matrix(value: Any) -> bool:
    return (
        isinstance(value, list)
        and bool(value)
        and all(isinstance(row, list) and all(isinstance(x, int) for x in row) for row in value)
    )


def _render(value: Any, indent: int, lines: list[str], label: str = "") -> None:
    pad = "  " * indent
    prefix = f"{pad}{label}: " if label else pad
    if isinstance(value, dict):
        if label:
            lines.append(f"{pad}{label}:")
            indent += 1
        if not value:
            lines.append("  " * indent + "(none)")
        for key in sorted(value):
            _render(value[key], indent, lines, str(key))
    elif _is_matrix(value):
        width = max(len(str(x)) for row in value for x in row) if any(value) else 1
        lines.append(f"{pad}{label}:" if label else pad.rstrip())
        for row in value:
            lines.append("  " * (indent + 1) + "[" + " ".join(str(x).rjust(width) for x in row) + "]")
    elif isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value):
        lines.append(f"{pad}{label}:" if label else pad.rstrip())
        for k, item in enumerate(value):
            _render(item, indent + 1, lines, f"[{k}]")
    elif isinstance(value, list):
        lines.append(prefix + (", ".join(str(x) for x in value) if value else "(none)"))
    elif value is None:
        lines.append(prefix + "-")
    else:
        lines.append(prefix + str(value))


def format_as_human(data: dict) -> str:
    """Readable text derived from the JSON form of a report."""
    data = json.loads(format_as_json(data))
    status = "ok" if data.get("success") and data.get("passed", True) else "FAILED"
    lines = [f"{data.get('command', '?')}: {status}"]
    if data.get("success"):
        _render(data.get("data"), 1, lines)
    else:
        error = data.get("error") or {}
        lines.append(f"  error {error.get('code')}: {error.get('message')}")
        if error.get("details"):
            _render(error["details"], 2, lines)
    return "\n".join(lines)


class ExportService:
    """Service for rendering reports in the supported formats."""

    def __init__(self):
        self.supported_formats = list(OUTPUT_FORMATS)

    def export(self, data: dict, format: str = "json") -> str:
        """Render a report.

        Raises:
            ValueError: If format is not supported
        """
        format = format.lower()
        if format == "json":
            return format_as_json(data)
        elif format == "yaml":
            return format_as_yaml(data)
        elif format == "human":
            return format_as_human(data)
        else:
            raise ValueError(f"Unsupported export format: {format}")


# Global export service instance
export_service = ExportService()
