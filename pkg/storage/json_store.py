"""
Document storage for tworep.
Reads and writes UTF-8 JSON documents for categories, representations and reports.
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Mapping, Optional

from core.exceptions import InputFormatError, InvalidInputError
from services.based_cat import BasedCategory
from services.matrep import MatrixRep


logger = logging.getLogger(__name__)


class JsonStore:
    """File-backed access to tworep documents.

    Relative paths resolve against `base_dir` (the working directory by default).
    """

    def __init__(self, base_dir: Optional[str] = None):
        self._base_dir = Path(base_dir) if base_dir else None

    @property
    def base_dir(self) -> Path:
        return self._base_dir or Path.cwd()

    def _resolve(self, path: str | os.PathLike, relative_to: Optional[Path] = None) -> Path:
        path = Path(path)
        if path.is_absolute():
            return path
        return (relative_to or self.base_dir) / path

    def load_json(self, path: str | os.PathLike, relative_to: Optional[Path] = None) -> Any:
        """Parse a JSON file.

        Raises:
            InputFormatError: file missing or not valid JSON (with line and column)
        """
        resolved = self._resolve(path, relative_to)
        try:
            text = resolved.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise InputFormatError(f"No such file: {resolved}", details={"path": str(resolved)}) from None
        except (OSError, UnicodeDecodeError) as e:
            raise InputFormatError(f"Cannot read {resolved}: {e}", details={"path": str(resolved)}) from None
        return self.parse(text, str(resolved))

    @staticmethod
    def parse(text: str, source: str = "<input>") -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            logger.warning(f"Malformed JSON in {source} at line {e.lineno}, column {e.colno}")
            raise InputFormatError(
                f"Malformed JSON in {source}: {e.msg}",
                details={"path": source, "line": e.lineno, "column": e.colno},
            ) from None

    def save_json(self, path: str | os.PathLike, data: Any) -> Path:
        resolved = self._resolve(path)
        if resolved.parent and not resolved.parent.exists():
            resolved.parent.mkdir(parents=True, exist_ok=True)
        resolved.write_text(
            json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        logger.debug(f"Wrote {resolved}")
        return resolved

    @staticmethod
    def unwrap(data: Any, key: str) -> Any:
        """Accept either a bare document or a report envelope carrying it under data[key]."""
        if isinstance(data, Mapping) and "success" in data and isinstance(data.get("data"), Mapping):
            if key not in data["data"]:
                raise InvalidInputError(f"Report does not carry a {key}", details={"command": data.get("command")})
            return data["data"][key]
        return data

    def load_category(self, path: str | os.PathLike) -> BasedCategory:
        return self.category_from(self.load_json(path))

    @classmethod
    def category_from(cls, data: Any) -> BasedCategory:
        data = cls.unwrap(data, "category")
        if not isinstance(data, Mapping):
            raise InvalidInputError("Category document must be a JSON object")
        return BasedCategory.from_dict(data)

    def load_rep(self, path: str | os.PathLike, category: Optional[BasedCategory] = None) -> MatrixRep:
        """Load a representation; its "category" is inline or a path relative to the file."""
        resolved = self._resolve(path)
        data = self.unwrap(self.load_json(resolved), "representation")
        if not isinstance(data, Mapping):
            raise InvalidInputError("Representation document must be a JSON object")
        if category is None:
            reference = data.get("category")
            if isinstance(reference, Mapping):
                category = self.category_from(reference)
            elif isinstance(reference, str):
                category = self.category_from(self.load_json(reference, relative_to=resolved.parent))
            else:
                raise InvalidInputError(
                    "Representation document needs a category (inline object or path)",
                    details={"path": str(resolved)},
                )
        return MatrixRep.from_dict(data, category)


# Global store instance
json_store = JsonStore()
