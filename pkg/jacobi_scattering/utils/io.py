"""
JSON and CSV input/output for measures, scattering data and Jacobi parameters.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from ..core.harmonics import JacobiScatteringError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class InputError(JacobiScatteringError):
    """Raised when an input file cannot be read or parsed."""

    def __init__(self, message: str, path: Optional[PathLike] = None, lineno: int = 0, colno: int = 0):
        self.path = str(path) if path is not None else None
        self.lineno = lineno
        self.colno = colno
        location = self.path or "<input>"
        if lineno:
            location = f"{location}:{lineno}:{colno}"
        super().__init__(f"{location}: {message}")


def read_json(path: PathLike) -> Dict[str, Any]:
    """
    Load a JSON object from a file.

    Args:
        path: File to read

    Returns:
        The decoded object

    Raises:
        InputError: If the file is missing, unreadable, malformed or not an object
    """
    file_path = Path(path)
    if not file_path.exists():
        raise InputError("file not found", file_path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read file: {e}", file_path)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(e.msg, file_path, e.lineno, e.colno)
    if not isinstance(payload, dict):
        raise InputError("expected a JSON object at top level", file_path, 1, 1)
    logger.debug(f"Read {file_path} ({len(text)} bytes)")
    return payload


def write_json(payload: Dict[str, Any], path: Optional[PathLike] = None) -> None:
    """Write a JSON object to ``path``, or to stdout when no path is given."""
    text = json.dumps(payload, indent=2)
    if path is None:
        sys.stdout.write(text + "\n")
        return
    Path(path).write_text(text + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")


def write_frame(frame: pd.DataFrame, path: Optional[PathLike] = None, fmt: str = "csv") -> None:
    """
    Write a table as CSV or as a JSON list of records.

    Args:
        frame: Table to write
        path: Destination, stdout when None
        fmt: "csv" or "json"
    """
    if fmt == "csv":
        text = frame.to_csv(index=False)
    else:
        text = frame.to_json(orient="records", indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(frame)} rows to {path}")
