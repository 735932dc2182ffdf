"""
Error hierarchy for pathhom.

Every error carries a machine-readable ``error_code`` and the exit code the
CLI returns for it. ``to_dict()`` renders the same envelope for every error:

    {"status": "error", "error_code": "...", "message": "...", ...details}
"""
from typing import Any, Dict, Optional


class PathHomError(Exception):
    error_code = "PATHHOM_ERROR"
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None, error_code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}
        if error_code:
            self.error_code = error_code

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": "error",
            "error_code": self.error_code,
            "message": self.message,
            **self.details,
        }


class UsageError(PathHomError):
    """Invalid flags or parameters, detected before any computation."""
    error_code = "USAGE_ERROR"
    exit_code = 1


class CensusLimitError(UsageError):
    error_code = "CENSUS_SIZE_OVER_LIMIT"


class InputError(PathHomError):
    """Missing, unreadable or malformed input files."""
    error_code = "INPUT_ERROR"
    exit_code = 2


class MalformedLineError(InputError):
    error_code = "MALFORMED_LINE"

    def __init__(self, path: str, line_number: int, line: str, reason: str):
        super().__init__(
            f"{path}:{line_number}: {reason}: {line!r}",
            details={"path": path, "line_number": line_number},
        )
        self.line_number = line_number


class DatasetError(InputError):
    error_code = "DATASET_ERROR"


class OutputError(InputError):
    error_code = "OUTPUT_UNWRITABLE"


class InconsistentSystemError(PathHomError):
    """
    Raised by exact solves whose right-hand side leaves the column span.

    Inside the homology pipeline this always signals a bug: invariant chains
    map into the previous invariant space.
    """
    error_code = "INCONSISTENT_SYSTEM"
    exit_code = 3

    def __init__(self, column: int):
        super().__init__(
            f"right-hand side column {column} is not in the column span",
            details={"column": column},
        )
        self.column = column
