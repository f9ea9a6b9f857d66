from dataclasses import dataclass
from typing import Iterable, Optional

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNREACHABLE = 3


class GridSKGError(Exception):
    """Base class for every error raised by gridskg."""

    exit_code: int = EXIT_INPUT
    error_type: str = "gridskg_error"


class InvalidInputError(GridSKGError, ValueError):
    error_type = "invalid_input"


class ParseError(GridSKGError):
    """A record or document could not be parsed.

    Args:
        message: What went wrong
        line: 1-based line number of the offending record, when known
    """

    error_type = "parse_error"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IntegrityError(GridSKGError):
    """A reference points at something that does not exist."""

    error_type = "referential_integrity"

    def __init__(self, message: str, missing_id: Optional[str] = None):
        self.missing_id = missing_id
        super().__init__(message)


class UnsupportedFeatureError(GridSKGError):
    error_type = "unsupported_feature"

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataIntegrityError(GridSKGError):
    """A knowledge-graph subject is missing a required predicate."""

    error_type = "data_integrity"

    def __init__(self, message: str, subject: Optional[str] = None):
        self.subject = subject
        super().__init__(message)


class NoEndpointError(GridSKGError):
    error_type = "no_endpoint"


class UnreachableError(GridSKGError):
    """The routing target cannot be reached from the origin."""

    exit_code = EXIT_UNREACHABLE
    error_type = "unreachable"

    def __init__(self, message: str, explored_cells: int = 0):
        self.explored_cells = explored_cells
        super().__init__(message)


@dataclass
class ErrorReport:
    message: str
    error_type: str
    exit_code: int
    is_retriable: bool = False


def handle_error(error: BaseException) -> ErrorReport:
    """Turn any exception into a report the CLI can print and exit with.

    Args:
        error: The exception that stopped a command

    Returns:
        ErrorReport with message, type and exit code
    """
    if isinstance(error, GridSKGError):
        return ErrorReport(
            message=str(error),
            error_type=error.error_type,
            exit_code=error.exit_code,
        )
    if isinstance(error, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return ErrorReport(
            message=str(error), error_type="io_error", exit_code=EXIT_INPUT
        )
    if isinstance(error, ValueError):
        return ErrorReport(
            message=str(error), error_type="invalid_input", exit_code=EXIT_INPUT
        )
    return ErrorReport(
        message=str(error) or type(error).__name__,
        error_type="internal_error",
        exit_code=1,
    )


def format_validation_error(error: Exception) -> str:
    """Flatten a pydantic ValidationError into a single readable line."""
    errors: Iterable[dict] = getattr(error, "errors", lambda: [])()
    parts = []
    for item in errors:
        location = ".".join(str(p) for p in item.get("loc", ()))
        parts.append(f"{location}: {item.get('msg')}" if location else item["msg"])
    return "; ".join(parts) or str(error)
