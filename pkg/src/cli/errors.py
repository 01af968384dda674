# src/cli/errors.py
# Defines custom application exceptions and the CLI error handler.

import json
import sys
from typing import Any, Dict, Iterable, Optional
from src.utils.logger import logger

# --- Exit codes ---
EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_DATA = 3
EXIT_FORMAT = 4
EXIT_IO = 5
EXIT_USAGE = 64

# --- Custom Application Exceptions ---

class IsoScatterError(Exception):
    """Base class for custom application errors."""
    exit_code = EXIT_INTERNAL
    message = "An internal error occurred."

    def __init__(self, message=None, exit_code=None, payload=None):
        if message is not None:
            self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        self.payload = payload # Optional additional data
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        rv = dict(self.payload or ())
        rv['error'] = self.message
        rv['type'] = type(self).__name__
        return rv


class ValidationError(IsoScatterError, ValueError):
    """Indicates invalid parameters provided by the caller."""
    exit_code = EXIT_VALIDATION
    message = "Validation failed."

    def __init__(self, message=None, flag: Optional[str] = None, payload=None):
        payload = dict(payload or ())
        if flag:
            payload['flag'] = flag
        super().__init__(message, payload=payload or None)
        self.flag = flag


class InvalidDimensionError(ValidationError):
    message = "Invalid dimension."

class DomainError(ValidationError):
    message = "Argument outside the domain of the function."

class UnsupportedOrderError(ValidationError):
    message = "Unsupported moment order."

class InvalidMarginalError(ValidationError):
    message = "Marginal order must be smaller than the dimension."

class ConfigurationError(ValidationError):
    message = "Invalid configuration."

class IndexRangeError(ValidationError, IndexError):
    message = "Index out of range."

class ShapeError(ValidationError):
    message = "Incompatible shapes."

class InfeasibleOrthogonalityError(ValidationError):
    message = "Cannot build more mutually orthogonal rows than the wave-space dimension."

class InvalidReferenceError(ValidationError):
    message = "Reference resistance must be positive."

class ModelError(ValidationError):
    message = "Invalid port model."


class InsufficientDataError(IsoScatterError, ValueError):
    """Indicates too few samples for the requested statistic."""
    exit_code = EXIT_DATA
    message = "Insufficient data."

class DegenerateEnsembleError(IsoScatterError, ArithmeticError):
    """Indicates a statistic is undefined because a variance vanished."""
    exit_code = EXIT_DATA
    message = "Degenerate ensemble: variance is zero."


class TouchstoneParseError(IsoScatterError, ValueError):
    """Indicates a malformed Touchstone file; carries the offending line number."""
    exit_code = EXIT_FORMAT
    message = "Malformed Touchstone data."

    def __init__(self, message=None, line_number: Optional[int] = None, source: Optional[str] = None):
        self.line_number = line_number
        self.source = source
        location = ""
        if source:
            location += f"{source}"
        if line_number is not None:
            location += f"{':' if location else 'line '}{line_number}"
        text = message or self.message
        payload = {'line': line_number, 'source': source}
        super().__init__(f"{location}: {text}" if location else text, payload=payload)

class AlignmentError(IsoScatterError, ValueError):
    """Indicates stir states that do not share a frequency grid."""
    exit_code = EXIT_FORMAT
    message = "Stir states do not share a common frequency grid."

    def __init__(self, message=None, frequencies: Iterable[float] = ()):
        self.frequencies = sorted(set(float(f) for f in frequencies))
        shown = ", ".join(f"{f:g}" for f in self.frequencies[:10])
        more = "" if len(self.frequencies) <= 10 else f" (+{len(self.frequencies) - 10} more)"
        text = message or self.message
        if self.frequencies:
            text = f"{text} Offending frequencies (Hz): {shown}{more}"
        super().__init__(text, payload={'frequencies': self.frequencies})

class UnsupportedPortCountError(IsoScatterError, ValueError):
    exit_code = EXIT_FORMAT
    message = "Unsupported port count."


class UsageError(IsoScatterError):
    """Indicates an unknown subcommand or malformed command-line flags."""
    exit_code = EXIT_USAGE
    message = "Invalid command line."


class OutputError(IsoScatterError, OSError):
    """Indicates a failure reading or writing run artifacts."""
    exit_code = EXIT_IO
    message = "I/O error."

class ServiceError(IsoScatterError):
    """Indicates a general error within a service layer operation."""
    exit_code = EXIT_INTERNAL
    message = "A service error occurred."


# --- CLI Error Handler ---

def handle_error(error: BaseException, stream=None) -> int:
    """
    Logs an exception, writes a one-line JSON error object to stderr and returns the exit code.
    """
    stream = stream or sys.stderr
    if isinstance(error, IsoScatterError):
        logger.warning(f"Error handled: {type(error).__name__} - Exit: {error.exit_code} - Msg: {error.message}")
        body = error.to_dict()
        code = error.exit_code
    elif isinstance(error, OSError):
        logger.error(f"I/O failure: {error}")
        body = {'error': str(error), 'type': 'OutputError'}
        code = EXIT_IO
    else:
        logger.error(f"Unhandled exception: {error}", exc_info=True)
        body = {'error': "An unexpected internal error occurred.", 'type': type(error).__name__}
        code = EXIT_INTERNAL
    stream.write(json.dumps(body, default=str) + "\n")
    return code
