"""
anyonwalk Exception Hierarchy

All exceptions raised by the package inherit from AnyonWalkError so the CLI can
catch them at one boundary and map them to exit codes:

    ConfigurationError  -> exit 2 (invalid run configuration)
    everything else     -> exit 1 (validation or simulation failure)
"""

from typing import Any, Dict, List, Optional


class AnyonWalkError(Exception):
    """
    Base exception for all anyonwalk errors.

    Attributes:
        message: Human-readable error description
        details: Optional dictionary with additional context
        suggestion: Optional suggestion for fixing the error
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        self.message = message
        self.details = details or {}
        self.suggestion = suggestion
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        """Format the exception message with details and suggestion."""
        parts = [self.message]
        if self.details:
            details_str = ", ".join(f"{k}={v!r}" for k, v in self.details.items())
            parts.append(f"[{details_str}]")
        if self.suggestion:
            parts.append(f"Suggestion: {self.suggestion}")
        return " ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to a dictionary for JSON serialization."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "details": self.details,
            "suggestion": self.suggestion,
        }


# =============================================================================
# Configuration Errors
# =============================================================================


class ConfigurationError(AnyonWalkError):
    """
    Raised when a run configuration is invalid.

    Covers malformed YAML files, unknown keys, out-of-range values and
    incompatible combinations of options.
    """

    def __init__(
        self,
        message: str,
        config_path: Optional[str] = None,
        invalid_key: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        details = details or {}
        if config_path:
            details["config_path"] = config_path
        if invalid_key:
            details["invalid_key"] = invalid_key
        super().__init__(message, details, suggestion)
        self.config_path = config_path
        self.invalid_key = invalid_key


class InvalidConfigValueError(ConfigurationError):
    """Raised when a single configuration value is invalid."""

    def __init__(
        self,
        key: str,
        value: Any,
        expected_type: Optional[str] = None,
        allowed_values: Optional[List[Any]] = None,
        reason: Optional[str] = None,
    ) -> None:
        details: Dict[str, Any] = {"key": key, "value": value}
        if expected_type:
            details["expected_type"] = expected_type
        if allowed_values:
            details["allowed_values"] = allowed_values
        if reason:
            details["reason"] = reason

        suggestion = None
        if allowed_values:
            suggestion = f"Valid values are: {', '.join(str(v) for v in allowed_values)}"
        elif expected_type:
            suggestion = f"Expected a value of type: {expected_type}"

        super().__init__(
            f"Invalid configuration value for '{key}'",
            invalid_key=key,
            details=details,
            suggestion=suggestion,
        )
        self.key = key
        self.value = value


class InvalidLevelError(InvalidConfigValueError):
    """Raised when an SU(2)_k level is not a positive integer or infinity."""

    def __init__(self, value: Any) -> None:
        super().__init__(
            "level",
            value,
            expected_type="positive integer or 'inf'",
            reason="SU(2)_k levels start at k=1",
        )


class RingSizeError(InvalidConfigValueError):
    """Raised when the ring of sites is too small for the requested computation."""

    def __init__(self, n_sites: int, minimum: int, reason: str) -> None:
        super().__init__(
            "n_sites",
            n_sites,
            expected_type=f"integer >= {minimum}",
            reason=reason,
        )
        self.minimum = minimum


# =============================================================================
# Braid Errors
# =============================================================================


class BraidWordError(AnyonWalkError):
    """Raised when a braid word is malformed."""

    def __init__(
        self,
        message: str,
        strand_count: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        details = details or {}
        if strand_count is not None:
            details["strand_count"] = strand_count
        super().__init__(message, details, suggestion)


class LetterBudgetError(BraidWordError):
    """Raised when a word is too long for exhaustive state enumeration."""

    def __init__(self, letters: int, budget: int) -> None:
        super().__init__(
            f"Braid word has {letters} letters, state sum is limited to {budget}",
            details={"letters": letters, "budget": budget},
            suggestion="Split the word or restrict it to the strands it touches",
        )
        self.letters = letters
        self.budget = budget


# =============================================================================
# Simulation Errors
# =============================================================================


class SimulationError(AnyonWalkError):
    """Base exception for failures inside an evolution engine."""

    def __init__(
        self,
        message: str,
        mode: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        details = details or {}
        if mode:
            details["mode"] = mode
        super().__init__(message, details, suggestion)
        self.mode = mode


class TraceDriftError(SimulationError):
    """Raised when a superoperator step fails to preserve the trace."""

    def __init__(self, step: int, trace: complex, tolerance: float) -> None:
        super().__init__(
            f"Trace drifted to {trace.real:.3e}{trace.imag:+.3e}j after step {step}",
            mode="exact",
            details={"step": step, "tolerance": tolerance},
            suggestion="Check the coefficient wiring of the superoperator bands",
        )
        self.step = step
        self.trace = trace


class SingularNormalizationError(SimulationError):
    """Raised when the circulant normalization has a vanishing Fourier eigenvalue."""

    def __init__(self, min_nu: float, mode_index: int, n_sites: int) -> None:
        super().__init__(
            f"Normalization eigenvalue {min_nu:.3e} at mode {mode_index} is singular",
            mode="circulant",
            details={"min_nu": min_nu, "mode": mode_index, "n_sites": n_sites},
            suggestion="Pass an explicit Tikhonov epsilon (--regularize 1e-8)",
        )
        self.min_nu = min_nu
        self.mode_index = mode_index


# =============================================================================
# Analysis Errors
# =============================================================================


class AnalysisError(AnyonWalkError):
    """Base exception for variance analysis and fitting failures."""


class DistributionError(AnalysisError):
    """Raised when a probability distribution is not normalized."""

    def __init__(self, total: float, tolerance: float) -> None:
        super().__init__(
            f"Distribution sums to {total!r}, expected 1",
            details={"tolerance": tolerance},
        )
        self.total = total


class FitError(AnalysisError):
    """Raised when a fit window holds too few distinct points."""

    def __init__(self, points: int, required: int, window: Any = None) -> None:
        super().__init__(
            f"Fit window holds {points} distinct points, {required} required",
            details={"window": window},
            suggestion="Widen the window or run more iterations",
        )


# =============================================================================
# File Operation Errors
# =============================================================================


class FileOperationError(AnyonWalkError):
    """Base exception for file operation failures."""

    def __init__(
        self,
        message: str,
        file_path: str,
        operation: str,
        details: Optional[Dict[str, Any]] = None,
        suggestion: Optional[str] = None,
    ) -> None:
        details = details or {}
        details["file_path"] = file_path
        details["operation"] = operation
        super().__init__(message, details, suggestion)
        self.file_path = file_path
        self.operation = operation


class FileReadError(FileOperationError):
    """Raised when an input file cannot be read or parsed."""

    def __init__(
        self,
        file_path: str,
        reason: Optional[str] = None,
        original_error: Optional[Exception] = None,
    ) -> None:
        details = {}
        if reason:
            details["reason"] = reason
        if original_error:
            details["original_error"] = str(original_error)
        super().__init__(
            f"Failed to read file: {file_path}",
            file_path=file_path,
            operation="read",
            details=details,
            suggestion="Check the path and that the file was written by anyonwalk",
        )
        self.original_error = original_error


class FileWriteError(FileOperationError):
    """Raised when an artifact cannot be written."""

    def __init__(
        self,
        file_path: str,
        reason: Optional[str] = None,
        original_error: Optional[Exception] = None,
    ) -> None:
        details = {}
        if reason:
            details["reason"] = reason
        if original_error:
            details["original_error"] = str(original_error)
        super().__init__(
            f"Failed to write file: {file_path}",
            file_path=file_path,
            operation="write",
            details=details,
            suggestion="Check directory permissions and disk space",
        )
        self.original_error = original_error


# =============================================================================
# Utility Functions
# =============================================================================


def wrap_exception(
    error: Exception, context: str, file_path: Optional[str] = None
) -> AnyonWalkError:
    """
    Wrap a foreign exception in the matching AnyonWalkError subclass.

    Args:
        error: The original exception
        context: Short description of what was being done
        file_path: Optional file involved in the failure

    Returns:
        An AnyonWalkError carrying the original message
    """
    if isinstance(error, AnyonWalkError):
        return error
    if isinstance(error, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return FileReadError(file_path or str(error), reason=context, original_error=error)
    if isinstance(error, OSError) and file_path:
        return FileWriteError(file_path, reason=context, original_error=error)
    if isinstance(error, ValueError):
        return ConfigurationError(f"{context}: {error}", config_path=file_path)
    return AnyonWalkError(
        f"{context}: {error}", details={"error_type": type(error).__name__}
    )
