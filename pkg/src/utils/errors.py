"""
📡 Wiretap LBB - Error Handling
===============================

Exception hierarchy for the toolkit plus a detailed error record used by the
command-line front end to report failures with context and a suggested fix.
"""

import logging
import traceback
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, Optional

from src.utils import config

logger = logging.getLogger(__name__)


class WiretapError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = config.EXIT_NUMERIC_ERROR
    severity = "high"

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None,
                 suggested_fix: str = ""):
        super().__init__(message)
        self.context: Dict[str, Any] = dict(context or {})
        self.suggested_fix = suggested_fix


class DomainError(WiretapError, ValueError):
    """An argument lies outside the domain of the operation."""

    severity = "medium"


class DegenerateGeometry(WiretapError):
    """The main channel is (numerically) parallel or orthogonal to Eve's LOS direction.

    ``component`` is ``"zf"`` when the projection onto the complement of Eve's
    LOS vanishes and ``"perp"`` when the projection onto it vanishes.
    """

    def __init__(self, component: str, norm: float, tolerance: float):
        super().__init__(
            f"main channel has no {component} component "
            f"(projection norm {norm:.3e} <= tolerance {tolerance:.3e})",
            context={"component": component, "norm": norm, "tolerance": tolerance},
            suggested_fix="redraw the main channel or enable the MRT fallback",
        )
        self.component = component


class DegenerateAnchors(WiretapError):
    """The TDOA Fisher matrix is singular at the evaluated location."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(
            message,
            context=context,
            suggested_fix="use at least three anchors seen under distinct bearings",
        )


class ConfigError(WiretapError):
    """A scenario file could not be parsed or failed schema validation."""

    exit_code = config.EXIT_CONFIG_ERROR
    severity = "medium"


class ValidationFailure(WiretapError):
    """One or more validation checks did not hold."""

    exit_code = config.EXIT_VALIDATION_FAILURE
    severity = "critical"


@dataclass
class ErrorReport:
    """Detailed error information with context."""
    error_type: str
    error_message: str
    severity: str  # low, medium, high, critical
    exit_code: int
    context: Dict[str, Any] = field(default_factory=dict)
    suggested_fix: str = ""
    timestamp: datetime = field(default_factory=datetime.now)
    stack_trace: str = ""


def describe_error(error: BaseException) -> ErrorReport:
    """Turn any exception into an ErrorReport; unknown exceptions count as numeric failures."""
    if isinstance(error, WiretapError):
        return ErrorReport(
            error_type=type(error).__name__,
            error_message=str(error),
            severity=error.severity,
            exit_code=error.exit_code,
            context=error.context,
            suggested_fix=error.suggested_fix,
            stack_trace=traceback.format_exc(),
        )
    return ErrorReport(
        error_type=type(error).__name__,
        error_message=str(error),
        severity="critical",
        exit_code=config.EXIT_NUMERIC_ERROR,
        stack_trace=traceback.format_exc(),
    )


def log_error_report(report: ErrorReport) -> None:
    """Log detailed error information."""
    logger.error("🚨 Detailed Error Report:")
    logger.error(f"   Type: {report.error_type}")
    logger.error(f"   Message: {report.error_message}")
    logger.error(f"   Severity: {report.severity}")
    for key, value in report.context.items():
        logger.error(f"   {key}: {value}")
    if report.suggested_fix:
        logger.error(f"   Suggested Fix: {report.suggested_fix}")

    if report.severity == "critical" and report.stack_trace:
        logger.debug(f"   Stack Trace:\n{report.stack_trace}")
