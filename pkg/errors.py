"""Exception hierarchy shared by the numerical modules and the CLI."""

from __future__ import annotations

from typing import Any


class ArxCvError(Exception):
    """Base class for every error raised on purpose by this package."""

    exit_code = 1


class InvalidArgumentError(ArxCvError, ValueError):
    exit_code = 2


class ConfigError(ArxCvError):
    exit_code = 2


class InfeasibleSchemeError(ArxCvError):
    """A fold plan cannot be built or used for the requested series length."""

    def __init__(self, message: str, fold: int | None = None):
        super().__init__(message)
        self.fold = fold


class NumericalFailureError(ArxCvError):
    """A factorization, quadrature or optimizer step failed.

    ``estimate`` carries the best value available when the failure was
    detected (for example a quadrature result with a large error bound).
    """

    exit_code = 3

    def __init__(
        self,
        message: str,
        estimate: float | None = None,
        diagnostics: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.estimate = estimate
        self.diagnostics = diagnostics or {}
