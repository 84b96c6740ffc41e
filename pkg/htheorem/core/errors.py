# htheorem/core/errors.py
"""
Error definitions shared by every layer.
Each error knows the process exit code the CLI should report for it.
"""

from dataclasses import dataclass
from enum import IntEnum


class ExitCode(IntEnum):
    """Stable exit-status contract of the command-line tool."""

    OK = 0
    USAGE = 1
    VERDICT_FAILED = 2
    NON_UNITAL = 3


class HTheoremError(Exception):
    """
    Base toolkit error.
    Used to ensure consistent diagnostics and exit codes.
    """

    exit_code: ExitCode = ExitCode.USAGE

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ShapeError(HTheoremError):
    """Operand dimensions do not fit the operation."""


@dataclass(frozen=True)
class Violation:
    check: str
    magnitude: float
    limit: float

    def describe(self) -> str:
        return f"{self.check}: {self.magnitude:.3g} (limit {self.limit:.3g})"


class ValidationError(HTheoremError):
    """One or more numerical invariants failed."""

    def __init__(self, subject: str, violations: list[Violation]):
        self.subject = subject
        self.violations = tuple(violations)
        details = "; ".join(v.describe() for v in self.violations)
        super().__init__(f"{subject} failed validation: {details}")

    @property
    def checks(self) -> list[str]:
        return [v.check for v in self.violations]


class UnitarityError(ValidationError):
    """Operator is not unitary within tolerance."""

    def __init__(self, defect: float, limit: float, subject: str = "operator"):
        super().__init__(subject, [Violation("unitarity violation", defect, limit)])


class DensityError(ValidationError):
    """Matrix is not a valid density matrix."""


class ConvergenceError(HTheoremError):
    """Iterative solver stopped before reaching its tolerance."""


class DocumentError(HTheoremError):
    """Malformed JSON input or matrix document."""


class ConfigError(HTheoremError):
    """Invalid option or scenario parameter."""
