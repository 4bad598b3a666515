from typing import Optional

from constants import EXIT_INVARIANT_VIOLATION, EXIT_PRECONDITION


class AnalysisError(Exception):
    exit_code = EXIT_PRECONDITION


class PreconditionError(AnalysisError, ValueError):
    """Input or resource problem: the caller can fix it."""
    exit_code = EXIT_PRECONDITION


class InvariantViolation(AnalysisError, RuntimeError):
    """A mathematical identity that must hold did not: a bug, never a data state."""
    exit_code = EXIT_INVARIANT_VIOLATION


class PolynomialSyntaxError(PreconditionError):
    def __init__(self, message: str, line: int, column: int, source_line: Optional[str] = None):
        self.line = line
        self.column = column
        self.source_line = source_line
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownVariableError(PreconditionError):
    def __init__(self, name: str, line: int, column: int):
        self.name = name
        self.line = line
        self.column = column
        super().__init__(f"unknown variable '{name}' (line {line}, column {column})")


class NotHomogeneousError(PreconditionError):
    pass


class CoefficientFieldError(PreconditionError):
    pass


class FieldDeclarationError(PreconditionError):
    pass


class FieldMismatchError(PreconditionError):
    pass


class SingularMatrixError(PreconditionError):
    pass


class BudgetExceededError(PreconditionError):
    pass


class NotZeroDimensionalError(PreconditionError):
    pass


class NonIsolatedSingularityError(PreconditionError):
    pass


class PointNotSingularError(PreconditionError):
    pass


class ChartSearchError(PreconditionError):
    pass


class NonQuasiHomogeneousPointError(PreconditionError):
    pass


class WitnessNotFoundError(PreconditionError):
    pass


class ExpectationFileError(PreconditionError):
    pass


class CrossCheckError(InvariantViolation):
    pass


class RankDefectError(InvariantViolation):
    pass


class LiftError(InvariantViolation):
    pass


class ProportionalityError(InvariantViolation):
    pass


class ResolutionIdentityError(InvariantViolation):
    pass
