from typing import Optional

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_CONFIG_ERROR = 3
EXIT_NOT_CONVERGED = 4


class FairkitException(Exception):
    """Base exception for all Fairkit specific errors.

    Attributes:
        message (str): Human readable description.
        code (str): Stable snake_case identifier, used in structured logs.
        exit_code (int): Process exit code used by the CLI.
    """

    code = "fairkit_error"
    exit_code = 1

    def __init__(self, message: str = "Fairkit operation failed."):
        self.message = message
        super().__init__(self.message)


class InputError(FairkitException):
    """Exception raised when input data violates a documented invariant."""

    code = "input_error"
    exit_code = EXIT_INPUT_ERROR

    def __init__(
        self,
        message: str = "Invalid input data.",
        column: Optional[str] = None,
        row: Optional[int] = None,
    ):
        self.column = column
        self.row = row
        super().__init__(message)


class SchemaError(InputError):
    """Exception raised when a required column is missing or duplicated."""

    code = "schema_error"

    def __init__(self, message: str = "Table schema does not match.", column=None):
        super().__init__(message, column=column)


class ParseError(InputError):
    """Exception raised when the CSV text cannot be parsed."""

    code = "parse_error"

    def __init__(self, message: str = "Could not parse CSV input.", row=None):
        super().__init__(message, row=row)


class DataValueError(InputError):
    """Exception raised when a cell holds a value outside its column's domain."""

    code = "value_error"


class MissingValueError(InputError):
    """Exception raised when a cell is empty. Missing values are never imputed."""

    code = "missing_value"


class ColumnTypeError(InputError):
    """Exception raised when a column has a type the operation cannot use."""

    code = "type_error"


class ShapeError(InputError):
    """Exception raised when parallel arrays differ in length."""

    code = "shape_error"


class WeightError(InputError):
    """Exception raised when sample weights are negative, non-finite or all zero."""

    code = "weight_error"


class DegenerateGroupError(InputError):
    """Exception raised when a group lacks a class needed to compute a rate."""

    code = "degenerate_group"

    def __init__(self, group, message: Optional[str] = None):
        self.group = tuple(group)
        super().__init__(
            message
            or f"Group {self.group} needs at least one positive and one negative example."
        )


class FitError(InputError):
    """Exception raised when a mitigation cannot be fitted on the given data."""

    code = "fit_error"


class MomentError(InputError):
    """Exception raised when a moment constraint has an empty conditioning cell."""

    code = "moment_error"


class PredictionError(InputError):
    """Exception raised when a fitted artifact cannot score the given rows."""

    code = "prediction_error"


class AggregationError(InputError):
    """Exception raised when no defined group value is available to aggregate."""

    code = "aggregation_error"


class UndefinedValueError(AggregationError):
    """Exception raised by the ``raise`` policy when a needed value is undefined."""

    code = "undefined_value"


class ConfigError(FairkitException):
    """Exception raised for invalid names, parameters or configuration documents."""

    code = "config_error"
    exit_code = EXIT_CONFIG_ERROR


class FormatError(ConfigError):
    """Exception raised when a report cannot be rendered in the requested format."""

    code = "format_error"


class LearnerNotFound(ConfigError):
    """Exception raised when the requested base learner is not registered."""

    code = "learner_not_found"

    def __init__(self, kind: str):
        super().__init__(
            f"Learner '{kind}' not found. Use 'fairkit list' to see available ones."
        )


class ConvergenceWarningError(FairkitException):
    """Exception raised under ``--strict`` when the solver did not converge."""

    code = "not_converged"
    exit_code = EXIT_NOT_CONVERGED

    def __init__(self, final_gap: float, iterations: int):
        self.final_gap = final_gap
        self.iterations = iterations
        super().__init__(
            f"Solver stopped after {iterations} iterations with duality gap {final_gap!r}."
        )


class OutputError(FairkitException):
    """Exception raised when there is a problem writing an output file."""

    code = "output_error"
    exit_code = EXIT_INPUT_ERROR

    def __init__(self, message="Error writing output file."):
        super().__init__(message)

