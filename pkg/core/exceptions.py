"""
This module defines custom, reusable exception classes
to ensure consistent error messages and process exit codes.
"""

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2


class SpinLabException(Exception):
    """Base exception class to ensure consistent error reporting."""

    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code
        self.detail = detail


class ConfigurationException(SpinLabException):
    """Exception for invalid run configuration."""

    def __init__(self, detail: str = "Invalid configuration"):
        super().__init__(exit_code=EXIT_CONFIG_ERROR, detail=detail)


class InadmissibleKillingNumberException(SpinLabException):
    """Exception for a Killing number that the model space cannot carry."""

    def __init__(self,
                 detail: str = "Killing number is not admissible on this space"):
        super().__init__(exit_code=EXIT_CONFIG_ERROR, detail=detail)


class SpaceMismatchException(SpinLabException):
    """Exception for fields, points or vector fields living on different spaces."""

    def __init__(self, detail: str = "Objects belong to different model spaces"):
        super().__init__(exit_code=EXIT_CONFIG_ERROR, detail=detail)


class DimensionMismatchException(SpinLabException):
    """Exception for matrices or fields at incompatible representation levels."""

    def __init__(self, detail: str = "Representation dimensions do not match"):
        super().__init__(exit_code=EXIT_FAILURE, detail=detail)


class DecompositionException(SpinLabException):
    """Exception for a tensor decomposition that contradicts Clebsch-Gordan."""

    def __init__(
            self,
            detail: str = "Casimir multiplicities do not match the expected blocks"):
        super().__init__(exit_code=EXIT_FAILURE, detail=detail)


class ReportWriteException(SpinLabException):
    """Exception for a report that cannot be written."""

    def __init__(self, detail: str = "Unable to write report"):
        super().__init__(exit_code=EXIT_FAILURE, detail=detail)
