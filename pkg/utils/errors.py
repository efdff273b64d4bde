"""
Error Types Module
Typed failures raised by the numerical core and caught by the orchestrators
"""

from typing import List, Optional


class LTLSError(Exception):
    """Base class for every failure the tool reports"""


class DomainError(LTLSError, ValueError):
    """An argument lies outside the domain of the operation"""


class NotIntegrableError(LTLSError):
    """A kernel has no finite integral"""


class DegenerateWeightsError(LTLSError):
    """A trimming weight vector sums to zero"""


class SingularDesignError(LTLSError):
    """A regression cross-moment or regressor variance is zero"""


class DegenerateStudentizationError(LTLSError):
    """The variance quadratic form of a t-statistic is not positive"""


class BandwidthError(LTLSError):
    """The spectral bandwidth leaves too few periodogram ordinates"""


class IngestionError(LTLSError):
    """A data file could not be turned into a valid dataset"""

    def __init__(self, message: str, rows: Optional[List[int]] = None):
        self.rows = list(rows or [])
        if self.rows:
            shown = ', '.join(str(r) for r in self.rows[:10])
            more = f" (+{len(self.rows) - 10} more)" if len(self.rows) > 10 else ""
            message = f"{message} [rows: {shown}{more}]"
        super().__init__(message)


class ConfigError(LTLSError):
    """A run configuration value is invalid"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
