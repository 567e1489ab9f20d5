from typing import Optional


class DataError(ValueError):
    """Bad input data. 'row' is the 1-based data row of the offending record, if any."""

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f"Row {row}: {message}"
        super().__init__(message)
        self.row = row


class InvalidInstanceError(DataError):
    pass


class DimensionMismatchError(ValueError):
    pass


class MissingEdgeError(ValueError):
    pass


class InvalidPartitionError(ValueError):
    pass


class InvalidSwapError(ValueError):
    pass


class PruferDecodeError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class SizeGuardError(ValueError):
    pass


class InfeasibleError(RuntimeError):
    """The best tree found violates the travel distance budget."""

    def __init__(self, z: float, tau: float):
        super().__init__(f"Best objective {z} exceeds the budget {tau}.")
        self.z = z
        self.tau = tau
