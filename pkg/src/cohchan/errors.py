"""Exception hierarchy shared by all cohchan modules."""


class CohchanError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CohchanError, ValueError):
    """Invalid argument, malformed matrix or bad configuration."""


class DimensionLimitError(CohchanError):
    """Requested system exceeds the configured maximum qubit count."""


class EnumerationLimitError(CohchanError):
    """Pauli-string enumeration would exceed the configured cap."""


class NumericalConsistencyError(CohchanError, ArithmeticError):
    """A quantity that must be non-negative came out clearly negative."""


class SingularParameterError(CohchanError, ValueError):
    """Formula is undefined at the requested parameter value."""
