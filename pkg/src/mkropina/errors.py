"""Exception types shared across the package."""


class MKropinaError(Exception):
    """Base class for all package errors."""


class DimensionError(MKropinaError):
    """Vector/matrix sizes or index partitions are inconsistent."""


class DomainError(MKropinaError):
    """Evaluation requested outside the admissible cone or parameter domain."""


class PreconditionError(MKropinaError):
    """An operation's stated precondition does not hold for the given input."""


class DegenerateFlagError(MKropinaError):
    """Flag vectors are (numerically) linearly dependent."""


class ScenarioError(MKropinaError):
    """Scenario document failed parsing or eager validation."""
