"""Exception types shared across the package.

Data problems raise subclasses of :class:`RiskrankError`; the CLI maps them
to exit code 1. Usage problems (bad flags) are argparse's business and exit 2.
"""


class RiskrankError(Exception):
    """Base class for all errors raised by this package."""


class DimError(RiskrankError):
    """Vector or matrix dimensions do not agree."""


class ZeroNormError(RiskrankError):
    """An operation required a nonzero vector norm."""


class ParamError(RiskrankError):
    """A parameter is outside its documented domain."""


class DegenerateError(RiskrankError):
    """A metric's denominator vanished (e.g. Bray-Curtis on opposite vectors)."""


class SingularError(RiskrankError):
    """Exact inversion was requested for a numerically singular matrix."""


class ZeroVarianceError(RiskrankError):
    """A test statistic is undefined because a sample has zero variance."""


class ParseError(RiskrankError):
    """A persistent file could not be parsed; message carries the location."""


class SchemaError(RiskrankError):
    """A parsed file violates its schema (wrong dim, missing field, ...)."""


class RangeError(RiskrankError):
    """A parsed value is outside its allowed range; message carries row/column."""


class RemoteError(RiskrankError):
    """The remote embedding endpoint answered with a non-success status."""
