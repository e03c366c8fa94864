"""Exception hierarchy shared by every module of the package."""

__all__ = [
    "QSeriesError",
    "ZeroDivisorError",
    "DivergentProductError",
    "ZeroFactorError",
    "PoleError",
    "ZeroDenominatorError",
    "NonTruncatableError",
    "DivisibilityError",
    "RangeError",
    "PrecisionError",
    "TailEstimateUnreliable",
    "MismatchError",
]


class QSeriesError(Exception):
    """Base class for all errors raised by qmultisum."""


class ZeroDivisorError(QSeriesError, ZeroDivisionError):
    """Division by a series that is zero up to its truncation order."""


class DivergentProductError(QSeriesError):
    """An infinite q-product whose factors do not tend to 1."""


class ZeroFactorError(QSeriesError):
    """An infinite q-product containing the factor (1 - 1)."""


class PoleError(QSeriesError):
    """An Appell-Lerch denominator 1 - q^0 was encountered."""


class ZeroDenominatorError(ZeroDivisorError):
    """A theta quotient whose denominator vanishes identically."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class NonTruncatableError(QSeriesError):
    """A bilateral sum whose exponents do not grow on the summation range."""


class DivisibilityError(QSeriesError, ValueError):
    """A parameter fails a required divisibility condition."""


class RangeError(QSeriesError, ValueError):
    """A parameter lies outside its admissible range."""


class PrecisionError(QSeriesError):
    """Two numerical routes disagree beyond their error estimates."""


class TailEstimateUnreliable(QSeriesError):
    """The tail of a partial sum does not decay fast enough to be estimated."""


class MismatchError(QSeriesError):
    """Two code paths that must agree produced different series."""
