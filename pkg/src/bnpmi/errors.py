"""Exception hierarchy shared across the package.

Three broad families matter to callers: bad inputs (wrong shapes, empty
requests, malformed files), numerical degeneracies arising during Monte
Carlo draws, and elicitation failure.  The CLI maps these onto distinct
exit codes.
"""

from __future__ import annotations


class BnpmiError(Exception):
    """Base class for every package-specific error."""


class InvalidParameter(BnpmiError, ValueError):
    """A parameter lies outside its documented domain."""


class EmptyRequest(InvalidParameter):
    """A sampler was asked for zero (or negative) observations."""


class CholeskyFailure(InvalidParameter):
    """A covariance matrix is not symmetric positive definite."""


class Unsupported(BnpmiError, ValueError):
    """No closed form (or no sampler) exists for the requested family."""


class ParseError(BnpmiError):
    """A delimited input file could not be read as a numeric table."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column


class DegenerateSupport(BnpmiError):
    """Too few points at positive distance to measure a k-th neighbor."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class InsufficientDraws(BnpmiError):
    """An estimator needs more Monte Carlo draws than were supplied."""


class ZeroPriorMass(BnpmiError):
    """No prior draw fell inside [0, c); the ratio estimate is undefined."""


class DegeneratePrior(BnpmiError):
    """All prior draws coincide, so prior quantiles carry no information."""


class ElicitationFailed(BnpmiError):
    """No candidate concentration hit the target window probability.

    Carries the measured (a, probability) profile so callers can report
    what was tried.
    """

    def __init__(self, message: str, profile=None):
        super().__init__(message)
        self.profile = list(profile) if profile is not None else []
