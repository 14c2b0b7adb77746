"""Exception types raised across the toolkit.

Everything derives from :class:`SnailkitError` so callers can catch the whole
family at once (the CLI does exactly that to map failures onto exit codes).
"""

from __future__ import annotations


class SnailkitError(Exception):
    """Base class for all toolkit errors."""


class BadInput(SnailkitError):
    """An argument violates a documented precondition."""


class DegeneratePotential(SnailkitError):
    """The inductive potential has no unique well (multiple minima or a flat bottom)."""


class InvalidBracket(BadInput):
    """A root bracket does not enclose a sign change of the target function."""


class NoSignChange(SnailkitError):
    """A sign change was required inside a search window but none exists there."""


class StraddlePole(SnailkitError):
    """A dispersive expression is evaluated too close to one of its poles."""


class Unsolvable(SnailkitError):
    """An inversion has no solution for the requested value."""


class TruncationTooSmall(SnailkitError):
    """A photon-number cutoff drops more probability mass than is tolerable."""


class NoConvergence(SnailkitError):
    """An iterative fit failed to produce a usable result.

    The best-so-far parameter vector, when available, is attached as ``result``.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class NoPeaksFound(SnailkitError):
    """Peak extraction found nothing above the detection threshold."""


class InsufficientPeaks(SnailkitError):
    """Fewer resolved peaks than the model being fitted requires."""


class Unidentifiable(SnailkitError):
    """The data cannot constrain the requested parameters (degenerate regime)."""


class Unphysical(SnailkitError):
    """Derived quantities left their physical domain (e.g. negative rates)."""


class NonPositiveOccupation(BadInput):
    """A thermal occupation that must be positive was given as zero or negative."""


class ParseError(SnailkitError):
    """A data file is syntactically malformed.

    Carries the 1-based ``row`` (and optionally ``column``) where parsing broke.
    """

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class SchemaError(SnailkitError):
    """A file parsed fine but its fields do not match the expected schema.

    ``fields`` names the offending columns/keys when known.
    """

    def __init__(self, message: str, fields: tuple[str, ...] = ()):
        super().__init__(message)
        self.fields = tuple(fields)


class IoError(SnailkitError):
    """Filesystem-level failure while reading or writing an artifact."""
