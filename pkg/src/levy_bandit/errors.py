"""Exception hierarchy shared by the library and the command line front end."""

from __future__ import annotations


class BanditError(Exception):
    """Base class for every error raised by :mod:`levy_bandit`."""


class SchemaError(BanditError):
    """A JSON problem document does not match its schema."""


class ValidationError(BanditError):
    """A problem violates one of the modelling assumptions.

    Attributes:
        tag: Short name of the first violated condition, e.g. ``"A1"``,
            ``"A3"``, ``"uninformative"`` or ``"sigma-zero-with-drift-gap"``.
    """

    def __init__(self, tag: str, message: str):
        super().__init__(f"[{tag}] {message}")
        self.tag = tag
        self.message = message


class DomainError(BanditError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class RangeError(DomainError):
    """A biased belief falls outside ``[0, 1]``."""


class PreconditionError(DomainError):
    """The inputs do not satisfy the hypotheses of a comparison."""


class ConfigError(DomainError):
    """A simulation configuration violates its invariants."""


class NumericError(BanditError):
    """A numerical procedure failed to deliver a result within tolerance."""


class NoSignChange(NumericError):
    """The root bracket could not be established."""


class BoundaryMismatch(NumericError):
    """Posterior-threshold and linear-boundary stopping rules disagreed."""
