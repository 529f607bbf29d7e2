"""Exception hierarchy shared by the library and the CLI.

The CLI maps each family to a process exit status: invalid input -> 2,
model-assumption violations -> 3, numerical failures -> 4.
"""

from __future__ import annotations


class LossBoundsError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class InvalidInputError(LossBoundsError, ValueError):
    """Malformed parameters, samples or configuration."""

    exit_code = 2


class ModelAssumptionError(LossBoundsError):
    """A modelling precondition (load, class validity, ...) does not hold."""

    exit_code = 3


class StabilityError(ModelAssumptionError):
    """The functional equation has no root strictly inside (0, 1)."""


class ClassValidityError(ModelAssumptionError):
    """Moment bounds do not describe a non-trivial moment class."""


class AdmissibilityError(ModelAssumptionError):
    """The distance ``epsilon`` exceeds the admissible threshold."""

    def __init__(self, message: str, terms: dict[str, float]):
        super().__init__(message)
        self.terms = dict(terms)


class NumericalError(LossBoundsError):
    """An iterative method failed to converge."""

    exit_code = 4
