"""Exception hierarchy shared by every module.

Each class carries the CLI exit code of its failure class.
"""


class LtoError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParseError(LtoError):
    """Malformed input text (JSON, monomial or region syntax)."""

    exit_code = 2


class ValidationError(LtoError):
    """Well-formed input that violates a mathematical precondition."""

    exit_code = 3


class AxiomError(ValidationError):
    """A fusion-ring axiom failed.

    Attributes:
        invariant: short name of the violated axiom.
        indices: the simple indices where it failed.
    """

    def __init__(self, invariant: str, indices: tuple = (), detail: str = ""):
        self.invariant = invariant
        self.indices = tuple(indices)
        msg = f"{invariant} violated at {self.indices}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnsupportedError(ValidationError):
    """The requested construction is outside the implemented cases."""


class ResourceError(LtoError):
    """A configured size cap would be exceeded."""

    exit_code = 4


class InconclusiveError(LtoError):
    """The computation could not certify an answer either way."""

    exit_code = 5
