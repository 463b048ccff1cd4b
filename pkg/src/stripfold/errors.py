"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class StripFoldError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 4


class InputError(StripFoldError):
    """Malformed or unusable input (parse errors, empty sets, bad geometry)."""

    exit_code = 2

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConnectivityError(InputError):
    pass


class NonManifoldError(InputError):
    pass


class PreconditionError(StripFoldError):
    """Input is valid but does not meet a stage's requirements (genus, feature size, closedness)."""

    exit_code = 3


class UnsupportedError(PreconditionError):
    pass


class CoverError(StripFoldError):
    """A band set fails to cover the surface; ``square`` names a witness."""

    exit_code = 2

    def __init__(self, message: str, square=None) -> None:
        self.square = square
        super().__init__(message)


class OracleLimitError(StripFoldError):
    exit_code = 1


class InvariantError(StripFoldError):
    """A proven structural property failed; always a bug, never user error."""

    exit_code = 4
