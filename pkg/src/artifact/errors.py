"""Exception hierarchy shared by all modules."""


class ArtifactError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ArtifactError, ValueError):
    """Argument outside the domain of the function."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole."""


class BranchError(DomainError):
    """Argument lies on a branch cut of the principal branch."""


class CapacityError(ArtifactError):
    """Requested table size exceeds the configured memory cap."""


class TruncationError(ArtifactError):
    """A truncation could not meet the requested tolerance.

    The achieved bound is kept on the exception so callers can report it.
    """

    def __init__(self, message: str, bound: float):
        super().__init__(f"{message} (achieved bound {bound:.3e})")
        self.bound = bound


class ContourError(ArtifactError):
    """Integration contour violates its admissibility conditions."""


class UnsupportedSpecError(ArtifactError):
    """Operation not available for the given Euler product."""


class ZeroFileError(ArtifactError):
    """Malformed or inconsistent zero-ordinate file."""

    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class ConfigError(ArtifactError):
    """Invalid run configuration; the message names the offending field."""
