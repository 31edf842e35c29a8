"""Exception hierarchy shared across the package."""


class SpldaError(Exception):
    """Base class for all errors raised by this package."""


class BadMagic(SpldaError):
    """File does not start with the FVEC magic bytes."""


class DimMismatch(SpldaError):
    """Declared or expected dimensions disagree with the actual data."""


class NonFinite(SpldaError):
    """A matrix contains NaN or Inf entries."""


class ParseError(SpldaError):
    """A label file line could not be parsed; carries the line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class NegativeLabel(ParseError):
    """A label file contains a negative integer."""


class BadParams(SpldaError):
    """Parameters outside their documented domain."""


class IoError(SpldaError):
    """Wraps OS-level file errors."""


class SingleSample(SpldaError):
    """Affinity graph needs at least two samples."""


class EigenFailure(SpldaError):
    """The dense eigensolver did not converge."""


class RankDeficient(SpldaError):
    """The constraint matrix is not positive definite after regularization."""


class EigenDegenerate(SpldaError):
    """The affinity graph has no edges, so every direction is equivalent."""


class ClassMissing(SpldaError):
    """A class in 0..C-1 has no contributing samples."""


class LengthMismatch(SpldaError):
    """Two parallel sequences have different lengths."""


class NonSquare(SpldaError):
    """Assignment cost matrix is not square."""


class EmptyPredictions(SpldaError):
    """Selection was called with no predictions."""
