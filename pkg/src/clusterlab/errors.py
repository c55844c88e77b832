"""Exception types shared across the toolkit.

DataError subclasses signal malformed input data (CLI exit code 3);
everything else is a configuration/parameter problem (exit code 2).
"""


class ClusterlabError(ValueError):
    """Base class for all toolkit errors."""


class DataError(ClusterlabError):
    """Input data is malformed or unreadable."""


# -- data containers ---------------------------------------------------------

class RaggedRows(DataError):
    pass


class NonFiniteValue(DataError):
    pass


class LabelLengthMismatch(DataError):
    pass


class TooManyClustersForExactMatching(ClusterlabError):
    pass


# -- preprocessing ------------------------------------------------------------

class ConstantFeature(ClusterlabError):
    pass


class ConstantZeroFeature(ClusterlabError):
    pass


class InvalidInterval(ClusterlabError):
    pass


class KindMismatch(ClusterlabError):
    """Operation received an object of the wrong kind (scaler/neighbor table)."""


# -- metrics / neighbors ------------------------------------------------------

class DimensionMismatch(ClusterlabError):
    pass


class NegativeRadius(ClusterlabError):
    pass


class KOutOfRange(ClusterlabError):
    pass


class NOutOfRange(ClusterlabError):
    pass


# -- hierarchies ---------------------------------------------------------------

class TooFewPoints(ClusterlabError):
    pass


# -- density -------------------------------------------------------------------

class DimensionUnsupported(ClusterlabError):
    pass


# -- prototypes ----------------------------------------------------------------

class SingularCovariance(ClusterlabError):
    pass


class EmptySelection(ClusterlabError):
    pass


class DuplicateSelection(ClusterlabError):
    pass


# -- spectral ------------------------------------------------------------------

class NonPositiveSigma(ClusterlabError):
    pass


class NoConvergence(ClusterlabError):
    pass


# -- validation ----------------------------------------------------------------

class NoiseNotAllowed(ClusterlabError):
    pass


class SingleCluster(ClusterlabError):
    pass


class LengthMismatch(ClusterlabError):
    pass


# -- ingestion -----------------------------------------------------------------

class ParseError(DataError):
    def __init__(self, row: int, col: int, message: str):
        super().__init__(f"row {row}, column {col}: {message}")
        self.row = row
        self.col = col


class EmptyFile(DataError):
    pass


class InvalidMixture(ClusterlabError):
    pass


class UnknownMethod(ClusterlabError):
    pass
