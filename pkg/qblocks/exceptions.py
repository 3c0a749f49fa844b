class QBlocksError(Exception):
    """Base class for every error raised by qblocks."""


class WeightParseError(QBlocksError):
    """A weight string could not be parsed into half-integers."""


class NonDominantWeightError(QBlocksError):
    """The weight is not dominant."""


class UnsupportedBlockError(QBlocksError):
    """No encoded data exists for the requested block."""


class BlockShapeError(QBlocksError):
    """The weight does not have the shape an operation requires."""


class WindowError(QBlocksError):
    """A truncated character cannot certify the requested coefficients."""


class NegativeCoefficientError(QBlocksError):
    """A recovered simple character has a negative coefficient."""


class NonIntegralCoefficientError(QBlocksError):
    """A reciprocity coefficient came out non-integral."""


class RelationParseError(QBlocksError):
    """A relation string is malformed or names an unknown arrow."""


class NonComposableRelationError(QBlocksError):
    """No reading of a relation composes in the quiver."""


class AmbiguousRelationError(QBlocksError):
    """Both readings of a relation compose and disagree."""


class CutoffTooSmallError(QBlocksError):
    """The vertex cutoff cannot express every relation of the block."""


class UnstableDimensionError(QBlocksError):
    """Path-algebra dimensions did not stabilise below the length cap."""
