"""Exception types shared across the package."""


class RoundnessError(Exception):
    """Base class for all errors raised by this package."""


# --- metric construction ---

class InvalidParameter(RoundnessError):
    pass


class DisconnectedGraph(RoundnessError):
    pass


class NotATree(RoundnessError):
    pass


class DimensionMismatch(RoundnessError):
    pass


class IndexOutOfRange(RoundnessError):
    pass


class DuplicateIndex(RoundnessError):
    pass


# --- exponent search ---

class InvalidQuad(RoundnessError):
    """A quadrilateral whose deficit is negative already at the start of the
    scan; only non-metric inputs can produce this."""


# --- kernel tests and embeddings ---

class AsymmetricInput(RoundnessError):
    pass


class NonzeroDiagonal(RoundnessError):
    pass


class KernelNotNegative(RoundnessError):
    pass


# --- group arithmetic and Cayley balls ---

class SpecMismatch(RoundnessError):
    pass


class WordParseError(RoundnessError):
    pass


class EmptyAfterClosure(RoundnessError):
    pass


class NotGenerating(RoundnessError):
    pass


class BallTooLarge(RoundnessError):
    pass


class HypothesisViolated(RoundnessError):
    """One of the augmentation preconditions fails; the message names it."""


class DegenerateConstruction(RoundnessError):
    """The augmented generating set failed its witness verification."""


class UnsupportedOrder(RoundnessError):
    pass


# --- CLI input handling ---

class InputFormatError(RoundnessError):
    pass
