"""
Exception hierarchy for the lloc package.

Every error raised on purpose by the library derives from ``LlocError`` so the
CLI can translate it into a stable exit code in a single place.
"""

from typing import Optional, Tuple


class LlocError(Exception):
    """Base exception for all lloc errors"""
    pass


# Instance / embedding errors

class InstanceError(LlocError):
    """Raised for invalid instances, embeddings or point references"""
    pass


class TieEncountered(InstanceError):
    """Raised by from_embedding under the reject tie rule"""

    def __init__(self, pivot: int, v: int, w: int):
        self.pivot = pivot
        self.pair: Tuple[int, int] = (v, w)
        super().__init__(f"Distance tie at pivot {pivot}: points {v} and {w} are equidistant")


class NonFiniteInput(InstanceError):
    """Raised when positions contain NaN or infinities"""
    pass


class LengthMismatch(InstanceError):
    """Raised when an embedding does not match the instance size"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Expected {expected} positions, got {actual}")


class PointOutOfRange(InstanceError):
    """Raised for point indices outside [0, n)"""

    def __init__(self, index: int, n: int):
        self.index = index
        self.n = n
        super().__init__(f"Point index {index} out of range for n={n}")


class InvalidPartition(InstanceError):
    """Raised when buckets do not form an ordered partition of the points"""
    pass


# File format errors

class FormatError(LlocError):
    """Base class for parse failures of the text formats"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class MalformedHeader(FormatError):
    pass


class BadLength(FormatError):
    pass


class BadHexDigit(FormatError):
    pass


# Size guards

class SizeGuardError(LlocError):
    """Raised when an exponential-time routine is asked for a too large input"""
    pass


class TooLarge(SizeGuardError):

    def __init__(self, what: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} size {size} exceeds cap {cap}")


# Solver outcomes

class InconsistentComparator(LlocError):
    """Raised when a pivot's comparisons do not form a strict total order"""

    def __init__(self, pivot: int, first: int, second: int):
        self.pivot = pivot
        self.witness = (first, second)
        super().__init__(
            f"Comparator of pivot {pivot} is not a total order "
            f"(sorted {first} before {second} but the instance says otherwise)"
        )


class Infeasible(LlocError):
    """Raised when a linear system has no feasible point"""
    pass


class NumericalFailure(LlocError):
    """Raised when a floating point LP solution cannot be certified"""
    pass


class NoPerfectEmbedding(LlocError):
    """Raised when no embedding satisfies every constraint"""
    pass


class ConfigError(LlocError):
    """Raised for invalid solver or command configuration"""
    pass
