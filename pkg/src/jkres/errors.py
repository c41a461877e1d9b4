"""Exception types raised by the library."""


class JkresError(Exception):
    """Base class for all library errors."""


class SingularPoint(JkresError):
    """A linear form required by the evaluation vanishes at the given point."""


class NotSpanning(JkresError):
    """The arrangement vectors do not span the ambient space."""


class NotABasis(JkresError):
    """An index tuple expected to be a basis is linearly dependent."""


class AlphaInSigma(JkresError):
    """The extra vector of an exchange relation already belongs to the basis."""


class OnWall(JkresError):
    """The point lies on a cutting hyperplane, so it selects no chamber."""


class RankTooLarge(JkresError):
    """Exhaustive chamber enumeration is only supported up to rank 3."""


class Degenerate(JkresError):
    """A tuple expected to be linearly independent is degenerate."""


class ChamberMismatch(JkresError):
    """The wall chamber is not compatible with the ambient dual chamber."""


class NotRepresentable(JkresError):
    """The piecewise data cannot be written over cones with arrangement axes."""


class ParseError(JkresError):
    """A problem file failed to parse; the message carries the JSON path."""
