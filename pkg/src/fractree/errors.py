"""Exception hierarchy.

Every error raised by the library derives from :class:`FractreeError`, so
callers (and the command-line front end) can catch one type and report the
concrete class name.
"""


class FractreeError(ValueError):
    """Base class for all library errors."""


# tree construction / words
class NotPrefixFree(FractreeError):
    def __init__(self, first, second):
        self.pair = (first, second)
        super().__init__(f"{first!r} is a prefix of {second!r}")


class SymbolOutOfRange(FractreeError):
    pass


class EmptyTerminal(FractreeError):
    pass


class DegenerateTree(FractreeError):
    pass


class LengthMismatch(FractreeError):
    pass


# numerics
class NonConvergence(FractreeError):
    pass


class NoRootInBracket(FractreeError):
    pass


# parsing
class ParseFailure(FractreeError):
    pass


class NotInExpansion(ParseFailure):
    def __init__(self, position, message=None):
        self.position = position
        super().__init__(message or f"parse fails at position {position}")


# graphs
class GraphFormatError(FractreeError):
    pass


class NotRightResolving(FractreeError):
    pass


class NotIrreducible(FractreeError):
    pass


class MultipleEdgeNotToRoot(FractreeError):
    pass


class CycleAvoidsRoot(FractreeError):
    pass


class BlockLengthTooLarge(FractreeError):
    pass


# measures
class NotAClosedWalk(FractreeError):
    pass


class NoSuchWalk(FractreeError):
    pass


# complexity backends
class TableMiss(FractreeError):
    pass


class IndexOutOfRange(FractreeError):
    pass
