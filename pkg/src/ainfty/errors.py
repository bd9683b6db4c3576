"""Exception hierarchy.

Errors are split in two families so callers (and the command line front-end)
can tell malformed input apart from a computation whose answer is "no".
"""


class AinftyError(Exception):
    """Base class for every error raised by this package."""


class InputError(AinftyError):
    """The input is malformed or violates a precondition."""


class MathFailure(AinftyError):
    """A well-posed computation produced a negative mathematical verdict."""


# -- input errors ---------------------------------------------------------

class ContextMismatch(InputError):
    pass


class OrderViolation(InputError):
    pass


class ParseError(InputError):
    """Syntax error while reading an expression or a problem file."""

    def __init__(self, message, line=None, offset=None):
        self.line = line
        self.offset = offset
        where = []
        if line is not None:
            where.append("line %d" % line)
        if offset is not None:
            where.append("offset %d" % offset)
        if where:
            message = "%s: %s" % (", ".join(where), message)
        super().__init__(message)


class UnknownVariable(ParseError):
    pass


class DegreeOverflow(ParseError):
    pass


class FieldMismatch(ParseError):
    pass


class ValidationError(ParseError):
    pass


class ZeroEpsilon(InputError):
    pass


class BadParams(InputError):
    pass


class IncompleteRules(InputError):
    pass


class TruncationTooSmall(InputError):
    pass


class FixedLocusPositiveDimensional(InputError):
    pass


# -- mathematical failures ------------------------------------------------

class NotCoboundary(MathFailure):
    def __init__(self, message, degree=None):
        self.degree = degree
        super().__init__(message)


class NotStabilized(MathFailure):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class NotAssociative(MathFailure):
    def __init__(self, message, triple=None):
        self.triple = triple
        super().__init__(message)


class DifferentialNotSquareZero(MathFailure):
    pass


class CubicDegenerate(MathFailure):
    pass


class TailUnsolvable(MathFailure):
    """``partial`` is the series reached just before the failing degree."""

    def __init__(self, message, degree=None, partial=None):
        self.degree = degree
        self.partial = partial
        super().__init__(message)


class MCFailure(MathFailure):
    """A Maurer-Cartan bracket failed to vanish."""

    def __init__(self, message, bracket=None):
        self.bracket = bracket
        super().__init__(message)
