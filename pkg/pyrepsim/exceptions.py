class RepSimError(Exception):
    """
    Base class of all errors raised by pyrepsim.
    """


class ValidationError(RepSimError, ValueError):
    """
    A precondition on the inputs or parameters is violated.
    """


class DimensionMismatchError(ValidationError):
    """
    Two inputs disagree in shape, e.g. a different number of examples.
    """


class MatrixIOError(RepSimError, IOError):
    """
    A matrix or report file could not be read or written.
    """


class ParseError(MatrixIOError):

    def __init__(self, path, message, line=None, offset=None):
        """
        A matrix file exists but does not follow its declared format.

        Parameters
        ----------
        path: str
            The offending file
        message: str
            What went wrong
        line: int
            1-based line number (CSV files)
        offset: int
            Byte offset (rsm-binary files)
        """
        self.path = path
        self.line = line
        self.offset = offset
        where = ""
        if line is not None:
            where = " (line %d)" % line
        elif offset is not None:
            where = " (byte %d)" % offset
        super().__init__("%s%s: %s" % (path, where, message))


class DegenerateError(RepSimError, ArithmeticError):
    """
    The inputs are numerically degenerate for the requested quantity,
    e.g. a constant representation has zero self-HSIC.
    """


class RankError(DegenerateError):
    """
    A matrix has rank zero or lacks the rank an operation requires.
    """
