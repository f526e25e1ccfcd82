from typing import Optional


class PstError(Exception):
    """
    Base for every error raised by the library
    """


class InputError(PstError):
    """
    Invalid arguments, malformed documents, bad family specs
    """


class PreconditionError(InputError):
    """
    An operation was called on data that violates its precondition.
    `witness` holds whatever pinpoints the failure (usually a (vertex, cell) pair)
    """

    def __init__(self, msg: str, witness: Optional[object] = None):
        InputError.__init__(self, msg)
        self.witness = witness


class GuardError(PstError):
    """
    A size guard was exceeded
    """


class NumericError(PstError):
    """
    Solver did not converge or an internal consistency check failed
    """
