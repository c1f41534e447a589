"""Structured errors.

Every refusal the library makes (size caps, malformed input, missing
machinery) raises a subclass of WordlogicError carrying a short machine
readable ``code`` so the CLI can map failures to exit codes.
"""


class WordlogicError(Exception):
    code = "error"

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = dict(info)


class ParseError(WordlogicError):
    code = "parse"


class CapExceeded(WordlogicError):
    """A configured size cap was hit (see wordlogic.caps)."""

    code = "cap"


class NotDecomposable(WordlogicError):
    """The algebra fails one of the named decomposition conditions."""

    code = "decompose"

    def __init__(self, message, clause, **info):
        super().__init__(message, clause=clause, **info)
        self.clause = clause


class NotMonoidPresentable(WordlogicError):
    """Compilation was asked for a quantifier with only an oracle."""

    code = "oracle-quantifier"


class MissingMachinery(WordlogicError):
    """The registry lacks a quantifier/predicate an operation requires."""

    code = "missing"


class BoundTooSmall(WordlogicError):
    """No automaton consistent with the bounded data could be verified."""

    code = "bound"
