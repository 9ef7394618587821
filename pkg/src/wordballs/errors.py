"""Exception hierarchy shared by every module."""

from __future__ import annotations


class WordBallsError(Exception):
    """Base class for all library errors."""


class AlphabetMismatch(WordBallsError, ValueError):
    pass


class ParseError(WordBallsError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        if text:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class IndexOutOfRange(WordBallsError, IndexError):
    pass


class MalformedPresentation(WordBallsError, ValueError):
    pass


class NotAscending(WordBallsError, ValueError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message)


class NotLeftKCauchy(WordBallsError, ValueError):
    pass


class PreconditionViolated(WordBallsError, ValueError):
    pass


class TooLarge(WordBallsError, ValueError):
    pass


class OrderAxiomError(WordBallsError, ValueError):
    """A relation handed to the poset oracle is not a partial order."""

    def __init__(self, message: str, witness: tuple = ()):
        self.witness = witness
        super().__init__(f"{message}: {witness!r}" if witness else message)


class NotReflexive(OrderAxiomError):
    pass


class NotAntisymmetric(OrderAxiomError):
    pass


class NotTransitive(OrderAxiomError):
    pass
