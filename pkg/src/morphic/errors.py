"""Exception hierarchy shared by every module."""


class MorphicError(Exception):
    """Base class for all errors raised by this package."""


class UnknownSymbol(MorphicError, KeyError):
    def __init__(self, symbol, where=""):
        self.symbol = symbol
        msg = f"unknown symbol {symbol!r}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class AlphabetMismatch(MorphicError, ValueError):
    pass


class FiniteLimit(MorphicError):
    """The iterates stabilize at a finite word shorter than requested."""

    def __init__(self, word):
        self.word = tuple(word)
        super().__init__(f"limit is the finite word of length {len(self.word)}")


class NoLimit(MorphicError):
    pass


class IterationCap(MorphicError):
    pass


class InsufficientOutput(MorphicError):
    def __init__(self, consumed, produced):
        self.consumed = consumed
        self.produced = produced
        super().__init__(
            f"no further output after consuming {consumed} input letters "
            f"({produced} letters produced); the transduct may be finite"
        )


class RespectCapExceeded(MorphicError):
    pass


class UndefinedBlocks(MorphicError, ValueError):
    pass


class FiniteErasure(MorphicError):
    def __init__(self, word):
        self.word = tuple(word)
        super().__init__(f"erased fixpoint is finite (length {len(self.word)})")


class ErasingImage(MorphicError, ValueError):
    pass


class AllErased(MorphicError, ValueError):
    pass


class ConvergenceFailure(MorphicError):
    pass


class DomainError(MorphicError, ValueError):
    pass


class ShapeMismatch(MorphicError, ValueError):
    pass


class InsufficientPrefix(MorphicError, ValueError):
    pass


class SpecError(MorphicError):
    """Positional parse error in a spec file."""

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"{line}:{column}: " if line is not None else ""
        extra = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(where + message + extra)


class ResolutionError(SpecError):
    pass
