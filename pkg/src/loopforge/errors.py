"""Exception taxonomy. Every failure mode has a dedicated class so callers
can distinguish bad input, unmet hypotheses, and genuine theorem violations."""


class LoopError(Exception):
    """Base class for all loopforge errors."""


class NotLatin(LoopError):
    """Some row or column of the table repeats a symbol."""


class NoIdentity(LoopError):
    """No two-sided identity element exists."""


class NotCommutative(LoopError):
    """Operation requires a commutative table."""


class NotPowerAssociative(LoopError):
    """Operation requires power-associativity."""


class NotUniquely2Divisible(LoopError):
    """The squaring map is not a bijection."""


class NotAutomorphism(LoopError):
    """The supplied permutation is not an automorphism."""


class HypothesisNotMet(LoopError):
    """Ambient hypothesis of a check (e.g. A-loop, exponent 2) fails."""


class DegreeMismatch(LoopError):
    """Permutations of different degrees were mixed."""


class NotSubloop(LoopError):
    """A member set is not closed under multiplication and left division."""


class NotNormal(LoopError):
    """Subloop is not invariant under the inner mapping group."""


class IllDefined(LoopError):
    """Coset multiplication failed to be well defined."""


class DecompositionFailed(LoopError):
    """The K x H factorisation is not a bijection."""


class CapExceeded(LoopError):
    """An enumeration exceeded its configured cap."""


class InvalidParameter(LoopError):
    """Malformed argument to a constructor or search."""


class SearchTimeout(LoopError):
    """Search exhausted its node or time budget."""


class TheoremViolation(LoopError):
    """A consequence that is provable under the checked hypotheses failed.

    Raising this means either the input sneaked past a hypothesis gate or
    there is a bug; it is never a normal outcome.
    """


class ParseError(LoopError):
    """Cayley file rejected, with 1-based line/column position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
