"""
Exception hierarchy for graphonlab.
"""
from typing import Optional


class GraphonLabError(Exception):
    """Base class for every error raised by graphonlab."""


class NoLevel(GraphonLabError, ValueError):
    """The point x = 1 belongs to no dyadic level interval."""


class PrecisionExceeded(GraphonLabError, ValueError):
    """A coordinate needs more fractional bits than the lattice provides."""


class InvalidStep(GraphonLabError, ValueError):
    """A step graphon was declared with an asymmetric or out-of-range block matrix."""


class LayoutMismatch(GraphonLabError, ValueError):
    """A decorated graph refers to parts the graphon does not have."""


class TooLarge(GraphonLabError, ValueError):
    """A brute-force routine was asked to handle a graph beyond its size limit."""


class RootsIncompatible(GraphonLabError, ValueError):
    """The root tuple induces the root graph with probability density zero."""


class CompatibilityError(GraphonLabError, ValueError):
    """Graph atoms of one constraint do not share the same rooted base graph."""


class ConstraintSyntaxError(GraphonLabError, ValueError):
    """
    Syntax error in a constraint or graph file.

    Attributes:
        line (int): 1-based line of the offending token.
        column (int): 1-based column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int, source: Optional[str] = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")
