"""Exception types shared across the package."""

from __future__ import annotations


class OddInducedError(Exception):
    """Base class for every error raised by this package."""


class InvalidEdge(OddInducedError, ValueError):
    pass


class IndexOutOfRange(OddInducedError, IndexError):
    pass


class ParseError(OddInducedError, ValueError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class TooLarge(OddInducedError, ValueError):
    pass


class PreconditionViolated(OddInducedError, ValueError):
    def __init__(self, message: str, vertex: int | None = None):
        self.vertex = vertex
        super().__init__(message)


class Infeasible(OddInducedError, ValueError):
    pass


class InternalError(OddInducedError, RuntimeError):
    pass


class BudgetExceeded(OddInducedError, RuntimeError):
    """The exact search ran out of nodes; ``best`` is a lower bound only."""

    def __init__(self, best_size: int, best_witness, nodes: int):
        self.best_size = best_size
        self.best_witness = best_witness
        self.nodes = nodes
        self.optimal = False
        super().__init__(
            f"node budget exhausted after {nodes} nodes; best lower bound {best_size}"
        )


class ProofGapReport(OddInducedError, RuntimeError):
    """No reduction rule produced a certified step for ``graph6``."""

    def __init__(self, graph6: str, vertices: list[int], reason: str):
        self.graph6 = graph6
        self.vertices = vertices
        self.reason = reason
        super().__init__(f"{reason}: {graph6}")
