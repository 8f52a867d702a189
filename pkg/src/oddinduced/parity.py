"""Parity tests for induced subgraphs and an exact maximum odd induced subgraph solver."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded, PreconditionViolated, TooLarge
from .graph import Graph, VertexSet, bits_of, component_masks, iter_bits

DEFAULT_BUDGET = 10**9


def is_odd_set(g: Graph, s) -> bool:
    """True iff every vertex of ``s`` has an odd number of neighbours in ``s``."""
    bits = bits_of(s)
    adj = g.adj
    for v in iter_bits(bits):
        if not (adj[v] & bits).bit_count() & 1:
            return False
    return True


def is_even_set(g: Graph, s) -> bool:
    bits = bits_of(s)
    adj = g.adj
    for v in iter_bits(bits):
        if (adj[v] & bits).bit_count() & 1:
            return False
    return True


def odd_mask(adj, bits: int) -> bool:
    for v in iter_bits(bits):
        if not (adj[v] & bits).bit_count() & 1:
            return False
    return True


def enumerate_odd_sets(g: Graph, max_n: int = 24) -> Iterator[VertexSet]:
    """Brute force: every odd vertex subset, in increasing bitmask order."""
    if g.n > max_n:
        raise TooLarge(f"enumeration limited to {max_n} vertices, graph has {g.n}")
    adj = g.adj
    for bits in range(1 << g.n):
        if odd_mask(adj, bits):
            yield VertexSet(bits, g.n)


def max_odd_by_enumeration(g: Graph, max_n: int = 24) -> int:
    return max(len(s) for s in enumerate_odd_sets(g, max_n))


@dataclass(frozen=True)
class SolveResult:
    optimum: int
    witness: VertexSet
    nodes_explored: int
    wall_time: float
    optimal: bool = True

    def to_json(self) -> dict:
        return {
            "optimum": self.optimum,
            "witness": self.witness.to_list(),
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "wall_time": round(self.wall_time, 6),
        }


class _Search:
    """Depth-first branch and bound over one connected component."""

    def __init__(self, adj, comp: int, budget: int):
        self.adj = adj
        self.order = sorted(iter_bits(comp), key=lambda v: (-(adj[v] & comp).bit_count(), v))
        self.budget = budget
        self.nodes = 0
        self.best = 0
        self.best_set = 0

    def run(self, comp: int) -> None:
        self._node(0, comp, 0)

    def _propagate(self, inset: int, undec: int) -> tuple[int, int] | None:
        adj = self.adj
        changed = True
        while changed:
            changed = False
            for v in iter_bits(inset):
                row = adj[v]
                free = row & undec
                odd = (row & inset).bit_count() & 1
                if not free:
                    if not odd:
                        return None
                elif free & (free - 1) == 0:
                    # last free neighbour decides the parity of v
                    undec ^= free
                    if not odd:
                        inset |= free
                    changed = True
        return inset, undec

    def _node(self, pos: int, undec: int, inset: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        bound = (inset | undec).bit_count() & ~1
        if bound <= self.best:
            return
        state = self._propagate(inset, undec)
        if state is None:
            return
        inset, undec = state
        if (inset | undec).bit_count() & ~1 <= self.best:
            return
        size = inset.bit_count()
        if size > self.best and odd_mask(self.adj, inset):
            # every remaining vertex can be left out
            self.best = size
            self.best_set = inset
        if not undec:
            return
        order = self.order
        while not undec >> order[pos] & 1:
            pos += 1
        v = order[pos]
        bit = 1 << v
        self._node(pos + 1, undec ^ bit, inset | bit)
        self._node(pos + 1, undec ^ bit, inset)


class _OutOfBudget(Exception):
    pass


def max_odd_induced_exact(g: Graph, budget: int | None = None) -> SolveResult:
    """Exact f_o(g): largest vertex set inducing a graph with all degrees odd.

    Components are solved separately and the optima summed.  Raises
    :class:`BudgetExceeded` with the best set found when more than ``budget``
    search nodes are needed.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    start = time.perf_counter()
    total = 0
    witness = 0
    nodes = 0
    limit = sys.getrecursionlimit()
    if g.n + 100 > limit:
        sys.setrecursionlimit(g.n + 100)
    for comp in component_masks(g.adj, (1 << g.n) - 1):
        if comp & (comp - 1) == 0:
            continue
        search = _Search(g.adj, comp, budget - nodes)
        try:
            search.run(comp)
        except _OutOfBudget:
            raise BudgetExceeded(
                total + search.best, VertexSet(witness | search.best_set, g.n),
                nodes + search.nodes,
            ) from None
        nodes += search.nodes
        total += search.best
        witness |= search.best_set
    return SolveResult(total, VertexSet(witness, g.n), nodes, time.perf_counter() - start)


def f_o(g: Graph) -> int:
    return max_odd_induced_exact(g).optimum


def first_isolated(g: Graph) -> int | None:
    for v, row in enumerate(g.adj):
        if not row:
            return v
    return None


def verify_bound(g: Graph, numerator: int, denominator: int) -> bool:
    """``denominator * f_o(g) >= numerator * n`` in exact integers."""
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    v = first_isolated(g)
    if v is not None:
        raise PreconditionViolated(f"vertex {v} is isolated", vertex=v)
    return denominator * f_o(g) >= numerator * g.n


# -- vectorised exact values for many small graphs --------------------------

_PARITY = np.array([bin(i).count("1") & 1 for i in range(1 << 10)], dtype=bool)
_POP = np.array([bin(i).count("1") for i in range(1 << 10)], dtype=np.int16)


def batch_max_odd(rows: np.ndarray, n: int, chunk: int = 20000) -> np.ndarray:
    """f_o for a batch of graphs on ``n <= 10`` vertices by testing all subsets.

    ``rows`` has shape ``(B, n)``; ``rows[b, v]`` is the neighbourhood bitmask of
    vertex ``v`` in graph ``b``.  Independent of the branch and bound search.
    """
    if n > 10:
        raise TooLarge("batch evaluation supports at most 10 vertices")
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    subsets = np.arange(1 << n, dtype=np.int64)
    sizes = _POP[subsets]
    out = np.empty(len(rows), dtype=np.int16)
    for lo in range(0, len(rows), chunk):
        block = rows[lo:lo + chunk]
        ok = np.ones((len(block), 1 << n), dtype=bool)
        for v in range(n):
            member = (subsets >> v) & 1 == 1
            odd = _PARITY[block[:, v, None] & subsets[None, :]]
            ok &= odd | ~member[None, :]
        out[lo:lo + chunk] = np.where(ok, sizes[None, :], 0).max(axis=1)
    return out
