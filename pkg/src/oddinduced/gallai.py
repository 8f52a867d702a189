"""Partition the vertices of any graph into two parts that each induce an even graph.

A 0/1 indicator ``x`` (1 = first part) works exactly when, for every vertex
``v`` with degree ``d``::

    sum(x[u] for u in N(v)) + d * x[v] == d   (mod 2)

If ``x[v] = 1`` this says ``v`` has an even number of neighbours in the first
part; if ``x[v] = 0`` it says ``v`` has an even number in the second.  The
system is solved by Gaussian elimination over GF(2) with bitset rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalError, TooLarge
from .graph import Graph, VertexSet
from .parity import is_even_set


@dataclass(frozen=True)
class EvenPartition:
    part_one: VertexSet
    part_two: VertexSet

    def is_valid(self, g: Graph) -> bool:
        return (
            self.part_one.bits & self.part_two.bits == 0
            and self.part_one.bits | self.part_two.bits == (1 << g.n) - 1
            and is_even_set(g, self.part_one)
            and is_even_set(g, self.part_two)
        )

    def to_json(self) -> dict:
        return {"part_one": self.part_one.to_list(), "part_two": self.part_two.to_list()}


def solve_gf2(rows: list[int], rhs: list[int], ncols: int) -> int | None:
    """One solution of ``rows @ x = rhs`` over GF(2), free variables set to 0.

    ``rows[i]`` is a bitmask of coefficients; the result is a bitmask, or None
    when the system is inconsistent.
    """
    aug = [row | (b & 1) << ncols for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        for i in range(r, len(aug)):
            if aug[i] & bit:
                aug[r], aug[i] = aug[i], aug[r]
                break
        else:
            continue
        pivot_row = aug[r]
        for i in range(len(aug)):
            if i != r and aug[i] & bit:
                aug[i] ^= pivot_row
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    rhs_bit = 1 << ncols
    for i in range(r, len(aug)):
        if aug[i] & rhs_bit:
            return None
    x = 0
    for i, col in enumerate(pivots):
        if aug[i] & rhs_bit:
            x |= 1 << col
    return x


def even_even_partition(g: Graph) -> EvenPartition:
    rows = []
    rhs = []
    for v, row in enumerate(g.adj):
        d = row.bit_count() & 1
        rows.append(row | d << v)
        rhs.append(d)
    x = solve_gf2(rows, rhs, g.n)
    if x is None:
        raise InternalError("parity system for an even-even partition is inconsistent")
    full = (1 << g.n) - 1
    part = EvenPartition(VertexSet(x, g.n), VertexSet(full & ~x, g.n))
    if not part.is_valid(g):
        raise InternalError("GF(2) solution does not give two even parts")
    return part


def even_even_partition_bruteforce(g: Graph, cap: int = 20) -> EvenPartition:
    """First valid bipartition in increasing order of the indicator bitmask."""
    if g.n > cap:
        raise TooLarge(f"brute force limited to {cap} vertices, graph has {g.n}")
    full = (1 << g.n) - 1
    for x in range(1 << g.n):
        if is_even_set(g, x) and is_even_set(g, full & ~x):
            return EvenPartition(VertexSet(x, g.n), VertexSet(full & ~x, g.n))
    raise InternalError("no even-even bipartition found")


def batch_even_partition(rows, n: int) -> tuple[np.ndarray, np.ndarray]:
    """The GF(2) route for many small graphs at once (``n <= 62``).

    ``rows`` has shape ``(B, n)`` with neighbourhood bitmasks.  Elimination
    follows :func:`solve_gf2` step for step, so results match
    :func:`even_even_partition` graph by graph.  Returns the indicator
    bitmasks and a flag per graph saying whether the system was consistent.
    """
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    count = len(rows)
    idx = np.arange(count)
    rowidx = np.arange(n)[None, :]
    deg_par = np.zeros((count, n), dtype=np.int64)
    for v in range(n):
        deg_par[:, v] = _popcount64(rows[:, v]) & 1
    aug = rows | (deg_par << rowidx) | (deg_par << n)
    rank = np.zeros(count, dtype=np.int64)
    pivcol = np.full((count, n), -1, dtype=np.int64)
    for col in range(n):
        cand = ((aug >> col) & 1).astype(bool) & (rowidx >= rank[:, None])
        found = cand.any(axis=1)
        if not found.any():
            continue
        b = idx[found]
        i = cand[found].argmax(axis=1)
        r = rank[found]
        top, other = aug[b, r].copy(), aug[b, i].copy()
        aug[b, r], aug[b, i] = other, top
        pivot = aug[b, r]
        hit = ((aug[b] >> col) & 1).astype(bool)
        hit[np.arange(len(b)), r] = False
        aug[b] ^= np.where(hit, pivot[:, None], 0)
        pivcol[b, r] = col
        rank[found] += 1
    rhs = (aug >> n) & 1
    consistent = ~((rhs == 1) & (rowidx >= rank[:, None])).any(axis=1)
    x = np.zeros(count, dtype=np.int64)
    use = (rowidx < rank[:, None]) & (rhs == 1)
    for j in range(n):
        x |= np.where(use[:, j], np.int64(1) << np.maximum(pivcol[:, j], 0), 0)
    return x, consistent


def batch_is_even_partition(rows, n: int, x) -> np.ndarray:
    """Per graph: do ``x`` and its complement both induce even subgraphs?"""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, n)
    x = np.asarray(x, dtype=np.int64)
    full = (1 << n) - 1
    ok = np.ones(len(rows), dtype=bool)
    for v in range(n):
        inside = ((x >> v) & 1).astype(bool)
        side = np.where(inside, x, full & ~x)
        ok &= (_popcount64(rows[:, v] & side) & 1) == 0
    return ok


def _popcount64(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    for shift in range(0, 64, 8):
        out += _POP8[((a >> np.uint64(shift)) & np.uint64(0xFF)).astype(np.int64)]
    return out


_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)
