"""Simple undirected graphs stored as rows of integer bitsets.

Vertex ``v`` of a :class:`Graph` is the index ``v``; row ``adj[v]`` is an int
whose set bits are the neighbours of ``v``.  Python ints are arbitrary width,
so a row for ``n`` vertices behaves like ``ceil(n / 64)`` machine words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import IndexOutOfRange, InvalidEdge, ParseError, TooLarge

MAX_VERTICES = 1 << 16


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def popcount(x: int) -> int:
    return x.bit_count()


def bits_of(s) -> int:
    """Coerce a VertexSet, int bitmask, or iterable of indices into a bitmask."""
    if isinstance(s, VertexSet):
        return s.bits
    if isinstance(s, int):
        return s
    bits = 0
    for v in s:
        bits |= 1 << v
    return bits


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``range(n)`` held as a bitmask."""

    bits: int
    n: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise IndexOutOfRange(f"bitmask {self.bits:#x} does not fit {self.n} vertices")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int] = ()) -> "VertexSet":
        bits = 0
        for v in vertices:
            if not 0 <= v < n:
                raise IndexOutOfRange(f"vertex {v} outside 0..{n - 1}")
            bits |= 1 << v
        return cls(bits, n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls((1 << n) - 1, n)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(0, n)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: "VertexSet") -> None:
        if other.n != self.n:
            raise ValueError(f"vertex sets of width {self.n} and {other.n} do not mix")

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits | other.bits, self.n)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits & other.bits, self.n)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits & ~other.bits, self.n)

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.bits ^ other.bits, self.n)

    def complement(self) -> "VertexSet":
        return VertexSet(((1 << self.n) - 1) & ~self.bits, self.n)

    def issubset(self, other: "VertexSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def to_list(self) -> list[int]:
        return list(iter_bits(self.bits))

    def __repr__(self) -> str:
        return f"VertexSet({self.to_list()}, n={self.n})"


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]
    min_degree: int
    max_degree: int
    is_regular: bool


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    The constructor checks symmetry, the absence of loops, and row widths, so
    every ``Graph`` in circulation is a valid simple graph.
    """

    n: int
    adj: tuple[int, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise TooLarge(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.adj)}")
        adj = self.adj
        total = 0
        for v, row in enumerate(adj):
            if row < 0 or row >> self.n:
                raise IndexOutOfRange(f"row {v} has bits beyond vertex {self.n - 1}")
            if row >> v & 1:
                raise InvalidEdge(f"loop at vertex {v}")
            for u in iter_bits(row):
                if not adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")
            total += row.bit_count()
        assert total % 2 == 0

    @classmethod
    def from_edge_list(
        cls, n: int, edges: Iterable[tuple[int, int]], label: str | None = None
    ) -> "Graph":
        if not 0 <= n <= MAX_VERTICES:
            raise TooLarge(f"vertex count {n} outside 0..{MAX_VERTICES}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise IndexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise InvalidEdge(f"loop edge ({u}, {v})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), label)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @property
    def vertices(self) -> VertexSet:
        return VertexSet.full(self.n)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, row in enumerate(self.adj):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def _vertex(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexOutOfRange(f"vertex {v} outside 0..{self.n - 1}")
        return v

    def degree(self, v: int) -> int:
        return self.adj[self._vertex(v)].bit_count()

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.adj[self._vertex(v)], self.n)

    def closed_neighborhood(self, v: int) -> VertexSet:
        return VertexSet(self.adj[self._vertex(v)] | 1 << v, self.n)

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def degree_profile(self) -> DegreeProfile:
        degs = tuple(self.degrees())
        lo = min(degs, default=0)
        hi = max(degs, default=0)
        return DegreeProfile(degs, lo, hi, lo == hi)

    @property
    def max_degree(self) -> int:
        return max((row.bit_count() for row in self.adj), default=0)

    @property
    def min_degree(self) -> int:
        return min((row.bit_count() for row in self.adj), default=0)

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"<Graph{tag} n={self.n} m={self.num_edges}>"


# -- subgraphs ---------------------------------------------------------------


def induced_subgraph(g: Graph, s) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on ``s`` plus the map old index -> new index."""
    keep = bits_of(s)
    order = list(iter_bits(keep))
    index = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = 0
        for u in iter_bits(g.adj[v] & keep):
            row |= 1 << index[u]
        rows.append(row)
    return Graph(len(order), tuple(rows)), index


def delete_vertices(g: Graph, d) -> tuple[Graph, dict[int, int]]:
    return induced_subgraph(g, ((1 << g.n) - 1) & ~bits_of(d))


def isolated_vertices(g: Graph) -> VertexSet:
    bits = 0
    for v, row in enumerate(g.adj):
        if not row:
            bits |= 1 << v
    return VertexSet(bits, g.n)


def isolated_in(adj: Sequence[int], alive: int) -> int:
    """Bitmask of vertices of ``alive`` with no neighbour inside ``alive``."""
    out = 0
    for v in iter_bits(alive):
        if not adj[v] & alive:
            out |= 1 << v
    return out


def component_masks(adj: Sequence[int], alive: int) -> list[int]:
    """Connected components of the subgraph induced by ``alive``, ordered by least vertex."""
    comps = []
    rest = alive
    while rest:
        frontier = rest & -rest
        comp = frontier
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & rest & ~comp
            comp |= frontier
        rest &= ~comp
        comps.append(comp)
    return comps


def connected_components(g: Graph) -> list[VertexSet]:
    return [VertexSet(c, g.n) for c in component_masks(g.adj, (1 << g.n) - 1)]


def is_connected(g: Graph) -> bool:
    return len(component_masks(g.adj, (1 << g.n) - 1)) <= 1


# -- small-cycle witnesses ----------------------------------------------------


def has_triangle(g: Graph) -> tuple[int, int, int] | None:
    """Lexicographically first triangle ``(a, b, c)`` with ``a < b < c``."""
    adj = g.adj
    for a in range(g.n):
        for b in iter_bits(adj[a] >> (a + 1)):
            b += a + 1
            common = (adj[a] & adj[b]) >> (b + 1)
            if common:
                return a, b, b + 1 + (common & -common).bit_length() - 1
    return None


def has_four_cycle(g: Graph) -> tuple[int, int, int, int] | None:
    """A 4-cycle ``a-b-c-d-a``: first pair ``a < c`` with two common neighbours."""
    adj = g.adj
    for a in range(g.n):
        for c in range(a + 1, g.n):
            common = adj[a] & adj[c]
            if common.bit_count() >= 2:
                b, d = list(iter_bits(common))[:2]
                return a, b, c, d
    return None


def four_cycles_sharing_edge(g: Graph) -> tuple[int, int, int, int] | None:
    """Two distinct 4-cycles through a common edge, as ``(p, x1, x2, x3)``.

    ``p`` is adjacent to ``x1, x2, x3``; ``x1`` and ``x2`` have a common
    neighbour other than ``p`` and ``x3``, and ``x2`` and ``x3`` have one other
    than ``p`` and ``x1``, giving cycles ``p x1 y x2`` and ``p x2 y' x3`` that
    share the edge ``p x2``.
    """
    adj = g.adj
    for p in range(g.n):
        nbrs = list(iter_bits(adj[p]))
        if len(nbrs) < 3:
            continue
        for x1 in nbrs:
            for x2 in nbrs:
                if x2 == x1:
                    continue
                for x3 in nbrs:
                    if x3 in (x1, x2) or x3 < x1:
                        continue
                    left = adj[x1] & adj[x2] & ~(1 << p | 1 << x3)
                    right = adj[x2] & adj[x3] & ~(1 << p | 1 << x1)
                    if left and right:
                        return p, x1, x2, x3
    return None


# -- graph6 --------------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return chr(126) + "".join(chr((n >> s & 63) + 63) for s in (12, 6, 0))
    return chr(126) * 2 + "".join(chr((n >> s & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    out = [_encode_n(g.n)]
    adj = g.adj
    acc = 0
    k = 0
    for j in range(1, g.n):
        row = adj[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            k += 1
            if k == 6:
                out.append(chr(acc + 63))
                acc = k = 0
    if k:
        out.append(chr((acc << (6 - k)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(_G6_HEADER):
        base = len(_G6_HEADER)
        s = s[base:]
    data = s.encode("ascii", errors="replace")
    for i, b in enumerate(data):
        if not 63 <= b <= 126:
            raise ParseError(f"byte {b!r} outside graph6 range 63..126", base + i)
    if not data:
        raise ParseError("empty graph6 string", base)
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise ParseError("truncated 8-byte length header", base + len(data))
        n = 0
        for b in data[2:8]:
            n = n << 6 | (b - 63)
        pos = 8
    else:
        if len(data) < 4:
            raise ParseError("truncated 4-byte length header", base + len(data))
        n = 0
        for b in data[1:4]:
            n = n << 6 | (b - 63)
        pos = 4
    if n > MAX_VERTICES:
        raise ParseError(f"vertex count {n} exceeds {MAX_VERTICES}", base)
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) - pos != need:
        raise ParseError(
            f"expected {need} edge bytes for n={n}, found {len(data) - pos}", base + pos
        )
    rows = [0] * n
    i, j = 0, 1
    for b in data[pos:]:
        b -= 63
        for shift in range(5, -1, -1):
            if j >= n:
                break
            if b >> shift & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, tuple(rows))


# -- edge-list text ------------------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines (0-based, ``#`` comments).

    A lone integer on the first data line fixes the vertex count; otherwise
    ``n`` is one more than the largest index mentioned.
    """
    n = None
    edges = []
    seen_data = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers, got {raw!r}") from None
        if len(nums) == 1 and not seen_data:
            n = nums[0]
        elif len(nums) == 2:
            edges.append((nums[0], nums[1]))
        else:
            raise ParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        seen_data = True
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph.from_edge_list(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(text: str, fmt: str = "auto") -> Graph:
    """Read a single graph in graph6 or edge-list form."""
    if fmt == "auto":
        # graph6 bytes never include digits or '#'
        stripped = text.lstrip()
        fmt = "graph6" if stripped and stripped[0] not in "0123456789#" else "edgelist"
    if fmt == "graph6":
        lines = [ln for ln in text.split() if ln]
        if len(lines) != 1:
            raise ParseError(f"expected one graph6 line, found {len(lines)}")
        return parse_graph6(lines[0])
    if fmt == "edgelist":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {fmt!r}")
