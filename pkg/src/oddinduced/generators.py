"""Instance families: the tight example, bounded-degree random graphs, regular graphs, trees.

All randomness comes from SplitMix64 (Steele, Lea and Flood 2014), chosen
because it is tiny and trivially portable, so instance streams can be
reproduced outside Python.  Conventions:

* ``next64``: ``state += 0x9E3779B97F4A7C15``, then the finaliser
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64).
* ``below(k)``: rejection sampling, draw until ``r < 2**64 - 2**64 % k``,
  return ``r % k``.
* ``uniform()``: ``(next64() >> 11) / 2**53``.
* shuffles are Fisher-Yates from the last index down.
* sub-seeds: ``derive_seed(seed, i) = finaliser((seed + (i + 1) * 0x9E3779B97F4A7C15) mod 2**64)``.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Any

from .errors import Infeasible, TooLarge
from .graph import MAX_VERTICES, Graph, component_masks, induced_subgraph

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    return mix64(seed + (index + 1) * GOLDEN)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return mix64(self.state)

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % k
        while True:
            r = self.next64()
            if r < limit:
                return r % k

    def uniform(self) -> float:
        return (self.next64() >> 11) / float(1 << 53)

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


# -- deterministic families ------------------------------------------------------


def k7_minus_hamilton() -> Graph:
    """K7 with the Hamilton cycle 0-1-2-3-4-5-6-0 removed: 4-regular, 14 edges."""
    edges = [(i, j) for i in range(7) for j in range(i + 1, 7) if (j - i) % 7 not in (1, 6)]
    return Graph.from_edge_list(7, edges, label="k7_minus_hamilton")


def path(n: int) -> Graph:
    return Graph.from_edge_list(n, [(i, i + 1) for i in range(n - 1)], label=f"P{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise Infeasible("a cycle needs at least 3 vertices")
    return Graph.from_edge_list(n, [(i, (i + 1) % n) for i in range(n)], label=f"C{n}")


def complete(n: int) -> Graph:
    return Graph.from_edge_list(
        n, [(i, j) for i in range(n) for j in range(i + 1, n)], label=f"K{n}"
    )


def star(n: int) -> Graph:
    """Centre 0 joined to leaves 1..n-1 (so ``star(4)`` is K_{1,3})."""
    return Graph.from_edge_list(n, [(0, i) for i in range(1, n)], label=f"S{n}")


def disjoint_copies(base: Graph, k: int) -> Graph:
    if k < 1:
        raise ValueError("need at least one copy")
    if base.n * k > MAX_VERTICES:
        raise TooLarge(f"{k} copies of {base.n} vertices exceed {MAX_VERTICES}")
    rows = []
    for c in range(k):
        shift = c * base.n
        rows.extend(row << shift for row in base.adj)
    return Graph(base.n * k, tuple(rows), label=f"{k}x{base.label}" if base.label else None)


def disjoint_union(*graphs: Graph) -> Graph:
    rows = []
    shift = 0
    for g in graphs:
        rows.extend(row << shift for row in g.adj)
        shift += g.n
    return Graph(shift, tuple(rows))


# -- random families -----------------------------------------------------------


def random_max_degree(n: int, max_degree: int, edge_prob: float, seed: int) -> Graph:
    """Random graph with every degree in ``1..max_degree``.

    Vertex pairs are visited in a shuffled order; each pair draws one coin and
    becomes an edge iff the coin is below ``edge_prob`` and both endpoints still
    have spare degree.  Isolated vertices are then joined to the lowest-index
    vertex with spare degree; if that is impossible the whole draw is repeated
    with ``derive_seed(seed, attempt)``, at most 100 times.
    """
    if n < 2 or max_degree < 1:
        raise Infeasible(f"no graph on {n} vertices with max degree {max_degree} avoids isolated vertices")
    if max_degree == 1 and n % 2:
        raise Infeasible(f"max degree 1 without isolated vertices needs a perfect matching; n={n} is odd")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    for attempt in range(100):
        rng = SplitMix64(seed if attempt == 0 else derive_seed(seed, attempt))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        rng.shuffle(pairs)
        deg = [0] * n
        rows = [0] * n
        for u, v in pairs:
            coin = rng.uniform() < edge_prob
            if coin and deg[u] < max_degree and deg[v] < max_degree:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
                deg[u] += 1
                deg[v] += 1
        stuck = False
        for v in range(n):
            if deg[v]:
                continue
            w = next((w for w in range(n) if w != v and deg[w] < max_degree), None)
            if w is None:
                stuck = True
                break
            rows[v] |= 1 << w
            rows[w] |= 1 << v
            deg[v] += 1
            deg[w] += 1
        if not stuck:
            g = Graph(n, tuple(rows))
            assert 1 <= g.min_degree and g.max_degree <= max_degree
            return g
    raise Infeasible(f"could not place all vertices of n={n} under max degree {max_degree}")


def random_regular(n: int, d: int, seed: int, attempts: int = 1000) -> Graph:
    """Configuration model, rejecting pairings with loops or repeated edges."""
    if n * d % 2 or d >= n or d < 0:
        raise Infeasible(f"no simple {d}-regular graph on {n} vertices")
    rng = SplitMix64(seed)
    for _ in range(attempts):
        points = [v for v in range(n) for _ in range(d)]
        rng.shuffle(points)
        rows = [0] * n
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            if u == v or rows[u] >> v & 1:
                ok = False
                break
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if ok:
            return Graph(n, tuple(rows), label=f"regular({n},{d})")
    raise Infeasible(f"configuration model failed {attempts} times for n={n}, d={d}")


def prufer_decode(seq: list[int], n: int) -> Graph:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    if n >= 2:
        edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Graph.from_edge_list(n, edges)


def random_tree(n: int, seed: int) -> Graph:
    """Uniform labelled tree via a uniform Prüfer sequence."""
    if n < 1:
        raise Infeasible("a tree needs at least one vertex")
    rng = SplitMix64(seed)
    seq = [rng.below(n) for _ in range(max(n - 2, 0))]
    return prufer_decode(seq, n)


# -- specs -----------------------------------------------------------------------

FAMILIES = (
    "k7_minus_hamilton", "disjoint_copies", "random_max_degree", "random_regular",
    "random_tree", "path", "cycle", "complete", "star",
)


@dataclass(frozen=True)
class GenSpec:
    """A family name with its parameters and a 64-bit seed.

    ``disjoint_copies`` takes ``{"base": <GenSpec json>, "k": int}``.  Any
    integer parameter may instead be a ``[lo, hi]`` range, drawn uniformly per
    instance from the instance seed.
    """

    family: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    @classmethod
    def from_json(cls, obj: dict) -> "GenSpec":
        obj = dict(obj)
        family = obj.pop("family")
        seed = int(obj.pop("seed", 0))
        params = obj.pop("params", None)
        if params is None:
            params = obj
        return cls(family, dict(params), seed)

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.params, "seed": self.seed}

    def key(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def with_seed(self, seed: int) -> "GenSpec":
        return GenSpec(self.family, self.params, seed)

    def generate(self) -> Graph:
        return generate(self)


def _resolve(params: dict, rng: SplitMix64) -> dict:
    out = {}
    for k in sorted(params):
        v = params[k]
        if isinstance(v, list) and len(v) == 2 and all(isinstance(x, int) for x in v):
            v = rng.integers(v[0], v[1])
        out[k] = v
    return out


def generate(spec: GenSpec) -> Graph:
    rng = SplitMix64(derive_seed(spec.seed, -1))
    p = _resolve(spec.params, rng)
    seed = spec.seed
    fam = spec.family
    if fam == "k7_minus_hamilton":
        return k7_minus_hamilton()
    if fam == "disjoint_copies":
        base = GenSpec.from_json(p["base"])
        return disjoint_copies(generate(base), int(p["k"]))
    if fam == "random_max_degree":
        return random_max_degree(int(p["n"]), int(p.get("max_degree", 4)), float(p.get("edge_prob", 0.5)), seed)
    if fam == "random_regular":
        return random_regular(int(p["n"]), int(p["d"]), seed)
    if fam == "random_tree":
        return random_tree(int(p["n"]), seed)
    if fam == "path":
        return path(int(p["n"]))
    if fam == "cycle":
        return cycle(int(p["n"]))
    if fam == "complete":
        return complete(int(p["n"]))
    if fam == "star":
        return star(int(p["n"]))
    raise AssertionError(fam)


def instance_stream(spec: GenSpec, count: int, seed: int | None = None, start: int = 0):
    """Yield ``(index, graph)`` for instances ``start..count-1``.

    Instance ``i`` is ``spec`` reseeded with ``derive_seed(seed, i)``.
    """
    base = spec.seed if seed is None else seed
    for i in range(start, count):
        yield i, generate(spec.with_seed(derive_seed(base, i)))


def largest_component(g: Graph) -> Graph:
    comps = component_masks(g.adj, (1 << g.n) - 1)
    if len(comps) <= 1:
        return g
    best = max(comps, key=lambda c: (c.bit_count(), -(c & -c)))
    return induced_subgraph(g, best)[0]
