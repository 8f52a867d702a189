"""Constructive 2n/7 odd induced subgraphs for graphs of maximum degree at most 4.

Every step follows the same delete, recurse, patch pattern.  A structural rule
(pendant vertex, degree-2 vertex, triangle, degree-3 vertex, 4-cycles, or the
4-regular C4-free case) proposes deletion sets ``D`` built from the anchor's
neighbourhood.  Deleting ``D`` and then every vertex left isolated removes a
set ``R``; the rest is solved recursively to an odd set ``H``, and a patch
``P`` inside ``R`` with ``7 |P| >= 2 |R|`` is added so that ``H | P`` stays odd.

A candidate is committed before recursing only when a patch is certain to
exist whatever ``H`` turns out to be.  Only vertices adjacent to ``R`` matter,
so it is enough to find a patch among vertices of ``R`` with no neighbours in
the rest, or, failing that, among vertices whose outside neighbours are a
single pivot ``b`` for both ``b in H`` and ``b not in H``.  This keeps the
whole construction to one recursive solve per step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import PreconditionViolated, ProofGapReport
from .graph import (
    Graph,
    VertexSet,
    component_masks,
    induced_subgraph,
    iter_bits,
    to_graph6,
)
from .parity import is_odd_set, max_odd_induced_exact, odd_mask

RULES = (
    "R0_BASE", "R1_DEG1", "R2_DEG2", "R3_TRIANGLE", "R4_DEG3",
    "R5_C4_SHARED", "R6_C4", "R7_4REG_C4FREE",
)
# used only when no rule candidate can be certified; never expected to appear
FALLBACK_RULE = "X_EXACT"

PATCH_CAP = 8
MAX_CANDIDATES = 40
EXACT_FALLBACK_N = 24
TRACE_SCHEMA = 1


@dataclass(frozen=True)
class ReductionStep:
    rule_id: str
    anchor: tuple[int, ...]
    deleted: VertexSet
    isolated_removed: VertexSet
    patch: VertexSet

    @property
    def removed(self) -> VertexSet:
        return self.deleted | self.isolated_removed

    def to_json(self) -> dict:
        return {
            "rule": self.rule_id,
            "anchor": list(self.anchor),
            "deleted": self.deleted.to_list(),
            "isolated_removed": self.isolated_removed.to_list(),
            "patch": self.patch.to_list(),
        }

    @classmethod
    def from_json(cls, obj: dict, n: int) -> "ReductionStep":
        return cls(
            obj["rule"],
            tuple(obj["anchor"]),
            VertexSet.of(n, obj["deleted"]),
            VertexSet.of(n, obj["isolated_removed"]),
            VertexSet.of(n, obj["patch"]),
        )


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple[ReductionStep, ...]
    final_set: VertexSet
    input_n: int
    stats: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "schema_version": TRACE_SCHEMA,
            "input_n": self.input_n,
            "final_set": self.final_set.to_list(),
            "size": len(self.final_set),
            "steps": [s.to_json() for s in self.steps],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionTrace":
        n = obj["input_n"]
        steps = tuple(ReductionStep.from_json(s, n) for s in obj["steps"])
        return cls(steps, VertexSet.of(n, obj["final_set"]), n)


@dataclass(frozen=True)
class DeletionCandidate:
    deleted: VertexSet
    isolated: VertexSet

    @property
    def removed(self) -> VertexSet:
        return self.deleted | self.isolated


# -- patch search ------------------------------------------------------------------


def _patch_of_size(adj, order: list[int], hmask: int, k: int) -> int | None:
    """Lexicographically first ``k``-subset of ``order`` making ``hmask | P`` odd.

    ``hmask`` is assumed odd on its own.  A vertex's constraint is checked as
    soon as every region vertex adjacent to it has been decided.
    """
    m = len(order)
    if k > m:
        return None
    region = 0
    pos = {}
    for i, r in enumerate(order):
        region |= 1 << r
        pos[r] = i
    # h in H touching the region: even number of neighbours in P
    touched = [h for h in iter_bits(hmask) if adj[h] & region]
    last = {}
    for w in touched:
        last[w] = max(pos[r] for r in iter_bits(adj[w] & region))
    for r in order:
        nb = adj[r] & region
        last[r] = max((pos[u] for u in iter_bits(nb)), default=-1)
    # final_at[j]: vertices whose constraints are settled once positions < j are decided
    final_h = [0] * (m + 1)
    for w in touched:
        for j in range(last[w] + 1, m + 1):
            final_h[j] |= 1 << w
    final_r = [0] * (m + 1)
    for r in order:
        for j in range(last[r] + 1, m + 1):
            final_r[j] |= 1 << r

    def ok(pmask: int, j: int) -> bool:
        for w in iter_bits(final_h[j]):
            if (adj[w] & pmask).bit_count() & 1:
                return False
        both = pmask | hmask
        for r in iter_bits(final_r[j] & pmask):
            if not (adj[r] & both).bit_count() & 1:
                return False
        return True

    def rec(start: int, pmask: int, left: int) -> int | None:
        if left == 0:
            return pmask if ok(pmask, m) else None
        for j in range(start, m - left + 1):
            # positions start..j-1 are now excluded
            if not ok(pmask, j):
                return None
            nxt = pmask | 1 << order[j]
            found = rec(j + 1, nxt, left - 1)
            if found is not None:
                return found
        return None

    return rec(0, 0, k)


def _patch_mask(adj, region: int, hmask: int, required: int) -> int | None:
    order = list(iter_bits(region))
    k = max(required, 1)
    k += k & 1
    top = max(PATCH_CAP, required + 1)
    while k <= top:
        found = _patch_of_size(adj, order, hmask, k)
        if found is not None:
            return found
        k += 2
    return None


def patch_search(g: Graph, deleted_region, h_prime, required: int) -> VertexSet | None:
    """Smallest patch ``P`` inside ``deleted_region`` with ``|P| >= required`` and
    ``h_prime | P`` odd.

    Only even sizes can work (an odd graph has an even number of vertices), so
    sizes ``required`` (rounded up to even), ``+2``, ... up to 8 are tried,
    each in lexicographic order of the sorted vertex list.
    """
    region = deleted_region.bits if isinstance(deleted_region, VertexSet) else int(
        VertexSet.of(g.n, deleted_region).bits
    )
    hmask = h_prime.bits if isinstance(h_prime, VertexSet) else VertexSet.of(g.n, h_prime).bits
    found = _patch_mask(g.adj, region, hmask, required)
    return None if found is None else VertexSet(found, g.n)


# -- structure detection ------------------------------------------------------------


def _nbrs(adj, alive: int, v: int) -> int:
    return adj[v] & alive


def _isolated_after(adj, alive: int, d: int) -> int:
    rest = alive & ~d
    near = 0
    for v in iter_bits(d):
        near |= adj[v]
    near &= rest
    out = 0
    for v in iter_bits(near):
        if not adj[v] & rest:
            out |= 1 << v
    return out


def _triangle(adj, alive: int):
    for a in iter_bits(alive):
        na = adj[a] & alive
        for b in iter_bits(na >> (a + 1) << (a + 1)):
            common = na & adj[b] & alive
            common = common >> (b + 1) << (b + 1)
            if common:
                return a, b, (common & -common).bit_length() - 1
    return None


def _shared_c4(adj, alive: int):
    for p in iter_bits(alive):
        nbrs = list(iter_bits(adj[p] & alive))
        if len(nbrs) < 3:
            continue
        for x1 in nbrs:
            for x2 in nbrs:
                if x2 == x1:
                    continue
                for x3 in nbrs:
                    if x3 in (x1, x2) or x3 < x1:
                        continue
                    left = adj[x1] & adj[x2] & alive & ~(1 << p | 1 << x3)
                    right = adj[x2] & adj[x3] & alive & ~(1 << p | 1 << x1)
                    if left and right:
                        return p, x1, x2, x3
    return None


def _c4(adj, alive: int):
    for a in iter_bits(alive):
        for c in iter_bits(alive >> (a + 1) << (a + 1)):
            common = adj[a] & adj[c] & alive
            if common.bit_count() >= 2:
                b, d = list(iter_bits(common))[:2]
                return a, b, c, d
    return None


def _detect(adj, alive: int) -> tuple[str, tuple[int, ...]]:
    best_v, best_d = -1, 5
    for v in iter_bits(alive):
        d = (adj[v] & alive).bit_count()
        if d < best_d:
            best_v, best_d = v, d
            if d == 1:
                break
    if best_d == 1:
        return "R1_DEG1", (best_v, (adj[best_v] & alive).bit_length() - 1)
    if best_d == 2:
        return "R2_DEG2", (best_v, *iter_bits(adj[best_v] & alive))
    tri = _triangle(adj, alive)
    if tri is not None:
        return "R3_TRIANGLE", tri
    if best_d == 3:
        return "R4_DEG3", (best_v, *iter_bits(adj[best_v] & alive))
    shared = _shared_c4(adj, alive)
    if shared is not None:
        p = shared[0]
        (x4,) = iter_bits(adj[p] & alive & ~sum(1 << x for x in shared[1:]))
        return "R5_C4_SHARED", (*shared, x4)
    cyc = _c4(adj, alive)
    if cyc is not None:
        return "R6_C4", cyc
    return "R7_4REG_C4FREE", (best_v,)


def _check_input(g: Graph) -> None:
    if g.n == 0:
        raise PreconditionViolated("graph is empty")
    for v, row in enumerate(g.adj):
        d = row.bit_count()
        if d == 0:
            raise PreconditionViolated(f"vertex {v} is isolated", vertex=v)
        if d > 4:
            raise PreconditionViolated(f"vertex {v} has degree {d} > 4", vertex=v)


def detect_case(g: Graph) -> tuple[str, tuple[int, ...]]:
    """First rule that applies, in the order pendant, degree 2, triangle,
    degree 3, two 4-cycles sharing an edge, any 4-cycle, otherwise 4-regular
    and C4-free."""
    _check_input(g)
    if g.n <= 7:
        raise PreconditionViolated("rule detection needs more than 7 vertices")
    return _detect(g.adj, (1 << g.n) - 1)


# -- deletion candidates --------------------------------------------------------------


def _candidate_sets(adj, alive: int, rule: str, anchor: tuple[int, ...]) -> Iterator[int]:
    def N(v: int) -> int:
        return adj[v] & alive

    def iso(d: int) -> int:
        return _isolated_after(adj, alive, d)

    bit = lambda v: 1 << v  # noqa: E731

    if rule == "R1_DEG1":
        p, x = anchor
        w0 = N(x) | bit(x)
        i0 = iso(w0)
        ys = list(iter_bits(N(x) & ~bit(p)))
        yield w0
        for y in ys:
            yield (w0 | i0) & ~bit(y)
        for y in ys:
            yield N(x) | N(y)
        for a in range(len(ys)):
            for b in range(a + 1, len(ys)):
                yield N(x) | N(ys[a]) | N(ys[b])
        return

    if rule in ("R2_DEG2", "R3_TRIANGLE", "R4_DEG3"):
        if rule == "R2_DEG2":
            p, x1, x2 = anchor
            pairs = [(p, x1), (p, x2)]
        elif rule == "R3_TRIANGLE":
            a, b, c = anchor
            pairs = [(a, b), (a, c), (b, c)]
        else:
            p = anchor[0]
            pairs = [(p, x) for x in anchor[1:]]
        bases = []
        for u, v in pairs:
            w = N(u) | N(v)
            bases.append((u, v, w, iso(w)))
        for _, _, w, _ in bases:
            yield w
        for u, v, w, i in bases:
            for t in iter_bits(w):
                for k in iter_bits(N(t) & ~(w | i)):
                    yield w | i | bit(k)
                if rule == "R4_DEG3" and t not in (u, v):
                    yield w | i | N(t)
        for u, v, w, i in bases:
            for t in iter_bits(w & ~(bit(u) | bit(v))):
                yield (w | i) & ~bit(t)
        return

    # 4-regular families: anchor p with neighbours labelled x1, x2, x3 and x4
    if rule == "R5_C4_SHARED":
        labelings = [anchor]
    elif rule == "R6_C4":
        a, b, c, d = anchor
        others = list(iter_bits(N(a) & ~(bit(b) | bit(d))))
        labelings = [(a, b, d, *others), (a, b, d, *others[::-1])]
    else:
        p = anchor[0]
        nb = list(iter_bits(N(p)))
        labelings = [(p, *[x for x in nb if x != x4], x4) for x4 in nb]

    per_labeling = []
    for lab in labelings:
        p, xs, x4 = lab[0], lab[1:-1], lab[-1]
        w = N(p)
        for x in xs:
            w |= N(x)
        i = iso(w)
        per_labeling.append((p, xs, x4, w, i))
    for p, xs, x4, w, i in per_labeling:
        yield w
    for p, xs, x4, w, i in per_labeling:
        yield (w | i) & ~bit(x4)
    for p, xs, x4, w, i in per_labeling:
        for k in iter_bits(N(x4) & ~(w | i)):
            yield w | i | bit(k)
            yield w | i | N(k) | bit(k)
    for p, xs, x4, w, i in per_labeling:
        for x in xs:
            ys = list(iter_bits(N(x) & ~bit(p)))
            for a in range(len(ys)):
                for b in range(a + 1, len(ys)):
                    ya, yb = ys[a], ys[b]
                    k_set = (N(ya) | N(yb)) & ~(w | i)
                    d = w | i | k_set
                    yield d
                    istar = iso(d)
                    for k in iter_bits(k_set):
                        yield d | istar | N(k)
                    yield w | N(ya) | N(yb)
        for y in iter_bits(w & ~(N(p) | bit(p))):
            yield w | i | N(y)


def _candidates(adj, alive: int, rule: str, anchor, cap: int | None) -> list[int]:
    seen = set()
    out = []
    for d in _candidate_sets(adj, alive, rule, anchor):
        d &= alive
        if d and d not in seen:
            seen.add(d)
            out.append(d)
            if cap is not None and len(out) >= cap:
                break
    return out


def deletion_candidates(
    g: Graph, rule: str, anchor: tuple[int, ...], cap: int | None = MAX_CANDIDATES
) -> list[DeletionCandidate]:
    alive = (1 << g.n) - 1
    out = []
    for d in _candidates(g.adj, alive, rule, anchor, cap):
        out.append(DeletionCandidate(VertexSet(d, g.n), VertexSet(_isolated_after(g.adj, alive, d), g.n)))
    return out


def _required(removed_count: int) -> int:
    return -(-2 * removed_count // 7)


def _certify(adj, removed: int, rest: int, required: int) -> int | None:
    """Region of ``removed`` in which a patch exists for every possible ``H``."""
    interior = 0
    by_pivot: dict[int, int] = {}
    for r in iter_bits(removed):
        out = adj[r] & rest
        if not out:
            interior |= 1 << r
        elif out & (out - 1) == 0:
            by_pivot[out] = by_pivot.get(out, 0) | 1 << r
    if _patch_mask(adj, interior, 0, required) is not None:
        return interior
    for pivot in sorted(by_pivot, key=lambda b: b.bit_length()):
        region = interior | by_pivot[pivot]
        if _patch_mask(adj, region, 0, required) is None:
            continue
        if _patch_mask(adj, region, pivot, required) is None:
            continue
        return region
    return None


# -- construction ----------------------------------------------------------------------


@dataclass
class _Pending:
    rule: str
    anchor: tuple[int, ...]
    deleted: int
    isolated: int
    region: int = 0
    required: int = 0
    patch: int | None = None


@dataclass
class _Engine:
    g: Graph
    cap: int | None = MAX_CANDIDATES
    exact_fallback: bool = True
    stats: dict = field(default_factory=lambda: {"certified": 0, "backtracked": 0, "exact": 0})

    def run(self, alive: int) -> tuple[list[_Pending], int]:
        """Plan steps top-down, then fill patches bottom-up."""
        adj = self.g.adj
        plan: list[_Pending] = []
        stack = list(reversed(component_masks(adj, alive)))
        while stack:
            comp = stack.pop()
            step, rest, nested = self._plan(comp)
            plan.append(step)
            if nested is not None:
                plan.extend(nested)
            elif rest:
                stack.extend(reversed(component_masks(adj, rest)))
        solution = 0
        for step in reversed(plan):
            if step.patch is None:
                found = _patch_mask(adj, step.region, solution, step.required)
                if found is None:
                    comp = step.deleted | step.isolated
                    raise ProofGapReport(
                        self._g6(comp), list(iter_bits(comp)), "certified patch not found"
                    )
                step.patch = found
            solution |= step.patch
        return plan, solution

    def _g6(self, mask: int) -> str:
        return to_graph6(induced_subgraph(self.g, mask)[0])

    def _plan(self, comp: int):
        adj = self.g.adj
        size = comp.bit_count()
        if size <= 7:
            u = (comp & -comp).bit_length() - 1
            nb = adj[u] & comp
            v = (nb & -nb).bit_length() - 1
            return _Pending("R0_BASE", (u, v), comp, 0, patch=1 << u | 1 << v), 0, None
        rule, anchor = _detect(adj, comp)
        cands = _candidates(adj, comp, rule, anchor, self.cap)
        prepared = []
        for d in cands:
            iso = _isolated_after(adj, comp, d)
            removed = d | iso
            rest = comp & ~removed
            req = _required(removed.bit_count())
            prepared.append((d, iso, rest, req))
            region = _certify(adj, removed, rest, req)
            if region is not None:
                self.stats["certified"] += 1
                return _Pending(rule, anchor, d, iso, region, req), rest, None
        # no candidate certified in advance: solve each remainder and try to patch
        for d, iso, rest, req in prepared:
            sub_plan, h = self.run(rest) if rest else ([], 0)
            p = _patch_mask(adj, d | iso, h, req)
            if p is not None:
                self.stats["backtracked"] += 1
                return _Pending(rule, anchor, d, iso, patch=p), rest, sub_plan
        if self.exact_fallback and size <= EXACT_FALLBACK_N:
            sub, index = induced_subgraph(self.g, comp)
            res = max_odd_induced_exact(sub)
            if 7 * res.optimum >= 2 * size:
                back = {i: v for v, i in index.items()}
                p = 0
                for i in res.witness:
                    p |= 1 << back[i]
                self.stats["exact"] += 1
                return _Pending(FALLBACK_RULE, anchor, comp, 0, patch=p), 0, None
        raise ProofGapReport(self._g6(comp), list(iter_bits(comp)), f"no {rule} candidate patched")


def construct_odd_subgraph(
    g: Graph, cap: int | None = MAX_CANDIDATES, exact_fallback: bool = True
) -> ReductionTrace:
    """Odd induced vertex set ``S`` with ``7 |S| >= 2 n`` plus the steps that built it.

    Requires maximum degree at most 4 and no isolated vertices.
    """
    _check_input(g)
    engine = _Engine(g, cap, exact_fallback)
    plan, solution = engine.run((1 << g.n) - 1)
    n = g.n
    steps = tuple(
        ReductionStep(
            s.rule, tuple(s.anchor), VertexSet(s.deleted, n), VertexSet(s.isolated, n),
            VertexSet(s.patch, n),
        )
        for s in plan
    )
    return ReductionTrace(steps, VertexSet(solution, n), n, engine.stats)


# -- audit ------------------------------------------------------------------------------


def first_failure(g: Graph, t: ReductionTrace) -> int | None:
    """Index of the first step that does not check out, ``len(steps)`` for a bad
    final set, or None when the whole trace is valid."""
    n = g.n
    if t.input_n != n:
        return 0
    adj = g.adj
    full = (1 << n) - 1
    alive = full
    for i, s in enumerate(t.steps):
        if s.deleted.n != n or s.patch.n != n or s.isolated_removed.n != n:
            return i
        d, iso, p = s.deleted.bits, s.isolated_removed.bits, s.patch.bits
        removed = d | iso
        if not d or d & ~alive or d & iso:
            return i
        if iso != _isolated_after(adj, alive, d):
            return i
        if p & ~removed or 7 * p.bit_count() < 2 * removed.bit_count():
            return i
        if s.rule_id not in RULES and s.rule_id != FALLBACK_RULE:
            return i
        alive &= ~removed
    if alive:
        return len(t.steps)
    solution = 0
    for i in range(len(t.steps) - 1, -1, -1):
        solution |= t.steps[i].patch.bits
        if not odd_mask(adj, solution):
            return i
    if solution != t.final_set.bits or not is_odd_set(g, solution):
        return len(t.steps)
    if 7 * solution.bit_count() < 2 * n:
        return len(t.steps)
    return None


def replay_trace(g: Graph, t: ReductionTrace) -> bool:
    return first_failure(g, t) is None
