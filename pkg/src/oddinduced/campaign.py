"""Verification campaigns: stream instances, run checks, write a report and a resumable ledger."""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

import numpy as np

from .errors import ProofGapReport, TooLarge
from .gallai import even_even_partition
from .generators import GenSpec, derive_seed, generate, largest_component
from .graph import Graph, parse_graph6, to_graph6
from .parity import batch_max_odd, f_o, first_isolated
from .reduction import construct_odd_subgraph, first_failure

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CHECKS = ("bound", "construct_validity", "construct_vs_exact", "gallai")
MODES = ("exhaustive", "random", "corpus")
EXHAUSTIVE_CHUNK = 1 << 20
MAX_LISTED = 200


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Bound:
    """``den * f_o >= num * n``, or the tree bound ``f_o >= 2 * floor((n + 1) / 3)``."""

    numerator: int = 2
    denominator: int = 7
    tree: bool = False

    @classmethod
    def parse(cls, value) -> "Bound":
        if isinstance(value, Bound):
            return value
        if value == "tree":
            return cls(tree=True)
        if isinstance(value, str):
            num, _, den = value.partition("/")
            return cls(int(num), int(den))
        if isinstance(value, dict):
            if value.get("kind") == "tree":
                return cls(tree=True)
            return cls(int(value["numerator"]), int(value["denominator"]))
        num, den = value
        return cls(int(num), int(den))

    def to_json(self):
        return "tree" if self.tree else f"{self.numerator}/{self.denominator}"

    def holds(self, fo: int, n: int) -> bool:
        if self.tree:
            return fo >= 2 * ((n + 1) // 3)
        return self.denominator * fo >= self.numerator * n


@dataclass
class CampaignConfig:
    mode: str
    bound: Bound = field(default_factory=Bound)
    checks: tuple[str, ...] = ("bound",)
    n_min: int = 2
    n_max: int = 7
    max_degree: int = 4
    allow_n8: bool = False
    spec: GenSpec | None = None
    count: int = 0
    component: str | None = None
    corpus: str | None = None
    jobs: int = 1
    seed: int = 0
    batch_size: int = 250

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ConfigError(f"unknown checks {bad}; expected a subset of {CHECKS}")
        if self.mode == "exhaustive":
            if self.n_max > 8 or (self.n_max == 8 and not self.allow_n8):
                raise ConfigError("exhaustive mode stops at n=7; n=8 needs allow_n8")
            if "construct_vs_exact" in self.checks and self.n_max > 20:
                raise ConfigError("construct_vs_exact needs n <= 20")
        if self.mode == "random" and self.spec is None:
            raise ConfigError("random mode needs a generator spec")
        if self.mode == "corpus" and not self.corpus:
            raise ConfigError("corpus mode needs a graph6 file path")
        if self.batch_size < 1 or self.jobs < 1:
            raise ConfigError("batch_size and jobs must be positive")

    @classmethod
    def from_json(cls, obj: dict, base_dir: Path | None = None) -> "CampaignConfig":
        obj = dict(obj)
        version = obj.pop("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema_version {version}")
        kw: dict[str, Any] = {"mode": obj.pop("mode")}
        if "bound" in obj:
            kw["bound"] = Bound.parse(obj.pop("bound"))
        if "checks" in obj:
            kw["checks"] = tuple(obj.pop("checks"))
        ex = obj.pop("exhaustive", {})
        for key in ("n_min", "n_max", "max_degree", "allow_n8"):
            if key in ex:
                kw[key] = ex[key]
        rnd = obj.pop("random", None)
        if rnd:
            kw["spec"] = GenSpec.from_json(rnd["spec"])
            kw["count"] = int(rnd["count"])
            kw["component"] = rnd.get("component")
        cor = obj.pop("corpus", None)
        if cor:
            path = Path(cor["path"] if isinstance(cor, dict) else cor)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            kw["corpus"] = str(path)
        for key in ("jobs", "seed", "batch_size"):
            if key in obj:
                kw[key] = int(obj.pop(key))
        if obj:
            raise ConfigError(f"unknown config keys {sorted(obj)}")
        return cls(**kw)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "mode": self.mode,
            "bound": self.bound.to_json(),
            "checks": list(self.checks),
            "seed": self.seed,
            "batch_size": self.batch_size,
        }
        if self.mode == "exhaustive":
            out["exhaustive"] = {
                "n_min": self.n_min, "n_max": self.n_max,
                "max_degree": self.max_degree, "allow_n8": self.allow_n8,
            }
        elif self.mode == "random":
            out["random"] = {"spec": self.spec.to_json(), "count": self.count}
            if self.component:
                out["random"]["component"] = self.component
        else:
            out["corpus"] = {"path": self.corpus}
        return out

    def fingerprint(self) -> str:
        # worker count does not change results, so it stays out of the hash
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# -- exhaustive enumeration -------------------------------------------------------


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def exhaustive_graphs(n: int, max_degree: int = 4) -> Iterator[Graph]:
    """Every labelled graph on ``n`` vertices with degrees in ``1..max_degree``.

    Edge sets are built pair by pair, last pair first with the pair left out
    before it is put in, so bitmasks (bit ``i`` = ``i``-th pair in lexicographic
    order) come out in increasing order.  Branches breaking the degree cap are
    cut immediately.
    """
    if n > 8:
        raise TooLarge("exhaustive enumeration is limited to n <= 8")
    pairs = _pairs(n)
    m = len(pairs)
    deg = [0] * n
    rows = [0] * n
    # vertex v loses its last chance of an edge once pair index drops below first[v]
    first = [min((i for i, p in enumerate(pairs) if v in p), default=0) for v in range(n)]

    def rec(i: int):
        if i < 0:
            if all(deg):
                yield Graph(n, tuple(rows))
            return
        u, v = pairs[i]
        if not (deg[u] == 0 and first[u] == i) and not (deg[v] == 0 and first[v] == i):
            yield from rec(i - 1)
        if deg[u] < max_degree and deg[v] < max_degree:
            deg[u] += 1
            deg[v] += 1
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            yield from rec(i - 1)
            deg[u] -= 1
            deg[v] -= 1
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)

    if n == 1:
        return
    yield from rec(m - 1)


def _exhaustive_chunk(n: int, max_degree: int, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Qualifying edge masks in ``[lo, hi)`` and their adjacency rows, vectorised."""
    pairs = _pairs(n)
    masks = np.arange(lo, hi, dtype=np.int64)
    deg = np.zeros((len(masks), n), dtype=np.int8)
    for i, (u, v) in enumerate(pairs):
        bit = ((masks >> i) & 1).astype(np.int8)
        deg[:, u] += bit
        deg[:, v] += bit
    keep = (deg.min(axis=1) >= 1) & (deg.max(axis=1) <= max_degree)
    masks = masks[keep]
    rows = np.zeros((len(masks), n), dtype=np.int64)
    for i, (u, v) in enumerate(pairs):
        bit = (masks >> i) & 1
        rows[:, u] |= bit << v
        rows[:, v] |= bit << u
    return masks, rows


def _graph_from_rows(row: np.ndarray) -> Graph:
    return Graph(len(row), tuple(int(x) for x in row))


# -- per-instance checks ------------------------------------------------------------


class _Tally:
    def __init__(self):
        self.instances = 0
        self.violations: list[dict] = []
        self.violation_count = 0
        self.gaps: list[dict] = []
        self.min_ratio: dict | None = None
        self.rules: dict[str, int] = {}
        self.engine: dict[str, int] = {}

    def violation(self, index, g6: str, kind: str, detail: str = "") -> None:
        self.violation_count += 1
        if len(self.violations) < MAX_LISTED:
            self.violations.append({"index": index, "graph6": g6, "kind": kind, "detail": detail})

    def ratio(self, index, fo: int, n: int, g6_fn) -> None:
        cur = self.min_ratio
        if cur is None or fo * cur["n"] < cur["f_o"] * n:
            self.min_ratio = {"f_o": fo, "n": n, "graph6": g6_fn(), "index": index}

    def to_json(self) -> dict:
        return {
            "instances": self.instances,
            "violations": self.violations,
            "violation_count": self.violation_count,
            "proof_gaps": self.gaps,
            "min_ratio": self.min_ratio,
            "rules": dict(sorted(self.rules.items())),
            "engine": dict(sorted(self.engine.items())),
        }


def check_instance(cfg: CampaignConfig, index, g: Graph, tally: _Tally, fo: int | None = None) -> None:
    tally.instances += 1
    g6 = None

    def code() -> str:
        nonlocal g6
        if g6 is None:
            g6 = to_graph6(g)
        return g6

    n = g.n
    iso = first_isolated(g)
    needs_clean = {"bound", "construct_validity", "construct_vs_exact"} & set(cfg.checks)
    if iso is not None and needs_clean:
        tally.violation(index, code(), "isolated_vertex", f"vertex {iso}")
        return
    if "construct_vs_exact" in cfg.checks and n > 20:
        raise ConfigError(f"construct_vs_exact needs n <= 20, instance {index} has n={n}")
    if fo is None and ({"bound", "construct_vs_exact"} & set(cfg.checks)):
        fo = f_o(g)
    if "bound" in cfg.checks:
        if not cfg.bound.holds(fo, n):
            tally.violation(index, code(), "bound", f"f_o={fo} n={n}")
        tally.ratio(index, fo, n, code)
    trace = None
    if {"construct_validity", "construct_vs_exact"} & set(cfg.checks):
        if g.max_degree > 4:
            tally.violation(index, code(), "max_degree", f"max degree {g.max_degree} > 4")
        else:
            try:
                trace = construct_odd_subgraph(g)
            except ProofGapReport as gap:
                if len(tally.gaps) < MAX_LISTED:
                    tally.gaps.append({"index": index, "graph6": gap.graph6, "reason": gap.reason})
                trace = None
            if trace is not None:
                for step in trace.steps:
                    tally.rules[step.rule_id] = tally.rules.get(step.rule_id, 0) + 1
                for k, v in trace.stats.items():
                    tally.engine[k] = tally.engine.get(k, 0) + v
                bad = first_failure(g, trace)
                size = len(trace.final_set)
                if bad is not None:
                    tally.violation(index, code(), "construct_invalid", f"step {bad}")
                elif 7 * size < 2 * n:
                    tally.violation(index, code(), "construct_bound", f"|S|={size} n={n}")
                if "construct_vs_exact" in cfg.checks:
                    if size > fo:
                        tally.violation(index, code(), "construct_exceeds_exact", f"|S|={size} f_o={fo}")
                    if 7 * fo < 2 * n:
                        tally.violation(index, code(), "exact_below_bound", f"f_o={fo} n={n}")
    if "gallai" in cfg.checks:
        part = even_even_partition(g)
        if not part.is_valid(g):
            tally.violation(index, code(), "gallai_invalid")
        elif 2 * max(len(part.part_one), len(part.part_two)) < n:
            tally.violation(index, code(), "gallai_half")


# -- batches --------------------------------------------------------------------------


def _batches(cfg: CampaignConfig) -> list[tuple]:
    if cfg.mode == "exhaustive":
        out = []
        for n in range(max(cfg.n_min, 2), cfg.n_max + 1):
            total = 1 << (n * (n - 1) // 2)
            for lo in range(0, total, EXHAUSTIVE_CHUNK):
                out.append(("exhaustive", n, lo, min(total, lo + EXHAUSTIVE_CHUNK)))
        return out
    if cfg.mode == "random":
        return [("random", lo, min(cfg.count, lo + cfg.batch_size)) for lo in range(0, cfg.count, cfg.batch_size)]
    lines = _corpus_lines(cfg.corpus)
    return [("corpus", lo, min(len(lines), lo + cfg.batch_size)) for lo in range(0, len(lines), cfg.batch_size)]


def _corpus_lines(path: str) -> list[str]:
    text = Path(path).read_text()
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def random_instance(cfg: CampaignConfig, index: int) -> Graph:
    g = generate(cfg.spec.with_seed(derive_seed(cfg.seed, index)))
    if cfg.component == "largest":
        g = largest_component(g)
    return g


def run_batch(cfg: CampaignConfig, batch: tuple) -> dict:
    tally = _Tally()
    kind = batch[0]
    if kind == "exhaustive":
        _, n, lo, hi = batch
        masks, rows = _exhaustive_chunk(n, cfg.max_degree, lo, hi)
        fos = batch_max_odd(rows, n) if "bound" in cfg.checks or "construct_vs_exact" in cfg.checks else None
        if fos is not None and cfg.checks == ("bound",):
            _fast_bound(cfg, n, masks, rows, fos, tally)
        else:
            for j, mask in enumerate(masks):
                fo = None if fos is None else int(fos[j])
                check_instance(cfg, [n, int(mask)], _graph_from_rows(rows[j]), tally, fo)
    elif kind == "random":
        _, lo, hi = batch
        for i in range(lo, hi):
            check_instance(cfg, i, random_instance(cfg, i), tally)
    else:
        _, lo, hi = batch
        lines = _corpus_lines(cfg.corpus)
        for i in range(lo, hi):
            check_instance(cfg, i, parse_graph6(lines[i]), tally)
    rec = tally.to_json()
    rec["batch"] = list(batch)
    return rec


def _fast_bound(cfg, n, masks, rows, fos, tally: _Tally) -> None:
    """Bound-only exhaustive batch, fully vectorised."""
    tally.instances += len(masks)
    if not len(masks):
        return
    if cfg.bound.tree:
        ok = fos >= 2 * ((n + 1) // 3)
    else:
        ok = cfg.bound.denominator * fos.astype(np.int64) >= cfg.bound.numerator * n
    for j in np.flatnonzero(~ok):
        tally.violation([n, int(masks[j])], to_graph6(_graph_from_rows(rows[j])), "bound", f"f_o={int(fos[j])} n={n}")
    j = int(np.argmin(fos))
    tally.ratio([n, int(masks[j])], int(fos[j]), n, lambda: to_graph6(_graph_from_rows(rows[j])))


def _merge(cfg: CampaignConfig, records: list[dict]) -> dict:
    violations, gaps = [], []
    total = vcount = 0
    best = None
    rules: dict[str, int] = {}
    engine: dict[str, int] = {}
    for rec in records:
        total += rec["instances"]
        vcount += rec["violation_count"]
        violations.extend(rec["violations"])
        gaps.extend(rec["proof_gaps"])
        r = rec["min_ratio"]
        if r is not None and (best is None or r["f_o"] * best["n"] < best["f_o"] * r["n"]):
            best = r
        for k, v in rec["rules"].items():
            rules[k] = rules.get(k, 0) + v
        for k, v in rec["engine"].items():
            engine[k] = engine.get(k, 0) + v
    if best is not None and not cfg.bound.tree:
        lhs = cfg.bound.denominator * best["f_o"]
        rhs = cfg.bound.numerator * best["n"]
        best = dict(best, bound_lhs=lhs, bound_rhs=rhs, equality=lhs == rhs)
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_json(),
        "config_fingerprint": cfg.fingerprint(),
        "instances_tested": total,
        "violation_count": vcount,
        "violations": violations[:MAX_LISTED],
        "proof_gap_reports": gaps[:MAX_LISTED],
        "min_ratio_seen": best,
        "rule_counts": dict(sorted(rules.items())),
        "engine_stats": dict(sorted(engine.items())),
        "batches": len(records),
    }
    report["status"] = "ok" if vcount == 0 and not gaps else "failed"
    return report


# -- driver ------------------------------------------------------------------------


def _read_ledger(path: Path, fingerprint: str) -> dict[str, dict]:
    done: dict[str, dict] = {}
    if not path.exists():
        return done
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("config_fingerprint") == fingerprint:
            done[json.dumps(rec["batch"])] = rec
    return done


def _worker(args):
    cfg, batch = args
    return run_batch(cfg, batch)


def run_campaign(
    cfg: CampaignConfig, ledger_path: str | Path | None = None, jobs: int | None = None
) -> dict:
    """Run every batch not already in the ledger and return the merged report.

    Ledger lines are appended in batch order by this process alone, so a rerun
    of a finished campaign appends nothing and rebuilds the same report.
    """
    start = time.perf_counter()
    batches = _batches(cfg)
    fingerprint = cfg.fingerprint()
    ledger = Path(ledger_path) if ledger_path else None
    done = _read_ledger(ledger, fingerprint) if ledger else {}
    todo = [b for b in batches if json.dumps(list(b)) not in done]
    jobs = jobs or cfg.jobs
    log.info("campaign %s: %d batches, %d already in ledger", fingerprint, len(batches), len(batches) - len(todo))

    def results() -> Iterator[dict]:
        if jobs > 1 and len(todo) > 1:
            import multiprocessing

            with multiprocessing.Pool(jobs) as pool:
                yield from pool.imap(_worker, [(cfg, b) for b in todo])
        else:
            for b in todo:
                yield run_batch(cfg, b)

    fh = ledger.open("a") if ledger else None
    try:
        for rec in results():
            rec["config_fingerprint"] = fingerprint
            done[json.dumps(rec["batch"])] = rec
            if fh:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
                fh.flush()
    finally:
        if fh:
            fh.close()
    report = _merge(cfg, [done[json.dumps(list(b))] for b in batches])
    report["wall_time"] = round(time.perf_counter() - start, 3)
    return report


def strip_wall_time(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "wall_time"}
