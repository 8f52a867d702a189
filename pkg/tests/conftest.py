import itertools

import pytest
from hypothesis import strategies as st

from oddinduced import Graph, k7_minus_hamilton


def brute_max_odd(g: Graph) -> int:
    """Independent oracle: largest subset whose induced degrees are all odd."""
    best = 0
    for r in range(g.n, 0, -1):
        if r <= best:
            break
        for combo in itertools.combinations(range(g.n), r):
            s = set(combo)
            if all(sum(1 for u in s if g.has_edge(u, v)) % 2 == 1 for v in s):
                return r
    return best


@st.composite
def graphs(draw, min_n=0, max_n=12, max_degree=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    deg = [0] * n
    edges = []
    for (u, v), keep in zip(pairs, chosen):
        if not keep:
            continue
        if max_degree is not None and (deg[u] >= max_degree or deg[v] >= max_degree):
            continue
        deg[u] += 1
        deg[v] += 1
        edges.append((u, v))
    return Graph.from_edge_list(n, edges)


@pytest.fixture
def k7c7() -> Graph:
    return k7_minus_hamilton()


@pytest.fixture
def c4() -> Graph:
    return Graph.from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def k2() -> Graph:
    return Graph.from_edge_list(2, [(0, 1)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(RESULTS[key])
