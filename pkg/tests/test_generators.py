import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddinduced import GenSpec, Infeasible, TooLarge, f_o, to_graph6
from oddinduced.generators import (
    SplitMix64, complete, cycle, derive_seed, disjoint_copies, generate, instance_stream,
    k7_minus_hamilton, largest_component, mix64, path, random_max_degree, random_regular,
    random_tree, star,
)
from oddinduced.graph import connected_components, has_triangle, is_connected


def test_splitmix_reference_values():
    # first outputs for seed 0 from the published SplitMix64 reference
    rng = SplitMix64(0)
    assert [rng.next64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F,
    ]


def test_derive_seed_is_mix_of_offset():
    assert derive_seed(5, 0) == mix64(5 + 0x9E3779B97F4A7C15)
    assert derive_seed(5, 0) != derive_seed(5, 1)


def test_below_and_uniform_ranges():
    rng = SplitMix64(9)
    assert all(0 <= rng.below(7) < 7 for _ in range(500))
    assert all(0.0 <= rng.uniform() < 1.0 for _ in range(500))


def test_k7_minus_hamilton():
    g = k7_minus_hamilton()
    assert g.degrees() == [4] * 7
    assert g.num_edges == 14
    assert f_o(g) == 2
    assert has_triangle(g) is not None


def test_k7_rotation_invariance():
    g = k7_minus_hamilton()
    for u, v in g.edges():
        assert g.has_edge((u + 1) % 7, (v + 1) % 7)


def test_disjoint_copies():
    k7 = k7_minus_hamilton()
    g = disjoint_copies(k7, 3)
    assert g.n == 21 and f_o(g) == 6
    assert len(connected_components(disjoint_copies(complete(2), 2))) == 2
    assert disjoint_copies(k7, 1) == k7
    with pytest.raises(TooLarge):
        disjoint_copies(path(2), 1 << 16)


def test_random_max_degree_contract():
    g = random_max_degree(8, 4, 0.5, seed=1)
    assert g.max_degree <= 4 and g.min_degree >= 1
    assert random_max_degree(2, 1, 0.0, seed=3) == complete(2)
    with pytest.raises(Infeasible):
        random_max_degree(2, 0, 0.5, seed=0)


def test_random_max_degree_many():
    for seed in range(1000):
        g = random_max_degree(50, 4, 0.1, seed)
        assert g.max_degree <= 4 and g.min_degree >= 1


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 60), st.integers(1, 4), st.floats(0, 1), st.integers(0, 2**64 - 1))
def test_random_max_degree_property(n, d, p, seed):
    if d == 1 and n % 2:
        with pytest.raises(Infeasible):
            random_max_degree(n, d, p, seed)
        return
    g = random_max_degree(n, d, p, seed)
    assert g.max_degree <= d and g.min_degree >= 1
    assert random_max_degree(n, d, p, seed) == g


def test_random_regular():
    g = random_regular(10, 3, seed=4)
    assert g.degrees() == [3] * 10
    with pytest.raises(Infeasible):
        random_regular(7, 3, seed=0)


def test_random_tree():
    g = random_tree(7, seed=2)
    assert g.num_edges == 6 and is_connected(g)
    h = nx.Graph(g.edges())
    assert nx.is_tree(h)
    assert random_tree(1, 0).n == 1


def test_small_families():
    assert cycle(4).degrees() == [2] * 4
    assert path(5).degrees() == [1, 2, 2, 2, 1]
    assert star(4).degrees() == [3, 1, 1, 1]
    with pytest.raises(Infeasible):
        cycle(2)


def test_genspec_json_roundtrip():
    spec = GenSpec("random_regular", {"n": 10, "d": 3}, seed=7)
    assert GenSpec.from_json(spec.to_json()) == spec
    assert GenSpec.from_json({"family": "path", "n": 5}).params == {"n": 5}
    with pytest.raises(ValueError):
        GenSpec("hexagon")


def test_stream_determinism():
    spec = GenSpec("random_max_degree", {"n": [8, 30], "max_degree": 4, "edge_prob": 0.3})
    a = [to_graph6(g) for _, g in instance_stream(spec, 20, seed=7)]
    b = [to_graph6(g) for _, g in instance_stream(spec, 20, seed=7)]
    assert a == b
    assert len(set(a)) > 1
    tail = [to_graph6(g) for _, g in instance_stream(spec, 20, seed=7, start=10)]
    assert tail == a[10:]


def test_nested_disjoint_copies_spec():
    spec = GenSpec.from_json({"family": "disjoint_copies", "params": {"base": {"family": "k7_minus_hamilton"}, "k": 2}})
    assert generate(spec).n == 14


def test_largest_component():
    g = disjoint_copies(path(3), 1)
    assert largest_component(g) == g
    from oddinduced.generators import disjoint_union
    u = disjoint_union(path(2), cycle(5))
    assert largest_component(u) == cycle(5)
