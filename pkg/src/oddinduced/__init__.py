"""Odd induced subgraphs: exact solver, constructive 2n/7 algorithm, Gallai partitions, campaigns."""

from .errors import (
    BudgetExceeded, IndexOutOfRange, Infeasible, InternalError, InvalidEdge,
    OddInducedError, ParseError, PreconditionViolated, ProofGapReport, TooLarge,
)
from .gallai import EvenPartition, even_even_partition, even_even_partition_bruteforce
from .generators import (
    GenSpec, SplitMix64, complete, cycle, derive_seed, disjoint_copies, generate,
    k7_minus_hamilton, path, random_max_degree, random_regular, random_tree, star,
)
from .graph import (
    DegreeProfile, Graph, VertexSet, connected_components, delete_vertices,
    four_cycles_sharing_edge, has_four_cycle, has_triangle, induced_subgraph,
    isolated_vertices, parse_edge_list, parse_graph6, read_graph, to_graph6,
)
from .parity import (
    SolveResult, enumerate_odd_sets, f_o, is_even_set, is_odd_set,
    max_odd_induced_exact, verify_bound,
)
from .reduction import (
    ReductionStep, ReductionTrace, construct_odd_subgraph, deletion_candidates,
    detect_case, patch_search, replay_trace,
)

__version__ = "0.1.0"
