import random
from functools import lru_cache

import pytest

from cardmso.formula import Formula, constraint_truths
from cardmso.graph import Graph
from cardmso.mso_eval import PrefixAssignment, mso_check
from cardmso.solver import Verdict


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def random_graph(rng: random.Random, n: int, p: float = 0.45) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


@lru_cache(maxsize=None)
def atlas_connected(max_n: int) -> tuple[Graph, ...]:
    """All non-isomorphic connected graphs with 1..max_n vertices."""
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    out = []
    for G in graph_atlas_g():
        n = G.number_of_nodes()
        if 1 <= n <= max_n and nx.is_connected(G):
            relabel = {node: i for i, node in enumerate(sorted(G.nodes()))}
            edges = [(relabel[u], relabel[v]) for u, v in G.edges()]
            out.append(Graph.from_edges(n, edges))
    return tuple(out)


def assert_witness_valid(g: Graph, f: Formula, verdict: Verdict) -> None:
    """Always-on harness assertion: a positive verdict's witness must satisfy
    the body under direct semantics and comply with the reported alpha."""
    assert verdict.holds and verdict.witness is not None
    chi: PrefixAssignment = verdict.witness
    assert len(chi.sets) == f.m
    fixed = {name: s for name, s in zip(f.prefix, chi.sets)}
    from cardmso.formula import pre_evaluate

    sizes = {name: len(s) for name, s in zip(f.prefix, chi.sets)}
    alpha = constraint_truths(f, sizes)
    assert alpha == verdict.alpha, "witness does not comply with reported alpha"
    body_only = pre_evaluate(f, alpha)
    assert mso_check(g, body_only.body, fixed_sets=fixed), "witness fails the body"


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
