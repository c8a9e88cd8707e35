import itertools

import pytest

from cardmso import corpus, oracle
from cardmso.errors import BudgetExceeded
from cardmso.formula import FormulaStats, analyze, parse_formula
from cardmso.graph import Graph, TypePartition, min_vertex_cover, type_partition
from cardmso.partitioning import (
    TOP, PartitionInstance, Shape, enumerate_shapes, mso_partition,
    shape_satisfies,
)
from conftest import cycle_graph, path_graph, random_graph, star_graph

INDEP = parse_formula(corpus.independence_body())
CLIQUE = parse_formula(corpus.clique_body())


def brute_chromatic(g: Graph) -> int:
    if g.n == 0:
        return 0
    for r in range(1, g.n + 1):
        if oracle.brute_partition(g, INDEP, r):
            return r
    raise AssertionError


class TestShapes:
    def test_two_types_sixteen_shapes(self):
        tp = TypePartition(((0, 1, 2), tuple(range(3, 13))), frozenset(), "nd")
        shapes = enumerate_shapes(tp, FormulaStats(0, 1, 1, 0))
        assert len(shapes) == 16
        per_first = {s.per_type[0] for s in shapes}
        assert per_first == {0, 1, 2, TOP}

    def test_singleton_type(self):
        tp = TypePartition(((0,),), frozenset(), "nd")
        shapes = enumerate_shapes(tp, FormulaStats(0, 1, 1, 0))
        assert [s.per_type for s in shapes] == [(0,), (1,)]

    def test_empty_graph_single_shape(self):
        tp = TypePartition((), frozenset(), "nd")
        assert enumerate_shapes(tp, FormulaStats(0, 1, 1, 0)) == [Shape(())]

    def test_budget(self):
        tp = TypePartition(tuple((i,) for i in range(40)), frozenset(), "nd")
        with pytest.raises(BudgetExceeded):
            enumerate_shapes(tp, FormulaStats(0, 1, 1, 0), shape_budget=1000)

    def test_top_only_above_threshold(self):
        tp = TypePartition(((0, 1),), frozenset(), "nd")
        shapes = enumerate_shapes(tp, FormulaStats(0, 1, 1, 0))  # threshold 2
        assert all(s.per_type[0] is not TOP for s in shapes)


class TestShapeSatisfies:
    def _tp(self, g):
        return type_partition(g, min_vertex_cover(g, g.n))

    def test_adjacent_cover_pair_fails_independence(self):
        g = path_graph(2)
        tp = self._tp(g)
        stats = analyze(INDEP)
        s = Shape((1, 1))
        assert shape_satisfies(g, tp, s, INDEP, stats) is False

    def test_empty_shape_vacuous(self):
        g = path_graph(2)
        tp = self._tp(g)
        s = Shape((0, 0))
        assert shape_satisfies(g, tp, s, INDEP, analyze(INDEP)) is True

    def test_c5_pairs(self):
        g = cycle_graph(5)
        tp = self._tp(g)
        stats = analyze(INDEP)
        type_of = tp.type_of(5)
        for u, v in itertools.combinations(range(5), 2):
            per = [0] * tp.count
            per[type_of[u]] += 1
            per[type_of[v]] += 1
            got = shape_satisfies(g, tp, Shape(tuple(per)), INDEP, stats)
            # C5 types are singletons, so the shape pins the pair exactly
            assert got == (not g.has_edge(u, v))

    def test_representative_independence(self, rng):
        # two disjoint materialisations of one shape agree on satisfaction
        stats = analyze(INDEP)
        small = stats.small_threshold
        for _ in range(60):
            g = random_graph(rng, rng.randint(1, 6))
            tp = type_partition(g, min_vertex_cover(g, g.n))
            per = []
            for members in tp.types:
                options = list(range(0, min(len(members), small) + 1))
                if len(members) > small:
                    options.append(TOP)
                per.append(rng.choice(options))
            s = Shape(tuple(per))
            base = shape_satisfies(g, tp, s, INDEP, stats)
            # alternative representative: take the last vertices instead
            picked = []
            for members, want in zip(tp.types, s.per_type):
                take = small + 1 if want is TOP else want
                picked.extend(members[-take:] if take else [])
            sub, _ = g.induced(picked)
            from cardmso.mso_eval import mso_check
            assert mso_check(sub, INDEP) == base


class TestMsoPartition:
    def test_c4_two_colours(self):
        assert mso_partition(cycle_graph(4), PartitionInstance(INDEP, 2)).holds

    def test_c5_needs_three(self):
        assert not mso_partition(cycle_graph(5), PartitionInstance(INDEP, 2)).holds
        assert mso_partition(cycle_graph(5), PartitionInstance(INDEP, 3)).holds

    def test_trivial_one_part(self):
        f = parse_formula("true")
        for g in (cycle_graph(4), star_graph(3), Graph.from_edges(0, [])):
            assert mso_partition(g, PartitionInstance(f, 1)).holds

    def test_witness_parts_are_checked(self):
        v = mso_partition(star_graph(4), PartitionInstance(INDEP, 2))
        assert v.holds
        assert len(v.parts) == 2
        assert set().union(*v.parts) == set(range(5))

    def test_chromatic_consistency(self, rng):
        for _ in range(12):
            g = random_graph(rng, rng.randint(1, 6))
            want = brute_chromatic(g)
            got = next(
                r for r in range(1, g.n + 1)
                if mso_partition(g, PartitionInstance(INDEP, r), allow_empty=False).holds
            )
            assert got == want

    def test_oracle_agreement_with_cliques(self, rng):
        for _ in range(15):
            g = random_graph(rng, rng.randint(1, 6))
            for r in range(1, g.n + 1):
                for phi in (INDEP, CLIQUE):
                    assert (
                        mso_partition(g, PartitionInstance(phi, r)).holds
                        == oracle.brute_partition(g, phi, r)
                    )

    def test_rejects_prefixed_formula(self):
        with pytest.raises(ValueError):
            PartitionInstance(parse_formula(corpus.bipartite_equal()), 2)

    def test_rejects_bad_r(self):
        with pytest.raises(ValueError):
            PartitionInstance(INDEP, 0)
