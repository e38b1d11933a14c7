"""The enumeration oracles themselves, checked against raw recomputation.

The dual solvers restrict their search to structured subsets (forests,
partial matchings).  The solver tests lean on that restriction, so here the
restricted scans are compared against truly unrestricted subset scans on
instances small enough to enumerate completely.
"""

import itertools
import math

import numpy as np
import pytest

from minweight.families import (
    ExplicitFamily,
    MatchingFamily,
    SpanningTreeFamily,
    WeightAssignment,
)
from minweight.oracles import (
    OracleCheck,
    oracle_cheapest_completion,
    oracle_cheapest_within_distance_matching,
    oracle_cheapest_within_distance_tree,
    oracle_defect_under_budget_matching,
    oracle_defect_under_budget_tree,
    oracle_min_patch_size,
    oracle_min_weight,
    oracle_suite,
    partial_matchings,
    subset_sums,
    tree_component_table,
)
from minweight.oracles import _matching_costs
from minweight.rngs import stream
from minweight.weights import BaseLaw, WeightSpec, sample

SPEC = WeightSpec(q=1.0, base=BaseLaw.UNIFORM_POWER)


class TestSubsetSums:
    def test_matches_canonical_totals(self):
        # Sequential ascending-order sums agree bit-for-bit with the
        # assignment totals up to 7 elements (beyond that the vectorized
        # total regroups additions); every witness the small-instance
        # oracles select lives in the exact zone.
        values = stream(21).random(10)
        w = WeightAssignment(values)
        sums = subset_sums(values)
        assert sums.size == 1024
        for mask in range(1024):
            subset = tuple(i for i in range(10) if mask >> i & 1)
            if len(subset) <= 7:
                assert sums[mask] == w.total(subset)
            else:
                assert sums[mask] == pytest.approx(w.total(subset), rel=1e-12)

    def test_size_limit(self):
        with pytest.raises(ValueError):
            subset_sums(np.ones(25))


class TestTreeComponentTable:
    def test_small_cases(self):
        table = tree_component_table(4)
        assert table.size == 64
        assert table[0] == 4  # no edges: all singletons
        assert table[1] == 3  # one edge
        assert table[63] == 1  # all of K_4
        fam = SpanningTreeFamily(4)
        for member in fam.enumerate_members():
            mask = sum(1 << e for e in member)
            assert table[mask] == 1

    def test_component_counts_by_edge_count(self):
        # a subset with k edges has at least n - k components
        table = tree_component_table(4)
        for mask in range(64):
            assert table[mask] >= 4 - bin(mask).count("1")

    def test_size_guard(self):
        with pytest.raises(ValueError):
            tree_component_table(1)
        with pytest.raises(ValueError):
            tree_component_table(7)


class TestPartialMatchings:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_counts(self, n):
        sizes, padded = partial_matchings(n)
        expect = sum(
            math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1)
        )
        assert sizes.size == expect
        if n == 6:
            assert expect == 13327
        for k in range(n + 1):
            assert int((sizes == k).sum()) == \
                math.comb(n, k) ** 2 * math.factorial(k)

    def test_rows_are_matchings(self):
        sizes, padded = partial_matchings(3)
        seen = set()
        for size, row in zip(sizes, padded):
            edges = tuple(int(e) for e in row[:size])
            assert edges not in seen
            seen.add(edges)
            assert list(edges) == sorted(edges)
            rows_used = [e // 3 for e in edges]
            cols_used = [e % 3 for e in edges]
            assert len(set(rows_used)) == size
            assert len(set(cols_used)) == size
            assert all(int(e) == 9 for e in row[size:])  # sentinel padding

    def test_costs_match_canonical_totals(self):
        values = stream(22).random(16)
        w = WeightAssignment(values)
        sizes, padded = partial_matchings(4)
        costs = _matching_costs(padded, values)
        for size, row, cost in zip(sizes, padded, costs):
            assert cost == w.total(tuple(int(e) for e in row[:size]))

    def test_size_guard(self):
        with pytest.raises(ValueError):
            partial_matchings(0)
        with pytest.raises(ValueError):
            partial_matchings(7)


class TestMatchingRestrictionIsSound:
    """The matching oracles optimize over partial matchings only; dropping
    a subset's non-matching edges never hurts, so scanning all 2^(n*n) edge
    subsets must give the same answers."""

    def _full_scan_tables(self, n, values):
        sizes, padded = partial_matchings(n)
        match_masks = [
            sum(1 << int(e) for e in row[:size])
            for size, row in zip(sizes, padded)
        ]
        sums = subset_sums(values)
        num_subsets = 1 << (n * n)
        best_size = np.zeros(num_subsets, dtype=np.intp)
        for g in range(num_subsets):
            best_size[g] = max(
                int(s)
                for s, mm in zip(sizes, match_masks)
                if mm & ~g == 0
            )
        return sums, best_size

    def test_full_subset_scan_agrees(self):
        n = 3
        values = stream(23).random(9)
        w = WeightAssignment(values)
        sums, best_size = self._full_scan_tables(n, values)
        full = float(sums[-1])
        for frac in np.linspace(0.0, 1.0, 9):
            budget = frac * full
            afford = sums <= budget
            unrestricted = n - int(best_size[afford].max())
            assert oracle_defect_under_budget_matching(n, w, budget) == unrestricted
        for r in range(n + 1):
            ok = n - best_size <= r
            unrestricted = float(sums[ok].min())
            assert oracle_cheapest_within_distance_matching(n, w, r) == unrestricted


class TestForestRestrictionIsSound:
    """The seven-vertex brute force in the dual tests enumerates forests
    only; cyclic subsets pay for edges that cannot reduce the component
    count, so the unrestricted scan must agree wherever both fit."""

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_forest_only_scan_agrees(self, n):
        fam = SpanningTreeFamily(n)
        values = stream(24, n).random(fam.ground.size)
        w = WeightAssignment(values)
        table = tree_component_table(n).astype(np.intp)
        sums = subset_sums(values)
        popcount = np.array(
            [bin(mask).count("1") for mask in range(sums.size)], dtype=np.intp
        )
        forest = popcount == n - table  # acyclic subsets
        full = float(sums[(table == 1)].min())
        for frac in np.linspace(0.0, 1.2, 10):
            budget = frac * full
            afford = sums <= budget
            assert afford[0]
            all_subsets = int(table[afford].min()) - 1
            forests_only = int(table[afford & forest].min()) - 1
            assert all_subsets == forests_only
            assert oracle_defect_under_budget_tree(n, w, budget) == all_subsets
        for r in range(n):
            near = table - 1 <= r
            assert float(sums[near].min()) == float(sums[near & forest].min())
            assert oracle_cheapest_within_distance_tree(n, w, r) == \
                float(sums[near].min())


class TestMemberOracles:
    def test_min_weight_tie_break(self):
        fam = ExplicitFamily(4, [(0, 1), (2, 3)])
        w = WeightAssignment([0.25, 0.25, 0.3, 0.2])
        value, member = oracle_min_weight(fam, w)
        assert value == 0.5
        assert member == (0, 1)  # equal totals resolve to the smaller tuple

    def test_matches_solvers(self):
        fam = MatchingFamily(4)
        for trial in range(10):
            w = WeightAssignment(sample(SPEC, stream(25, trial), 16))
            value, member = oracle_min_weight(fam, w)
            solved = fam.min_weight(w)
            assert solved.value == value and solved.witness == member
            kept = member[:2]
            assert oracle_min_patch_size(fam, kept) == fam.min_patch_size(kept)
            cost, patch = oracle_cheapest_completion(fam, kept, w)
            assert set(patch).isdisjoint(kept)

    def test_completion_is_exhaustive(self):
        fam = ExplicitFamily(5, [(0, 1, 2), (2, 3, 4), (0, 4)])
        w = WeightAssignment([0.5, 0.1, 0.2, 0.9, 0.3])
        cost, patch = oracle_cheapest_completion(fam, (2,), w)
        # completing (2,) inside (0,1,2) costs 0.6, inside (2,3,4) costs 1.2
        assert cost == pytest.approx(0.6)
        assert patch == (0, 1)


class TestOracleSuite:
    def test_full_agreement(self):
        checks = oracle_suite(vectors=5, master_seed=11)
        assert len(checks) == 50  # 10 instances x 5 operations
        assert all(isinstance(c, OracleCheck) for c in checks)
        for check in checks:
            assert check.trials == 5
            assert check.agreed == check.trials, check
        assert {c.family for c in checks} == {"tree", "matching"}
        assert {c.n for c in checks if c.family == "tree"} == {2, 3, 4, 5}
        assert {c.n for c in checks if c.family == "matching"} == set(range(1, 7))
        assert {c.operation for c in checks} == {
            "min_weight",
            "min_patch_size",
            "exact_patch",
            "defect_under_budget",
            "cheapest_within_distance",
        }

    def test_seed_sensitivity(self):
        # different master seeds draw different weight vectors but the
        # agreement record has the same shape
        a = oracle_suite(vectors=2, master_seed=1)
        b = oracle_suite(vectors=2, master_seed=2)
        assert [(c.family, c.n, c.operation) for c in a] == \
            [(c.family, c.n, c.operation) for c in b]
