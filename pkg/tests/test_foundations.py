"""Tests for foundations.py — set lifting, minors, joins and Kleene iteration."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foundations import (
    SUBSET,
    SUPERSET,
    Antichain,
    KleeneStats,
    Quasiorder,
    join,
    kleene,
    minor,
    sqsubseteq,
    tag_value,
    tagged_minor,
    vector_sqsubseteq,
)

LEQ_INT = Quasiorder(lambda x, y: x <= y, "int")
DIVIDES = Quasiorder(lambda x, y: y % x == 0, "divides")

masks = st.lists(st.integers(min_value=0, max_value=63), max_size=8)


class TestQuasiorder:
    def test_callable(self):
        assert LEQ_INT(1, 2)
        assert not LEQ_INT(2, 1)

    def test_subset_superset(self):
        assert SUBSET(0b010, 0b110)
        assert not SUBSET(0b110, 0b010)
        assert SUPERSET(0b110, 0b010)
        assert SUBSET(0, 0)


class TestSqsubseteq:
    def test_empty_left_always_below(self):
        assert sqsubseteq([], [], LEQ_INT)
        assert sqsubseteq([], [3], LEQ_INT)

    def test_nonempty_never_below_empty(self):
        assert not sqsubseteq([1], [], LEQ_INT)

    def test_dominated_from_below(self):
        assert sqsubseteq([4, 6], [2, 3], DIVIDES)
        assert not sqsubseteq([5], [2, 3], DIVIDES)

    def test_key(self):
        xs = [(4, "x")]
        ys = [(2, "y")]
        assert sqsubseteq(xs, ys, DIVIDES, tag_value)

    def test_vector_lifting(self):
        assert vector_sqsubseteq(([4], []), ([2], [7]), DIVIDES)
        assert not vector_sqsubseteq(([4], [7]), ([2], []), DIVIDES)


class TestMinor:
    def test_keeps_minimal_elements(self):
        result = minor([6, 2, 3, 12], DIVIDES)
        assert isinstance(result, Antichain)
        assert sorted(result) == [2, 3]

    def test_first_representative_wins(self):
        equal = Quasiorder(lambda x, y: x[0] == y[0], "first")
        result = minor([(1, "u"), (1, "v"), (2, "w")], equal)
        assert list(result) == [(1, "u"), (2, "w")]

    def test_empty(self):
        assert list(minor([], LEQ_INT)) == []
        assert not minor([], LEQ_INT)

    def test_tagged_minor_prefers_least_word(self):
        result = tagged_minor(
            [(0b1, ("b",)), (0b1, ("a",)), (0b11, ())],
            SUBSET,
            lambda w: (len(w), w),
        )
        assert list(result) == [(0b1, ("a",))]
        assert result.keys() == [0b1]

    @given(xs=masks)
    @settings(max_examples=1000, deadline=None)
    def test_minor_laws(self, xs):
        """X ⊑ ⌊X⌋ ⊑ X and the result is an antichain."""
        m = list(minor(xs, SUBSET))
        assert sqsubseteq(xs, m, SUBSET)
        assert sqsubseteq(m, xs, SUBSET)
        for i, x in enumerate(m):
            for j, y in enumerate(m):
                if i != j:
                    assert not SUBSET(x, y)


class TestJoin:
    def test_join_is_minor_of_union(self):
        assert sorted(join([4, 9], [2], DIVIDES)) == [2, 9]

    def test_method(self):
        left = minor([0b110], SUBSET)
        assert list(left.join([0b010])) == [0b010]

    @given(xs=masks, ys=masks)
    @settings(max_examples=1000, deadline=None)
    def test_join_is_upper_bound(self, xs, ys):
        joined = list(join(minor(xs, SUBSET), minor(ys, SUBSET), SUBSET))
        assert sqsubseteq(xs, joined, SUBSET)
        assert sqsubseteq(ys, joined, SUBSET)


class TestKleene:
    def test_counts_applications(self):
        # f(x) = min(x + 1, 3) from 0: iterates 1, 2, 3, 3
        x, stats = kleene(lambda new, old: new == old, lambda x: min(x + 1, 3), 0)
        assert x == 3
        assert stats.iterations == 4

    def test_immediate_convergence(self):
        x, stats = kleene(lambda new, old: True, lambda x: x, "a")
        assert x == "a"
        assert stats.iterations == 1

    def test_returns_previous_iterate(self):
        # convergence is checked as conv(f(x), x) and x is returned
        x, _ = kleene(lambda new, old: new <= old + 1, lambda x: x + 1, 0)
        assert x == 0

    def test_observer_and_frontier(self):
        seen = []
        _, stats = kleene(
            lambda new, old: new == old,
            lambda x: x | {len(x)} if len(x) < 2 else x,
            frozenset(),
            observer=seen.append,
            frontier=len,
        )
        assert seen == [{0}, {0, 1}, {0, 1}]
        assert stats.max_frontier == 2

    def test_cap_exceeded(self):
        with pytest.raises(RuntimeError, match="cap of 5"):
            kleene(lambda new, old: False, lambda x: x + 1, 0, cap=5)

    def test_cap_reached_on_convergence(self):
        _, stats = kleene(lambda new, old: new == old, lambda x: min(x + 1, 1), 0, cap=2)
        assert stats.iterations == 2

    def test_stats_defaults(self):
        assert KleeneStats() == KleeneStats(iterations=0, max_frontier=0)
