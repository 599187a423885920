import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable
from src.models.partitions import AlphabetPartitionTuple, TerminalPartition
from src.structure.conditions import (
    check_ci_condition,
    check_semi_informative,
    finest_semi_informative_tuple,
    induced_partitions,
    product_with_local,
)
from src.structure.projection import fiber_span, fiber_spans, project, span_union
from strategies import small_functions


def labelled_rows(projection):
    base = projection.base
    return [tuple(base.label_of(int(v)) for v in row) for row in projection.value_tuples()]


class TestProject:
    def test_table1_rows(self, table1):
        p = project(table1, [1])
        assert labelled_rows(p) == [(0, 3, 3), (0, 4, 2), (1, 1, 2)]
        assert p.table.is_injective

    def test_table2_rows_collide(self, table2):
        p = project(table2, [1])
        assert labelled_rows(p)[1] == labelled_rows(p)[2] == (3, 4, 2)
        assert p.table.values == (0, 1, 1)

    def test_full_subset_is_f(self, table4):
        assert project(table4, [1, 2, 3, 4]).table == table4

    def test_tuple_length(self, table4):
        assert project(table4, [2]).tuple_length == 8

    def test_empty_subset(self, table1):
        with pytest.raises(PreconditionError):
            project(table1, [])


class TestSpans:
    def test_table1_fiber_of_zero(self, table1):
        assert fiber_span(table1, [1, 2], table1.fiber_of_label(0)) == (1,)

    def test_singleton_fiber(self, table1):
        assert fiber_span(table1, [1, 2], table1.fiber_of_label(4)) == ()

    def test_example8_fiber_of_three(self, example8):
        fiber = example8.fiber_of_label(3)
        assert sorted(map(tuple, fiber.tolist())) == [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]
        assert fiber_span(example8, [1, 2, 3], fiber) == (1, 2)

    def test_empty_fiber(self, table1):
        with pytest.raises(PreconditionError):
            fiber_span(table1, [1, 2], np.zeros((0, 2), dtype=int))

    def test_span_unions(self, example8, mod2sum, table4):
        assert span_union(example8, [1, 2, 3]) == (1, 2)
        assert span_union(mod2sum, [1, 2]) == (1, 2)
        assert span_union(table4, [1, 2, 3, 4]) == (1, 2, 3, 4)


class TestCICondition:
    def test_table4(self, table4):
        part = TerminalPartition.parse("{1,2}/{3,4}", 4)
        assert check_ci_condition(table4, part).holds

    def test_table1(self, table1):
        assert check_ci_condition(table1, TerminalPartition.parse("{1}/{2}", 2)).holds

    def test_mod2sum_fails_on_zero(self, mod2sum):
        result = check_ci_condition(mod2sum, TerminalPartition.parse("{1}/{2}", 2))
        assert not result.holds
        assert result.violating_value == 0

    def test_partition_size_mismatch(self, table1):
        with pytest.raises(PreconditionError):
            check_ci_condition(table1, TerminalPartition.finest(3))


class TestSemiInformative:
    def test_table2_induced_partitions(self, table2):
        assert finest_semi_informative_tuple(table2, [1]).partitions == {1: ((0,), (1, 2))}
        assert finest_semi_informative_tuple(table2, [2]).is_finest()

    def test_example8_merges_terminal_one(self, example8):
        t = finest_semi_informative_tuple(example8, [1, 2])
        assert t.partitions == {1: ((0, 1),), 2: ((0,), (1,))}

    def test_injective_projection_gives_finest(self, table1):
        assert finest_semi_informative_tuple(table1, [1]).is_finest()

    def test_table4_finest_on_first_block(self, table4):
        assert check_semi_informative(table4, [1, 2], AlphabetPartitionTuple.finest(table4.alphabet_sizes, [1, 2]))

    def test_example8_finest_fails_merged_passes(self, example8):
        sizes = example8.alphabet_sizes
        assert not check_semi_informative(example8, [1, 2], AlphabetPartitionTuple.finest(sizes, [1, 2]))
        merged = AlphabetPartitionTuple.from_labels(sizes, {1: [0, 0], 2: [0, 1]})
        assert check_semi_informative(example8, [1, 2], merged)

    def test_trivial_always_passes(self, mod2sum):
        assert check_semi_informative(mod2sum, [1, 2], AlphabetPartitionTuple.trivial(mod2sum.alphabet_sizes))

    def test_tuple_must_cover_subset(self, mod2sum):
        with pytest.raises(PreconditionError):
            check_semi_informative(mod2sum, [1, 2], AlphabetPartitionTuple.finest(mod2sum.alphabet_sizes, [1]))

    def test_induced_partitions_two_terminals(self, table2):
        assert induced_partitions(table2).partitions == {1: ((0,), (1, 2)), 2: ((0,), (1,), (2,))}


class TestProductWithLocal:
    def test_finest_tuple_separates_everything(self, table1):
        assert product_with_local(table1, AlphabetPartitionTuple.finest(table1.alphabet_sizes)).is_injective

    def test_trivial_tuple_keeps_kernel(self, table4):
        g = product_with_local(table4, AlphabetPartitionTuple.trivial(table4.alphabet_sizes))
        assert g.kernel_key() == table4.kernel_key()

    def test_example8_first_recursion_step(self, example8):
        local = AlphabetPartitionTuple.from_labels(example8.alphabet_sizes, {1: [0, 0], 2: [0, 1], 3: [0, 1]})
        g = product_with_local(example8, local)
        classes = {}
        for index, code in enumerate(g.values):
            classes.setdefault(code, []).append(g.decode(index))
        assert sorted(classes.values()) == [
            [(0, 0, 0)],
            [(0, 0, 1), (1, 0, 1)],
            [(0, 1, 0), (1, 1, 0)],
            [(0, 1, 1), (1, 1, 1)],
            [(1, 0, 0)],
        ]


@given(small_functions())
@settings(max_examples=60, deadline=None)
def test_spans_are_minimal(f):
    inputs = f.inputs()
    for code, span in enumerate(fiber_spans(f)):
        fiber = inputs[np.asarray(f.values) == code]
        outside = [t - 1 for t in f.terminals if t not in span]
        # pinned outside the span, free inside it
        assert (fiber[:, outside] == fiber[0, outside]).all()
        for t in span:
            assert len(set(fiber[:, t - 1].tolist())) >= 2


@given(small_functions(), st.data())
@settings(max_examples=60, deadline=None)
def test_span_union_stays_inside_subset(f, data):
    subset = data.draw(st.sets(st.sampled_from(f.terminals), min_size=1))
    assert set(span_union(f, subset)) <= subset


@given(small_functions(), st.data())
@settings(max_examples=60, deadline=None)
def test_finest_tuple_is_minimal(f, data):
    subset = sorted(data.draw(st.sets(st.sampled_from(f.terminals), min_size=1)))
    t = finest_semi_informative_tuple(f, subset)
    assert check_semi_informative(f, subset, t)
    sizes = f.alphabet_sizes
    for terminal in subset:
        labels = {u: list(t.class_labels(u)) for u in subset}
        for cls in t.partitions[terminal]:
            if len(cls) < 2:
                continue
            # splitting a class off its first symbol must break semi-informativeness
            split = list(labels[terminal])
            split[cls[0]] = max(split) + 1
            finer = AlphabetPartitionTuple.from_labels(sizes, {**labels, terminal: split})
            assert not check_semi_informative(f, subset, finer)
        if len(t.partitions[terminal]) >= 2:
            merged = [0 if label == 1 else label for label in labels[terminal]]
            coarser = AlphabetPartitionTuple.from_labels(sizes, {**labels, terminal: merged})
            assert check_semi_informative(f, subset, coarser)


@given(small_functions(), st.data())
@settings(max_examples=60, deadline=None)
def test_product_kernel_is_common_refinement(f, data):
    labels = {t: data.draw(st.lists(st.integers(0, 1), min_size=s, max_size=s)) for t, s in zip(f.terminals, f.alphabet_sizes)}
    local = AlphabetPartitionTuple.from_labels(f.alphabet_sizes, labels)
    g = product_with_local(f, local)
    inputs = f.inputs()
    keys = set()
    for index, x in enumerate(inputs):
        keys.add((f.values[index],) + tuple(int(local.class_labels(t)[x[t - 1]]) for t in f.terminals))
    assert g.num_values == len(keys)
    for i, j in itertools.combinations(range(f.size), 2):
        if g.values[i] == g.values[j]:
            assert f.values[i] == f.values[j]


@given(small_functions())
@settings(max_examples=60, deadline=None)
def test_finest_terminal_partition_means_spans_of_size_one(f):
    holds = check_ci_condition(f, TerminalPartition.finest(f.num_terminals)).holds
    assert holds == all(len(span) <= 1 for span in fiber_spans(f))
