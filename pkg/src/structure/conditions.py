"""
Structural predicates on function tables: the conditional independence condition,
semi-informative alphabet partitions and product functions
"""
import logging
from typing import Dict, Iterable, List

import numpy as np

from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable, canonical_subset, first_occurrence_codes
from src.models.partitions import AlphabetPartitionTuple, TerminalPartition
from src.models.results import CIConditionResult
from src.structure.projection import fiber_span_mask, project

logger = logging.getLogger(__name__)


def check_ci_condition(f: FunctionTable, part: TerminalPartition) -> CIConditionResult:
    """
    True iff the span of every fiber of f lies inside a single block of ``part``

    Returns:
        CIConditionResult(holds, violating_value) where violating_value is the
        value code of the first fiber (by first occurrence) whose span fits no block
    """
    if part.num_terminals != f.num_terminals:
        raise PreconditionError(
            f"partition is over {part.num_terminals} terminals, function has {f.num_terminals}"
        )
    return ci_condition_from_spans(f, fiber_span_mask(f), part)


def ci_condition_from_spans(f: FunctionTable, spans: np.ndarray, part: TerminalPartition) -> CIConditionResult:
    """check_ci_condition on a precomputed fiber_span_mask of f"""
    fits = np.zeros(spans.shape[0], dtype=bool)
    for block in part.blocks:
        outside = np.ones(f.num_terminals, dtype=bool)
        outside[[t - 1 for t in block]] = False
        fits |= ~(spans & outside).any(axis=1)
    if fits.all():
        return CIConditionResult(True, None)
    _, first = first_occurrence_codes(np.asarray(f.values, dtype=np.int64))
    bad = int(np.flatnonzero(~fits)[0])
    return CIConditionResult(False, int(f.values[first[bad]]))


class _DisjointSets:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def labels(self) -> List[int]:
        return [self.find(x) for x in range(len(self.parent))]


def finest_semi_informative_tuple(f: FunctionTable, subset: Iterable[int]) -> AlphabetPartitionTuple:
    """
    Finest per-terminal partitions of X_l (l in A) for which f_A is semi-informative

    Symbols x_l and x_hat_l are merged whenever some x_A, x_hat_A with those
    l-components share an f_A value; the partition is the transitive closure.
    """
    projection = project(f, subset)
    g = projection.table
    inputs = g.inputs()
    codes = np.asarray(g.values, dtype=np.int64)

    labels: Dict[int, List[int]] = {}
    for i, terminal in enumerate(projection.subset):
        sets = _DisjointSets(g.alphabet_sizes[i])
        pairs = np.unique(np.stack([codes, inputs[:, i]], axis=1), axis=0)
        for (code, symbol), (prev_code, prev_symbol) in zip(pairs[1:], pairs[:-1]):
            if code == prev_code:
                sets.union(int(symbol), int(prev_symbol))
        labels[terminal] = sets.labels()
    return AlphabetPartitionTuple.from_labels(f.alphabet_sizes, labels)


def check_semi_informative(f: FunctionTable, subset: Iterable[int], partitions: AlphabetPartitionTuple) -> bool:
    """
    True iff f_A(x_A) = f_A(x_hat_A) implies [x_l] = [x_hat_l] for every l in A
    """
    subset = canonical_subset(subset, f.num_terminals)
    if not partitions.covers(subset):
        raise PreconditionError(f"alphabet partitions do not cover terminals {subset}")

    g = project(f, subset).table
    inputs = g.inputs()
    codes, _ = first_occurrence_codes(np.asarray(g.values, dtype=np.int64))
    num_values = int(codes.max()) + 1
    for i, terminal in enumerate(subset):
        classes = partitions.class_labels(terminal)[inputs[:, i]]
        lo = np.full(num_values, np.iinfo(np.int64).max, dtype=np.int64)
        hi = np.full(num_values, -1, dtype=np.int64)
        np.minimum.at(lo, codes, classes)
        np.maximum.at(hi, codes, classes)
        if (lo != hi).any():
            return False
    return True


def product_with_local(f: FunctionTable, partitions: AlphabetPartitionTuple) -> FunctionTable:
    """
    The product function x_L -> (f(x_L), ([x_l] : l in L)), value-normalized
    """
    if not partitions.covers(f.terminals):
        raise PreconditionError("alphabet partitions must cover every terminal")
    inputs = f.inputs()
    columns = [np.asarray(f.values, dtype=np.int64)]
    for terminal in f.terminals:
        columns.append(partitions.class_labels(terminal)[inputs[:, terminal - 1]])
    return FunctionTable.from_array(f.alphabet_sizes, np.stack(columns, axis=1), name=f.name)


def induced_partitions(f: FunctionTable) -> AlphabetPartitionTuple:
    """
    Induced partitions: x_l ~ x_hat_l iff f_{l}(x_l) = f_{l}(x_hat_l)

    For two terminals this is x ~ x_hat iff f(x, .) = f(x_hat, .).
    """
    labels = {t: list(project(f, (t,)).table.values) for t in f.terminals}
    return AlphabetPartitionTuple.from_labels(f.alphabet_sizes, labels)


def strictly_refines(finer: FunctionTable, coarser: FunctionTable) -> bool:
    """Whether a kernel known to refine ``coarser`` separates strictly more inputs"""
    return finer.num_values > coarser.num_values
