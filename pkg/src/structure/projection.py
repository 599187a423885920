"""
Projected functions and fiber spans

f_A maps x_A to the tuple (f(x_A, x_{A^c}) : x_{A^c} in lexicographic order).
A projection is materialized as a normalized FunctionTable over X_A, since every
downstream check only consumes its kernel.
"""
import logging
from typing import Iterable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable, Subset, canonical_subset, first_occurrence_codes

logger = logging.getLogger(__name__)


class ProjectedFunction(BaseModel):
    """f_A together with the base function it was taken from"""
    model_config = ConfigDict(frozen=True)

    base: FunctionTable
    subset: Subset
    table: FunctionTable

    @property
    def tuple_length(self) -> int:
        return self.base.size // self.table.size

    def value_tuples(self) -> np.ndarray:
        """One row per x_A (lexicographic over A) holding the base value codes"""
        return projection_rows(self.base, self.subset)


def projection_rows(f: FunctionTable, subset: Subset) -> np.ndarray:
    """Value array of f with the axes of ``subset`` moved to the front, flattened to 2-d"""
    front = [t - 1 for t in subset]
    back = [i for i in range(f.num_terminals) if i + 1 not in subset]
    moved = np.transpose(f.as_array(), front + back)
    rows = int(np.prod([f.alphabet_sizes[i] for i in front]))
    return moved.reshape(rows, -1)


def project(f: FunctionTable, subset: Iterable[int]) -> ProjectedFunction:
    """
    Materialize the projected function f_A

    Args:
        f: base function
        subset: nonempty set of terminals A

    Returns:
        ProjectedFunction whose ``table`` is f_A, value-normalized, over X_A
    """
    subset = canonical_subset(subset, f.num_terminals)
    if subset == f.terminals:
        return ProjectedFunction(base=f, subset=subset, table=f)

    codes, _ = first_occurrence_codes(projection_rows(f, subset))
    table = FunctionTable(
        alphabet_sizes=tuple(f.alphabet_sizes[t - 1] for t in subset),
        values=tuple(int(c) for c in codes),
    )
    return ProjectedFunction(base=f, subset=subset, table=table)


def fiber_span_mask(table: FunctionTable) -> np.ndarray:
    """
    Boolean matrix spans[c, i]: True iff the c-th fiber (by first occurrence)
    takes two values at coordinate i
    """
    inputs = table.inputs()
    codes, _ = first_occurrence_codes(np.asarray(table.values, dtype=np.int64))
    num_values = int(codes.max()) + 1
    lo = np.full((num_values, table.num_terminals), np.iinfo(np.int64).max, dtype=np.int64)
    hi = np.full((num_values, table.num_terminals), -1, dtype=np.int64)
    np.minimum.at(lo, codes, inputs)
    np.maximum.at(hi, codes, inputs)
    return lo != hi


def fiber_span(f: FunctionTable, subset: Iterable[int], fiber) -> Subset:
    """
    span of a set of inputs over X_A: the terminals of A at which the set varies

    Args:
        f: base function (only used to resolve A)
        subset: the terminals A that the fiber's columns refer to
        fiber: array-like of input tuples over X_A

    Returns:
        Sorted terminals of A; empty when the fiber has a single element
    """
    subset = canonical_subset(subset, f.num_terminals)
    points = np.asarray(fiber, dtype=np.int64)
    if points.size == 0:
        raise PreconditionError("fiber must be nonempty")
    points = points.reshape(-1, len(subset))
    varying = points.min(axis=0) != points.max(axis=0)
    return tuple(t for t, v in zip(subset, varying) if v)


def span_union(f: FunctionTable, subset: Iterable[int]) -> Subset:
    """Union of the spans of every fiber of f_A, as terminals of the base function"""
    projection = project(f, subset)
    covered = fiber_span_mask(projection.table).any(axis=0)
    return tuple(t for t, c in zip(projection.subset, covered) if c)


def fiber_spans(f: FunctionTable) -> Tuple[Subset, ...]:
    """span f^{-1}(v) for every value code v of f"""
    mask = fiber_span_mask(f)
    return tuple(tuple(int(i) + 1 for i in np.flatnonzero(row)) for row in mask)
