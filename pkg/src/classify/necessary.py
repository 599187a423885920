"""
Necessary and sufficient conditions: Han-Kobayashi conditions, the subset-pair
necessary condition, and the two span-based sufficient conditions
"""
import logging
from itertools import combinations
from typing import Iterator, Optional, Tuple

import numpy as np

from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable, Subset, first_occurrence_codes
from src.models.results import HKResult, NecessaryResult, Point, Witness
from src.structure.projection import fiber_span_mask, project, span_union

logger = logging.getLogger(__name__)


def first_collision(table: FunctionTable) -> Optional[Tuple[Point, Point]]:
    """
    First pair of inputs sharing a value, or None if the table is injective

    The second element is the earliest input whose value already occurred;
    the first element is where that value first occurred.
    """
    codes, first = first_occurrence_codes(np.asarray(table.values, dtype=np.int64))
    seen = np.zeros(codes.size, dtype=bool)
    seen[first] = True
    repeats = np.flatnonzero(~seen)
    if repeats.size == 0:
        return None
    j = int(repeats[0])
    i = int(first[codes[j]])
    return table.decode(i), table.decode(j)


def first_fully_differing_pair(table: FunctionTable) -> Optional[Tuple[Point, Point]]:
    """
    First pair x, x_hat in a common fiber with x_l != x_hat_l at every coordinate

    Fibers are scanned in first-occurrence order, pairs in input order.
    """
    inputs = table.inputs()
    codes, _ = first_occurrence_codes(np.asarray(table.values, dtype=np.int64))
    for code in range(int(codes.max()) + 1):
        points = inputs[codes == code]
        if len(points) < 2:
            continue
        differ = (points[:, None, :] != points[None, :, :]).all(axis=2)
        hits = np.argwhere(np.triu(differ, 1))
        if hits.size:
            i, j = hits[0]
            return tuple(int(c) for c in points[i]), tuple(int(c) for c in points[j])
    return None


def nonempty_subsets(num_terminals: int) -> Iterator[Subset]:
    """Nonempty subsets of {1..L} by size, then lexicographically"""
    terminals = range(1, num_terminals + 1)
    for k in range(1, num_terminals + 1):
        yield from combinations(terminals, k)


def hk_check(f: FunctionTable) -> HKResult:
    """
    Han-Kobayashi conditions for a two-terminal function

    1. rows f(a, .) are pairwise distinct
    2. columns f(., b) are pairwise distinct
    3. f(a, b) != f(a', b') whenever a != a' and b != b'

    Returns:
        HKResult(holds, failed_condition, witness pair)
    """
    if f.num_terminals != 2:
        raise PreconditionError(f"HK conditions need exactly 2 terminals, got {f.num_terminals}")

    for condition, terminal in ((1, 1), (2, 2)):
        pair = first_collision(project(f, (terminal,)).table)
        if pair is not None:
            return HKResult(False, condition, pair)

    pair = first_fully_differing_pair(f)
    if pair is not None:
        return HKResult(False, 3, pair)
    return HKResult(True, None, None)


def necessary_condition(f: FunctionTable) -> NecessaryResult:
    """
    For every nonempty A, pairs differing in every coordinate of A must differ under f_A

    Returns:
        NecessaryResult(holds, witness) with the first violating subset and pair
    """
    for subset in nonempty_subsets(f.num_terminals):
        pair = first_fully_differing_pair(project(f, subset).table)
        if pair is not None:
            logger.debug("necessary condition fails on %s: %s vs %s", subset, *pair)
            witness = Witness(kind="projection", subset=subset, first=pair[0], second=pair[1])
            return NecessaryResult(False, witness)
    return NecessaryResult(True, None)


def _complements_injective(f: FunctionTable) -> bool:
    # f_{L \ {l}} injective for every l
    if f.num_terminals == 1:
        return f.is_injective
    return all(
        project(f, tuple(t for t in f.terminals if t != ell)).table.is_injective
        for ell in f.terminals
    )


def sufficient_prop5(f: FunctionTable) -> bool:
    """Every fiber span has at most one terminal and every f_{L \\ {l}} is injective"""
    if (fiber_span_mask(f).sum(axis=1) > 1).any():
        return False
    return _complements_injective(f)


def sufficient_prop6(f: FunctionTable) -> bool:
    """The union of fiber spans is a strict subset of L and every f_{L \\ {l}} is injective"""
    if span_union(f, f.terminals) == f.terminals:
        return False
    return _complements_injective(f)
