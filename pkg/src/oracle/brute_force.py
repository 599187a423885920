"""
Brute-force reference implementations used to cross-check the fast deciders
"""
import logging
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable, canonical_subset
from src.models.partitions import AlphabetPartitionTuple, Block, partition_meet, restricted_growth_strings
from src.structure.conditions import check_semi_informative
from src.structure.projection import project, projection_rows, span_union

logger = logging.getLogger(__name__)

MAX_ORACLE_ALPHABET = 5

XiMapping = Dict[Tuple[int, ...], Tuple[Block, ...]]


def naive_pseudo_identity(f: FunctionTable, subset: Iterable[int]) -> bool:
    """
    Literal recursion: f_A is injective, or A~ is a strict subset of A and every
    B in {A~} plus the singletons {l} for l in A outside A~ is again a pseudo identity
    """
    subset = canonical_subset(subset, f.num_terminals)
    if project(f, subset).table.is_injective:
        return True
    reduced = span_union(f, subset)
    if reduced == subset:
        return False
    blocks = [reduced] + [(t,) for t in subset if t not in reduced]
    return all(naive_pseudo_identity(f, block) for block in blocks)


def brute_force_finest_tuple(f: FunctionTable, subset: Iterable[int]) -> AlphabetPartitionTuple:
    """
    Finest semi-informative alphabet partitions by exhaustive enumeration

    Semi-informativeness is checked per terminal, so every partition of each X_l
    is tried with the other terminals of A left trivial; the result is the meet of
    all partitions that pass.
    """
    subset = canonical_subset(subset, f.num_terminals)
    for t in subset:
        if f.alphabet_sizes[t - 1] > MAX_ORACLE_ALPHABET:
            raise PreconditionError(
                f"alphabet of terminal {t} has {f.alphabet_sizes[t - 1]} symbols, oracle limit is {MAX_ORACLE_ALPHABET}"
            )

    sizes = f.alphabet_sizes
    others = AlphabetPartitionTuple.trivial(sizes, subset)
    labels = {}
    for t in subset:
        meet = np.zeros(sizes[t - 1], dtype=np.int64)
        for rgs in restricted_growth_strings(sizes[t - 1]):
            candidate = AlphabetPartitionTuple.from_labels(sizes, {t: rgs})
            trial = others.restrict([u for u in subset if u != t]).merge(candidate)
            if check_semi_informative(f, subset, trial):
                meet = partition_meet(meet, np.asarray(rgs))
        labels[t] = meet.tolist()
    return AlphabetPartitionTuple.from_labels(sizes, labels)


def construct_xi_single_letter(
    f: FunctionTable,
    subset: Iterable[int],
    partitions: AlphabetPartitionTuple,
) -> Optional[XiMapping]:
    """
    Lookup from the value list (f(a_A, a_{A^c}) : a_{A^c}) to the classes [a_A]

    Returns:
        The mapping keyed by original value labels, or None when two inputs with
        the same value list fall in different classes
    """
    subset = canonical_subset(subset, f.num_terminals)
    if not partitions.covers(subset):
        raise PreconditionError(f"alphabet partitions do not cover terminals {subset}")

    rows = projection_rows(f, subset)
    sizes = tuple(f.alphabet_sizes[t - 1] for t in subset)
    class_of = {t: {s: c for c in partitions.partitions[t] for s in c} for t in subset}

    mapping: XiMapping = {}
    for index, row in enumerate(rows):
        point = np.unravel_index(index, sizes)
        key = tuple(f.label_of(int(v)) for v in row)
        classes = tuple(class_of[t][int(point[i])] for i, t in enumerate(subset))
        if mapping.setdefault(key, classes) != classes:
            logger.debug("value list %s reaches classes %s and %s", key, mapping[key], classes)
            return None
    return mapping
