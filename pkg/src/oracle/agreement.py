"""
Cross-checks between the fast deciders and the brute-force references
"""
import logging
from typing import Any, Dict, List, Optional

import numpy as np

from src.models.function_table import FunctionTable, format_subset
from src.models.partitions import AlphabetPartitionTuple
from src.classify.necessary import nonempty_subsets
from src.classify.pseudo_identity import pseudo_identity
from src.oracle.brute_force import MAX_ORACLE_ALPHABET, brute_force_finest_tuple, construct_xi_single_letter, naive_pseudo_identity
from src.oracle.sampling import random_function
from src.structure.conditions import check_semi_informative, finest_semi_informative_tuple

logger = logging.getLogger(__name__)


def agreement_report(f: FunctionTable) -> List[str]:
    """
    Every disagreement between a decider and its reference on f

    Compares pseudo_identity with the literal recursion, the finest semi-informative
    tuple with exhaustive enumeration, and semi-informativeness with the existence
    of the single-letter lookup (on the finest tuple and on the finest alphabets).
    """
    problems = []
    fast = pseudo_identity(f).holds
    slow = naive_pseudo_identity(f, f.terminals)
    if fast != slow:
        problems.append(f"pseudo identity: recursion {fast}, literal {slow}")

    finest_all = AlphabetPartitionTuple.finest(f.alphabet_sizes)
    small = max(f.alphabet_sizes) <= MAX_ORACLE_ALPHABET
    for subset in nonempty_subsets(f.num_terminals):
        name = format_subset(subset)
        closure = finest_semi_informative_tuple(f, subset)
        if small:
            reference = brute_force_finest_tuple(f, subset)
            if closure != reference:
                problems.append(f"finest tuple on {name}: {closure.describe()} vs {reference.describe()}")
        for candidate in (closure, finest_all.restrict(subset)):
            informative = check_semi_informative(f, subset, candidate)
            mapped = construct_xi_single_letter(f, subset, candidate) is not None
            if informative != mapped:
                problems.append(f"lookup on {name} for {candidate.describe()}: check {informative}, lookup {mapped}")
    return problems


def agreement_sweep(
    count: int,
    seed: int = 0,
    max_terminals: int = 3,
    max_alphabet: int = 3,
    max_values: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Run agreement_report over seeded random functions

    Shapes and value counts are drawn per function, so the sweep mixes injective,
    constant and in-between tables.
    """
    rng = np.random.default_rng(seed)
    failures = []
    for index in range(count):
        num_terminals = int(rng.integers(1, max_terminals + 1))
        sizes = [int(s) for s in rng.integers(1, max_alphabet + 1, size=num_terminals)]
        size = int(np.prod(sizes))
        num_values = int(rng.integers(1, (max_values or size) + 1))
        f = random_function(rng, sizes, num_values)
        problems = agreement_report(f)
        if problems:
            logger.warning("function %d %s disagrees: %s", index, sizes, "; ".join(problems))
            failures.append({"index": index, "alphabets": sizes, "values": list(f.values), "problems": problems})
    return {"checked": count, "seed": seed, "disagreements": failures}
