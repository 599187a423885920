"""
Seeded random functions and distributions, and the conditional-independence falsifier
"""
import logging
from typing import Optional, Sequence

import numpy as np

from src.models.distribution import JointDistribution
from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable
from src.models.partitions import TerminalPartition
from src.rates.independence import ci_factorization_deviation

logger = logging.getLogger(__name__)

FALSIFY_THRESHOLD = 1e-6


def random_function(rng: np.random.Generator, alphabet_sizes: Sequence[int], num_values: int) -> FunctionTable:
    """Uniformly random table with values drawn from {0..num_values-1}, normalized"""
    size = int(np.prod(alphabet_sizes))
    values = rng.integers(0, num_values, size=size)
    return FunctionTable.from_array(alphabet_sizes, values)


def random_distribution(rng: np.random.Generator, alphabet_sizes: Sequence[int]) -> JointDistribution:
    """Full-support distribution from normalized exponential variates"""
    weights = rng.exponential(size=tuple(alphabet_sizes))
    # exponential draws can round to 0 in principle
    weights = np.maximum(weights, np.finfo(np.float64).tiny)
    return JointDistribution.from_array(weights)


def ci_falsifier(
    f: FunctionTable,
    part: TerminalPartition,
    trials: int = 100,
    seed: int = 0,
) -> Optional[JointDistribution]:
    """
    Search for a full-support P that breaks the factorization across ``part``

    Returns:
        The first sampled distribution with deviation above 1e-6, or None
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        P = random_distribution(rng, f.alphabet_sizes)
        deviation = ci_factorization_deviation(P, f, part)
        if deviation > FALSIFY_THRESHOLD:
            logger.info("falsified %s at trial %d (deviation %.3g)", part.describe(), trial, deviation)
            return P
    logger.info("failed to falsify %s in %d trials", part.describe(), trials)
    return None
