"""
Numerical conditional-independence checks

Blocks of a terminal partition are conditionally independent given an auxiliary S
when P(x_L, s) = P_S(s) prod_A P(x_A | s). Two auxiliaries are tried: S = f(X_L)
and S constant.
"""
import logging
from typing import Literal

import numpy as np

from src.models.distribution import INTERNAL_TOLERANCE, JointDistribution
from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable, first_occurrence_codes
from src.models.partitions import TerminalPartition
from src.models.results import MixtureCIResult

logger = logging.getLogger(__name__)

Auxiliary = Literal["best", "value", "constant"]


def _check_compatible(P: JointDistribution, f: FunctionTable):
    if not P.compatible_with(f):
        raise PreconditionError(
            f"distribution alphabets {list(P.alphabet_sizes)} do not match function alphabets {list(f.alphabet_sizes)}"
        )


def _block_product(joint: np.ndarray, part: TerminalPartition) -> np.ndarray:
    """prod_A of the block marginals of ``joint`` (normalized), broadcast back to full shape"""
    total = joint.sum()
    cond = joint / total
    product = np.ones_like(cond)
    for block in part.blocks:
        others = tuple(i for i in range(cond.ndim) if i + 1 not in block)
        product = product * cond.sum(axis=others, keepdims=True)
    return total * product


def _value_deviation(P: JointDistribution, f: FunctionTable, part: TerminalPartition) -> float:
    probs = P.as_array()
    codes, _ = first_occurrence_codes(np.asarray(f.values, dtype=np.int64))
    codes = codes.reshape(f.alphabet_sizes)
    worst = 0.0
    for v in range(int(codes.max()) + 1):
        joint = np.where(codes == v, probs, 0.0)
        if joint.sum() <= 0:
            continue
        worst = max(worst, float(np.abs(joint - _block_product(joint, part)).max()))
    return worst


def _constant_deviation(P: JointDistribution, part: TerminalPartition) -> float:
    probs = P.as_array()
    return float(np.abs(probs - _block_product(probs, part)).max())


def ci_factorization_deviation(
    P: JointDistribution,
    f: FunctionTable,
    part: TerminalPartition,
    auxiliary: Auxiliary = "best",
) -> float:
    """
    Max-norm gap between P and its factorization across the blocks of ``part``

    Args:
        P: joint distribution over the alphabets of f
        f: function whose value serves as the auxiliary for "value"
        part: nontrivial terminal partition
        auxiliary: "value" (S = f(X_L)), "constant" (S trivial) or "best" (smaller gap)

    Returns:
        max over (x_L, s) of |P(x_L, s) - P_S(s) prod_A P(x_A | s)|; values s
        with P_S(s) = 0 contribute nothing
    """
    _check_compatible(P, f)
    if part.num_terminals != f.num_terminals:
        raise PreconditionError("partition and function disagree on the number of terminals")
    if not part.is_nontrivial:
        raise PreconditionError("factorization needs a nontrivial partition")

    if auxiliary == "value":
        return _value_deviation(P, f, part)
    if auxiliary == "constant":
        return _constant_deviation(P, part)
    if auxiliary == "best":
        return min(_value_deviation(P, f, part), _constant_deviation(P, part))
    raise PreconditionError(f"unknown auxiliary {auxiliary!r}")


def induced_value_distribution(P: JointDistribution, f: FunctionTable) -> np.ndarray:
    """P_V for V = f(X_L), indexed by normalized value code"""
    _check_compatible(P, f)
    codes, _ = first_occurrence_codes(np.asarray(f.values, dtype=np.int64))
    return np.bincount(codes, weights=np.asarray(P.probabilities), minlength=int(codes.max()) + 1)


def mixture_ci_check(P0: JointDistribution, P1: JointDistribution, f: FunctionTable) -> MixtureCIResult:
    """
    Conditional independence for a two-component mixture of i.i.d. sources

    The mixture index is recoverable from V^n when the components induce different
    distributions of V, which yields CI with S = (index, V^n). Equal induced
    distributions are inconclusive and reported as False.

    Returns:
        MixtureCIResult(induced, total variation distance between P_{V,0} and P_{V,1})
    """
    for name, P in (("P0", P0), ("P1", P1)):
        if not P.is_positive:
            raise PreconditionError(f"{name} violates the positivity condition")
    distance = 0.5 * float(np.abs(induced_value_distribution(P0, f) - induced_value_distribution(P1, f)).sum())
    induced = distance > INTERNAL_TOLERANCE
    logger.info("mixture components at total variation %.3g: %s", distance, "CI induced" if induced else "inconclusive")
    return MixtureCIResult(induced, distance)
