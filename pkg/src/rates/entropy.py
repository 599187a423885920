"""
Entropies in bits and the Slepian-Wolf region of an i.i.d. source
"""
import logging
from itertools import permutations
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from src.models.distribution import JointDistribution
from src.models.errors import PreconditionError
from src.models.function_table import canonical_subset, mask_to_subset
from src.models.results import REGION_TOLERANCE, RateRegionDescription

logger = logging.getLogger(__name__)


def entropy_bits(p: np.ndarray) -> float:
    """Shannon entropy of a probability array, 0 log 0 = 0"""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    nonzero = p[p > 0]
    return float(-np.sum(nonzero * np.log2(nonzero)))


def joint_entropy(P: JointDistribution, subset: Iterable[int]) -> float:
    """H(X_A); the empty set has entropy 0"""
    subset = canonical_subset(subset, P.num_terminals, allow_empty=True)
    if not subset:
        return 0.0
    return entropy_bits(P.marginal(subset))


def conditional_entropy(P: JointDistribution, subset: Iterable[int]) -> float:
    """H(X_A | X_{A^c}) = H(X_L) - H(X_{A^c})"""
    subset = canonical_subset(subset, P.num_terminals)
    rest = tuple(t for t in range(1, P.num_terminals + 1) if t not in subset)
    total = joint_entropy(P, range(1, P.num_terminals + 1))
    # clamp rounding noise around zero
    return max(total - joint_entropy(P, rest), 0.0)


def sw_region(P: JointDistribution) -> RateRegionDescription:
    """Constraint h(A) = H(X_A | X_{A^c}) for every nonempty A, keyed by bitmask"""
    full = (1 << P.num_terminals) - 1
    constraints = {mask: conditional_entropy(P, mask_to_subset(mask)) for mask in range(1, full + 1)}
    return RateRegionDescription(num_terminals=P.num_terminals, constraints=constraints)


def region_contains(region: RateRegionDescription, rates: Sequence[float]) -> bool:
    """Whether sum_{l in A} R_l >= h(A) holds for every nonempty A, up to 1e-9"""
    if len(rates) != region.num_terminals:
        raise PreconditionError(f"expected {region.num_terminals} rates, got {len(rates)}")
    for mask, bound in region.constraints.items():
        total = sum(rates[t - 1] for t in mask_to_subset(mask))
        if total < bound - REGION_TOLERANCE:
            logger.debug("rates %s violate subset %s: %.9f < %.9f", list(rates), mask_to_subset(mask), total, bound)
            return False
    return True


def sw_vertices(region: RateRegionDescription) -> List[Tuple[float, ...]]:
    """
    Corner points of the region, one per terminal ordering

    For the ordering pi the terminal pi_k gets h({pi_1..pi_k}) - h({pi_1..pi_{k-1}}).
    Duplicates are dropped, first occurrence kept.
    """
    vertices: List[Tuple[float, ...]] = []
    seen = set()
    for order in permutations(range(1, region.num_terminals + 1)):
        rates = [0.0] * region.num_terminals
        mask, previous = 0, 0.0
        for terminal in order:
            mask |= 1 << (terminal - 1)
            current = region.constraints[mask]
            rates[terminal - 1] = current - previous
            previous = current
        key = tuple(round(r, 12) for r in rates)
        if key not in seen:
            seen.add(key)
            vertices.append(tuple(rates))
    return vertices
