"""
Certification search for i.i.d. sources with positivity

A certificate is a sequence of (terminal partition, alphabet partitions) steps.
At each step the current function g must induce conditional independence for the
terminal partition and be semi-informative for the alphabet partitions on every
block; the next step works on the product of g with the local function. The search
ends once every alphabet partition is finest.
"""
import logging
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from src.models.errors import BudgetExhaustedError, PreconditionError
from src.models.function_table import FunctionTable
from src.models.partitions import AlphabetPartitionTuple, Block, TerminalPartition, nontrivial_partitions
from src.models.results import Answer, Certificate, CertificateStep, SourceClass, Verdict
from src.classify.necessary import necessary_condition
from src.structure.conditions import (
    check_ci_condition,
    check_semi_informative,
    ci_condition_from_spans,
    finest_semi_informative_tuple,
    product_with_local,
    strictly_refines,
)
from src.structure.projection import fiber_span_mask

logger = logging.getLogger(__name__)


class SearchBudget(BaseModel):
    """Limits of the certification search"""
    max_depth: Optional[int] = Field(None, ge=1, description="Certificate length limit, default |X_L|")
    max_nodes: int = Field(100000, ge=1, description="Kernels expanded before giving up")


class CertificationSearch:
    """
    Depth-first search over certificates with iterative deepening

    Partitions are tried in descending restricted-growth-string order, so the
    finest terminal partition comes first. Failed kernels are memoized with the
    remaining depth they were explored at.
    """

    def __init__(self, budget: Optional[SearchBudget] = None):
        """
        Args:
            budget: depth and node limits; defaults to SearchBudget()
        """
        self.budget = budget or SearchBudget()
        self.nodes_expanded = 0
        self._failed: Dict[bytes, Tuple[int, bool]] = {}
        self._partitions: List[TerminalPartition] = []

    def run(self, f: FunctionTable) -> Optional[Certificate]:
        """
        Search for a certificate of minimal depth

        Returns:
            The first certificate found, or None when the search space holds none

        Raises:
            BudgetExhaustedError: the depth or node limit cut the search short
        """
        if f.num_terminals < 2:
            raise PreconditionError("certification needs at least 2 terminals")

        max_depth = self.budget.max_depth or f.size
        self.nodes_expanded = 0
        self._failed = {}
        self._partitions = list(nontrivial_partitions(f.num_terminals))

        for depth in range(1, max_depth + 1):
            steps, cut = self._search(f, depth)
            if steps is not None:
                logger.info("certificate of depth %d after %d nodes", len(steps), self.nodes_expanded)
                return Certificate(steps=tuple(steps))
            if not cut:
                logger.info("no certificate exists (%d nodes)", self.nodes_expanded)
                return None
            logger.debug("depth %d exhausted with cuts, deepening", depth)

        logger.warning("certification stopped at depth limit %d", max_depth)
        raise BudgetExhaustedError(
            f"no certificate within depth {max_depth}",
            nodes_expanded=self.nodes_expanded,
            max_depth=max_depth,
        )

    def _search(self, g: FunctionTable, remaining: int) -> Tuple[Optional[List[CertificateStep]], bool]:
        key = g.kernel_key()
        known = self._failed.get(key)
        if known is not None:
            depth_seen, definitive = known
            if definitive:
                return None, False
            if depth_seen >= remaining:
                return None, True

        self.nodes_expanded += 1
        if self.nodes_expanded > self.budget.max_nodes:
            logger.warning("certification stopped after %d nodes", self.budget.max_nodes)
            raise BudgetExhaustedError(
                f"node limit {self.budget.max_nodes} reached",
                nodes_expanded=self.nodes_expanded,
                max_depth=self.budget.max_depth or 0,
            )

        spans = fiber_span_mask(g)
        block_tuples: Dict[Block, AlphabetPartitionTuple] = {}
        cut = False
        for part in self._partitions:
            if not ci_condition_from_spans(g, spans, part).holds:
                continue
            merged = None
            for block in part.blocks:
                if block not in block_tuples:
                    block_tuples[block] = finest_semi_informative_tuple(g, block)
                merged = block_tuples[block] if merged is None else merged.merge(block_tuples[block])
            step = CertificateStep(terminal_partition=part, alphabet_tuple=merged)
            if merged.is_finest():
                return [step], False
            if remaining <= 1:
                cut = True
                continue
            product = product_with_local(g, merged)
            if not strictly_refines(product, g):
                logger.debug("pruned %s: product kernel does not refine", part.describe())
                continue
            rest, sub_cut = self._search(product, remaining - 1)
            if rest is not None:
                return [step] + rest, False
            cut = cut or sub_cut

        previous = self._failed.get(key)
        if not cut:
            self._failed[key] = (remaining, True)
        elif previous is None or previous[0] < remaining:
            self._failed[key] = (remaining, False)
        return None, cut


def certify_iid(f: FunctionTable, budget: Optional[SearchBudget] = None) -> Optional[Certificate]:
    """Find a recursion certificate for f, or None if none exists"""
    return CertificationSearch(budget).run(f)


def replay_certificate(f: FunctionTable, certificate: Certificate):
    """
    Replay a certificate step by step

    Raises:
        PreconditionError: naming the first step that fails
    """
    g = f
    for index, step in enumerate(certificate.steps, start=1):
        part = step.terminal_partition
        if not part.is_nontrivial and f.num_terminals > 1:
            raise PreconditionError(f"step {index}: terminal partition is trivial")
        ci = check_ci_condition(g, part)
        if not ci.holds:
            raise PreconditionError(f"step {index}: value {ci.violating_value} breaks conditional independence")
        if not step.alphabet_tuple.covers(g.terminals):
            raise PreconditionError(f"step {index}: alphabet partitions do not cover every terminal")
        for block in part.blocks:
            if not check_semi_informative(g, block, step.alphabet_tuple.restrict(block)):
                raise PreconditionError(f"step {index}: not semi-informative on block {block}")
        g = product_with_local(g, step.alphabet_tuple)
    if not certificate.steps[-1].alphabet_tuple.is_finest():
        raise PreconditionError("final alphabet partitions are not finest")


def classify_iid(f: FunctionTable, budget: Optional[SearchBudget] = None) -> Verdict:
    """
    Three-valued verdict for i.i.d. sources with positivity

    NotInSwClass when the necessary condition fails, InSwClass when a certificate
    is found, Unknown otherwise.
    """
    necessary = necessary_condition(f)
    if not necessary.holds:
        logger.info("%s: necessary condition fails on %s", f.name or "function", necessary.witness.subset)
        return Verdict(source_class=SourceClass.IID, answer=Answer.NOT_IN_SW_CLASS, witness=necessary.witness)

    if f.num_terminals == 1:
        # the necessary condition makes f injective
        certificate = Certificate(steps=(
            CertificateStep(
                terminal_partition=TerminalPartition.finest(1),
                alphabet_tuple=AlphabetPartitionTuple.finest(f.alphabet_sizes),
            ),
        ))
        return Verdict(source_class=SourceClass.IID, answer=Answer.IN_SW_CLASS, certificate=certificate)

    try:
        certificate = certify_iid(f, budget)
    except BudgetExhaustedError as e:
        return Verdict(source_class=SourceClass.IID, answer=Answer.UNKNOWN, reason=f"budget exhausted: {e}")
    if certificate is None:
        return Verdict(
            source_class=SourceClass.IID,
            answer=Answer.UNKNOWN,
            reason="necessary condition holds but no certificate exists",
        )
    return Verdict(source_class=SourceClass.IID, answer=Answer.IN_SW_CLASS, certificate=certificate)
