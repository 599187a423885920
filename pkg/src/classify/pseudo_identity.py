"""
Exact classification for smooth sources

A function is in the Slepian-Wolf class for every smooth source iff it is a
pseudo identity: f_A is injective, or the span union A~ of f_A is a strict
subset of A and f_{A~} is again a pseudo identity.
"""
import logging
from typing import Dict, Sequence, Tuple

import numpy as np

from src.models.errors import PreconditionError
from src.models.function_table import FunctionTable, Subset, first_occurrence_codes
from src.models.partitions import AlphabetPartitionTuple, TerminalPartition
from src.models.results import (
    Answer,
    Certificate,
    CertificateStep,
    Point,
    PseudoIdentityResult,
    SourceClass,
    Verdict,
    Witness,
)
from src.classify.necessary import first_collision
from src.structure.projection import fiber_span_mask, project, span_union

logger = logging.getLogger(__name__)

MFOLD_REPLAY_LIMIT = 65536


def pseudo_identity(f: FunctionTable) -> PseudoIdentityResult:
    """
    Decide the pseudo-identity property

    Returns:
        PseudoIdentityResult(holds, trace) where trace is the chain of
        subsets L = A_0, A_1, ... visited by the recursion
    """
    subset = f.terminals
    trace = [subset]
    while True:
        if project(f, subset).table.is_injective:
            return PseudoIdentityResult(True, tuple(trace))
        reduced = span_union(f, subset)
        if reduced == subset:
            return PseudoIdentityResult(False, tuple(trace))
        subset = reduced
        trace.append(subset)


def certificate_from_trace(f: FunctionTable, trace: Sequence[Subset]) -> Certificate:
    """
    Recursion certificate built from a pseudo-identity chain A_0 = L, A_1, ..., A_k

    Step i (1 <= i <= k) uses the terminal partition {A_i} plus singletons outside A_i,
    and alphabet partitions that are finest outside A_{i+1} and trivial inside it;
    the last step is finest everywhere. An injective f gives the single finest step.
    """
    sizes = f.alphabet_sizes
    terminals = f.terminals
    if len(trace) == 1:
        return Certificate(steps=(
            CertificateStep(
                terminal_partition=TerminalPartition.finest(f.num_terminals),
                alphabet_tuple=AlphabetPartitionTuple.finest(sizes),
            ),
        ))

    steps = []
    chain = list(trace) + [()]
    for i in range(1, len(trace)):
        current, following = chain[i], set(chain[i + 1])
        blocks = (tuple(current),) + tuple((t,) for t in terminals if t not in current)
        finest = AlphabetPartitionTuple.finest(sizes, [t for t in terminals if t not in following])
        if following:
            tuple_i = finest.merge(AlphabetPartitionTuple.trivial(sizes, sorted(following)))
        else:
            tuple_i = finest
        steps.append(CertificateStep(
            terminal_partition=TerminalPartition(num_terminals=f.num_terminals, blocks=blocks),
            alphabet_tuple=tuple_i,
        ))
    return Certificate(steps=tuple(steps))


def _first_pair_along(points: np.ndarray, coordinate: int) -> Tuple[Point, Point]:
    base = points[0]
    other = points[np.flatnonzero(points[:, coordinate] != base[coordinate])[0]]
    return tuple(int(c) for c in base), tuple(int(c) for c in other)


def counterexample_witness(f: FunctionTable) -> Witness:
    """
    Witness that a non-pseudo-identity f violates the necessary condition at some block length

    Case (i): some f_{l} is not injective; the colliding pair is returned directly.
    Case (ii): the recursion stops at A with span union A. For each l in A the first
    fiber of f_A spanning l yields a pair differing at l; the |A| pairs assembled
    side by side differ in every coordinate of A and collide under the |A|-fold function.
    """
    result = pseudo_identity(f)
    if result.holds:
        raise PreconditionError("function is a pseudo identity, no counterexample exists")

    for ell in f.terminals:
        pair = first_collision(project(f, (ell,)).table)
        if pair is not None:
            witness = Witness(kind="projection", subset=(ell,), first=pair[0], second=pair[1], case="i")
            return _verified(f, witness)

    subset = result.trace[-1]
    g = project(f, subset).table
    inputs = g.inputs()
    codes, _ = first_occurrence_codes(np.asarray(g.values, dtype=np.int64))
    spans = fiber_span_mask(g)

    per_terminal: Dict[int, Tuple[Point, Point]] = {}
    for i, ell in enumerate(subset):
        code = int(np.flatnonzero(spans[:, i])[0])
        per_terminal[ell] = _first_pair_along(inputs[codes == code], i)

    witness = Witness(
        kind="extended",
        subset=subset,
        first=(),
        second=(),
        case="ii",
        block_length=len(subset),
        per_terminal=per_terminal,
        extended_first=tuple(per_terminal[ell][0] for ell in subset),
        extended_second=tuple(per_terminal[ell][1] for ell in subset),
    )
    return _verified(f, witness)


def _verified(f: FunctionTable, witness: Witness) -> Witness:
    if not replay_witness(f, witness):
        raise AssertionError(f"constructed witness does not replay: {witness}")
    return witness


def m_fold(f: FunctionTable, m: int) -> FunctionTable:
    """
    The m-fold symbol-wise function on the extended alphabets X_l^m

    Terminal l's extended symbol is an m-tuple encoded lexicographically, position 1
    most significant; the value is (f(x^(1)), ..., f(x^(m))), normalized.
    """
    if m < 1:
        raise PreconditionError("block length must be >= 1")
    sizes = f.alphabet_sizes
    extended = tuple(s ** m for s in sizes)
    inputs = np.indices(extended).reshape(f.num_terminals, -1).T
    digits = [np.unravel_index(inputs[:, i], (s,) * m) for i, s in enumerate(sizes)]
    values = f.as_array()
    keys = np.stack(
        [values[tuple(digits[i][j] for i in range(f.num_terminals))] for j in range(m)],
        axis=1,
    )
    return FunctionTable.from_array(extended, keys)


def replay_witness(f: FunctionTable, witness: Witness) -> bool:
    """Confirm that the witness is a genuine violation of the necessary condition"""
    subset = witness.subset
    g = project(f, subset).table

    if witness.kind == "projection":
        differ = all(a != b for a, b in zip(witness.first, witness.second))
        return differ and g.value_at(witness.first) == g.value_at(witness.second)

    firsts, seconds = witness.extended_first, witness.extended_second
    if not all(g.value_at(a) == g.value_at(b) for a, b in zip(firsts, seconds)):
        return False
    for i in range(len(subset)):
        if all(a[i] == b[i] for a, b in zip(firsts, seconds)):
            return False

    m = witness.block_length
    if int(np.prod([s ** m for s in f.alphabet_sizes])) > MFOLD_REPLAY_LIMIT:
        return True
    folded = project(m_fold(f, m), subset).table

    def extended_point(points) -> Point:
        return tuple(
            int(np.ravel_multi_index(tuple(p[i] for p in points), (f.alphabet_sizes[t - 1],) * m))
            for i, t in enumerate(subset)
        )

    x, x_hat = extended_point(firsts), extended_point(seconds)
    return all(a != b for a, b in zip(x, x_hat)) and folded.value_at(x) == folded.value_at(x_hat)


def classify_smooth(f: FunctionTable) -> Verdict:
    """Exact verdict for the class of smooth sources"""
    result = pseudo_identity(f)
    if result.holds:
        certificate = certificate_from_trace(f, result.trace)
        logger.info("%s: pseudo identity, trace of length %d", f.name or "function", len(result.trace))
        return Verdict(
            source_class=SourceClass.SMOOTH,
            answer=Answer.IN_SW_CLASS,
            trace=result.trace,
            certificate=certificate,
        )
    witness = counterexample_witness(f)
    logger.info("%s: not a pseudo identity, case (%s) witness", f.name or "function", witness.case)
    return Verdict(
        source_class=SourceClass.SMOOTH,
        answer=Answer.NOT_IN_SW_CLASS,
        trace=result.trace,
        witness=witness,
    )
