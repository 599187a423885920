"""
Recovering a sequence from its per-position classes and its type
"""
from typing import Dict, List, Mapping, Sequence

from src.models.errors import PreconditionError
from src.models.partitions import Block


def reconstruct_from_class_and_type(
    classes: Sequence[Block],
    labels: Sequence[int],
    counts: Mapping[int, int],
) -> List[int]:
    """
    Build x_hat with the given class at every position and the given symbol counts

    Within the positions labeled with a class, that class's symbols are laid out
    in increasing order, each repeated as often as ``counts`` says.

    Args:
        classes: partition of the alphabet, one block per class
        labels: class index of every position
        counts: number of occurrences of every symbol

    Returns:
        The reconstructed sequence

    e.g.
        reconstruct_from_class_and_type([(0,), (1, 2)], [1, 0, 1], {0: 1, 1: 1, 2: 1})
        [1, 0, 2]
    """
    symbol_class: Dict[int, int] = {s: i for i, block in enumerate(classes) for s in block}
    for symbol, count in counts.items():
        if symbol not in symbol_class:
            raise PreconditionError(f"symbol {symbol} belongs to no class")
        if count < 0:
            raise PreconditionError(f"negative count for symbol {symbol}")
    for label in labels:
        if label < 0 or label >= len(classes):
            raise PreconditionError(f"class label {label} out of range")

    positions: Dict[int, List[int]] = {i: [] for i in range(len(classes))}
    for position, label in enumerate(labels):
        positions[label].append(position)

    result = [0] * len(labels)
    for index, block in enumerate(classes):
        symbols = [s for s in sorted(block) for _ in range(counts.get(s, 0))]
        if len(symbols) != len(positions[index]):
            raise PreconditionError(
                f"class {index} has {len(positions[index])} positions but its symbols count {len(symbols)}"
            )
        for position, symbol in zip(positions[index], symbols):
            result[position] = symbol
    return result
