"""
Partitions of the terminal set and of the per-terminal alphabets
"""
import re
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.errors import SpecificationError

Block = Tuple[int, ...]


def restricted_growth_strings(n: int, descending: bool = False) -> Iterator[Tuple[int, ...]]:
    """
    Yield the restricted growth strings of length n in lexicographic order

    A restricted growth string a_1..a_n has a_1 = 0 and a_{i+1} <= 1 + max(a_1..a_i);
    each one encodes a set partition (position i is in block a_i). There are Bell(n).

    e.g.
        list(restricted_growth_strings(3))
        [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]
    """
    if n <= 0:
        yield ()
        return

    prefix = [0]

    def extend(maximum: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        choices = range(maximum + 2)
        for c in (reversed(choices) if descending else choices):
            prefix.append(c)
            yield from extend(max(maximum, c))
            prefix.pop()

    yield from extend(0)


def bell_number(n: int) -> int:
    # Bell triangle
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def blocks_from_labels(labels: Sequence[int], elements: Sequence[int]) -> Tuple[Block, ...]:
    """Group ``elements`` by their label, blocks ordered by smallest element"""
    groups: Dict[int, List[int]] = {}
    for element, label in zip(elements, labels):
        groups.setdefault(int(label), []).append(int(element))
    return tuple(sorted((tuple(sorted(g)) for g in groups.values()), key=lambda b: b[0]))


class TerminalPartition(BaseModel):
    """A partition of the terminal set {1, ..., L} into disjoint nonempty blocks"""
    model_config = ConfigDict(frozen=True)

    num_terminals: int = Field(..., ge=1)
    blocks: Tuple[Block, ...]

    @field_validator("blocks")
    @classmethod
    def canonical_blocks(cls, v):
        if any(len(b) == 0 for b in v):
            raise ValueError("partition blocks must be nonempty")
        return tuple(sorted((tuple(sorted(b)) for b in v), key=lambda b: b[0]))

    @model_validator(mode="after")
    def validate_cover(self):
        seen: List[int] = [t for block in self.blocks for t in block]
        if len(seen) != len(set(seen)):
            raise ValueError(f"partition blocks overlap: {self.blocks}")
        if sorted(seen) != list(range(1, self.num_terminals + 1)):
            raise ValueError(f"blocks {self.blocks} do not cover terminals 1..{self.num_terminals}")
        return self

    @property
    def is_nontrivial(self) -> bool:
        return len(self.blocks) >= 2

    @property
    def is_finest(self) -> bool:
        return len(self.blocks) == self.num_terminals

    def describe(self) -> str:
        return "/".join("{" + ",".join(str(t) for t in b) + "}" for b in self.blocks)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "TerminalPartition":
        return cls(num_terminals=len(rgs), blocks=blocks_from_labels(rgs, range(1, len(rgs) + 1)))

    @classmethod
    def finest(cls, num_terminals: int) -> "TerminalPartition":
        return cls(num_terminals=num_terminals, blocks=tuple((t,) for t in range(1, num_terminals + 1)))

    @classmethod
    def trivial(cls, num_terminals: int) -> "TerminalPartition":
        return cls(num_terminals=num_terminals, blocks=(tuple(range(1, num_terminals + 1)),))

    @classmethod
    def parse(cls, text: str, num_terminals: int) -> "TerminalPartition":
        """
        Parse "{1,2}/{3}" style partition text

        Braces are optional; a block without commas is read digit by digit ("12/3").
        """
        blocks = []
        for chunk in text.split("/"):
            chunk = chunk.strip().strip("{}").strip()
            if not chunk:
                raise SpecificationError(f"empty block in partition {text!r}")
            if "," in chunk:
                parts = [p.strip() for p in chunk.split(",")]
            else:
                parts = list(chunk)
            if not all(re.fullmatch(r"\d+", p) for p in parts):
                raise SpecificationError(f"cannot parse partition block {chunk!r}")
            blocks.append(tuple(int(p) for p in parts))
        try:
            return cls(num_terminals=num_terminals, blocks=tuple(blocks))
        except ValueError as e:
            raise SpecificationError(f"invalid partition {text!r}: {e}") from e


def nontrivial_partitions(num_terminals: int) -> Iterator[TerminalPartition]:
    """
    Nontrivial partitions of {1..L} in descending restricted-growth-string order

    The finest partition comes first and the one-block partition is skipped.
    """
    for rgs in restricted_growth_strings(num_terminals, descending=True):
        if max(rgs, default=0) == 0:
            continue
        yield TerminalPartition.from_rgs(rgs)


class AlphabetPartitionTuple(BaseModel):
    """
    Per-terminal partitions of the alphabets X_l for a set of terminals

    ``partitions`` maps a 1-based terminal to its classes; each class is a sorted
    tuple of symbols and classes are ordered by their smallest symbol.
    """
    model_config = ConfigDict(frozen=True)

    alphabet_sizes: Tuple[int, ...]
    partitions: Dict[int, Tuple[Block, ...]]

    @field_validator("partitions")
    @classmethod
    def canonical_classes(cls, v):
        canonical = {}
        for terminal, classes in sorted(v.items()):
            if any(len(c) == 0 for c in classes):
                raise ValueError(f"empty class at terminal {terminal}")
            canonical[terminal] = tuple(sorted((tuple(sorted(c)) for c in classes), key=lambda c: c[0]))
        return canonical

    @model_validator(mode="after")
    def validate_partitions(self):
        for terminal, classes in self.partitions.items():
            if terminal < 1 or terminal > len(self.alphabet_sizes):
                raise ValueError(f"terminal {terminal} outside 1..{len(self.alphabet_sizes)}")
            symbols = [s for c in classes for s in c]
            if sorted(symbols) != list(range(self.alphabet_sizes[terminal - 1])):
                raise ValueError(f"classes at terminal {terminal} are not a partition of its alphabet")
        return self

    @property
    def terminals(self) -> Tuple[int, ...]:
        return tuple(sorted(self.partitions))

    def covers(self, subset: Iterable[int]) -> bool:
        return all(t in self.partitions for t in subset)

    def class_labels(self, terminal: int) -> np.ndarray:
        """Class index of every symbol of X_terminal"""
        labels = np.empty(self.alphabet_sizes[terminal - 1], dtype=np.int64)
        for index, cls in enumerate(self.partitions[terminal]):
            labels[list(cls)] = index
        return labels

    def is_finest(self, terminals: Optional[Iterable[int]] = None) -> bool:
        terminals = self.terminals if terminals is None else terminals
        return all(len(self.partitions[t]) == self.alphabet_sizes[t - 1] for t in terminals)

    def is_trivial(self, terminals: Optional[Iterable[int]] = None) -> bool:
        terminals = self.terminals if terminals is None else terminals
        return all(len(self.partitions[t]) == 1 for t in terminals)

    def restrict(self, terminals: Iterable[int]) -> "AlphabetPartitionTuple":
        keep = set(terminals)
        return AlphabetPartitionTuple(
            alphabet_sizes=self.alphabet_sizes,
            partitions={t: c for t, c in self.partitions.items() if t in keep},
        )

    def merge(self, other: "AlphabetPartitionTuple") -> "AlphabetPartitionTuple":
        """Union of two tuples defined on disjoint terminals"""
        overlap = set(self.partitions) & set(other.partitions)
        if overlap:
            raise ValueError(f"tuples overlap on terminals {sorted(overlap)}")
        return AlphabetPartitionTuple(
            alphabet_sizes=self.alphabet_sizes,
            partitions={**self.partitions, **other.partitions},
        )

    def describe(self) -> str:
        parts = []
        for t, classes in self.partitions.items():
            rendered = ",".join("{" + ",".join(str(s) for s in c) + "}" for c in classes)
            parts.append(f"X{t}={{{rendered}}}")
        return " ".join(parts)

    @classmethod
    def from_labels(cls, alphabet_sizes: Sequence[int], labels: Mapping[int, Sequence[int]]) -> "AlphabetPartitionTuple":
        return cls(
            alphabet_sizes=tuple(alphabet_sizes),
            partitions={t: blocks_from_labels(lab, range(len(lab))) for t, lab in labels.items()},
        )

    @classmethod
    def finest(cls, alphabet_sizes: Sequence[int], terminals: Optional[Iterable[int]] = None) -> "AlphabetPartitionTuple":
        terminals = range(1, len(alphabet_sizes) + 1) if terminals is None else terminals
        return cls(
            alphabet_sizes=tuple(alphabet_sizes),
            partitions={t: tuple((s,) for s in range(alphabet_sizes[t - 1])) for t in terminals},
        )

    @classmethod
    def trivial(cls, alphabet_sizes: Sequence[int], terminals: Optional[Iterable[int]] = None) -> "AlphabetPartitionTuple":
        terminals = range(1, len(alphabet_sizes) + 1) if terminals is None else terminals
        return cls(
            alphabet_sizes=tuple(alphabet_sizes),
            partitions={t: (tuple(range(alphabet_sizes[t - 1])),) for t in terminals},
        )


def partition_meet(labels_a: np.ndarray, labels_b: np.ndarray) -> np.ndarray:
    """Common refinement of two partitions given as label arrays over the same set"""
    pairs = np.stack([np.asarray(labels_a), np.asarray(labels_b)], axis=1)
    _, inverse = np.unique(pairs, axis=0, return_inverse=True)
    return np.asarray(inverse).reshape(-1)
