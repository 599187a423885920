"""
Function tables: finite multiterminal functions f: X_1 x ... x X_L -> V

Inputs are indexed lexicographically with terminal 1 most significant, which is
numpy's C order for an array of shape (|X_1|, ..., |X_L|).
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, field_validator, model_validator

from src.models.errors import PreconditionError, SpecificationError

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


def first_occurrence_codes(keys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Relabel the rows of ``keys`` densely, in order of first occurrence

    Args:
        keys: 1-d array of scalars or 2-d array whose rows are the keys

    Returns:
        (codes, first_index): codes[i] is the dense code of row i and
        first_index[c] is the row at which code c first appears
    """
    keys = np.asarray(keys)
    if keys.ndim == 1:
        keys = keys.reshape(-1, 1)
    if keys.shape[0] == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)

    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[inverse].astype(np.int64), first[order].astype(np.int64)


def canonical_subset(subset: Iterable[int], num_terminals: int, allow_empty: bool = False) -> Subset:
    """Validate a set of 1-based terminals and return it as a sorted tuple"""
    terminals = tuple(sorted(set(int(t) for t in subset)))
    if not terminals and not allow_empty:
        raise PreconditionError("subset of terminals must be nonempty")
    for t in terminals:
        if t < 1 or t > num_terminals:
            raise PreconditionError(f"terminal {t} outside 1..{num_terminals}")
    return terminals


def subset_to_mask(subset: Iterable[int]) -> int:
    """Bitmask of a subset, terminal 1 is the lowest bit"""
    mask = 0
    for t in subset:
        mask |= 1 << (t - 1)
    return mask


def mask_to_subset(mask: int) -> Subset:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def format_subset(subset: Iterable[int]) -> str:
    """Render a subset as its sorted terminal list, e.g. {1,2} -> "12" """
    terminals = sorted(subset)
    if any(t >= 10 for t in terminals):
        return ",".join(str(t) for t in terminals)
    return "".join(str(t) for t in terminals)


class FunctionTable(BaseModel):
    """A total finite map f: X_1 x ... x X_L -> V stored as a flat value array"""
    model_config = ConfigDict(frozen=True)

    alphabet_sizes: Tuple[StrictInt, ...] = Field(..., min_length=1, description="|X_l| per terminal")
    values: Tuple[StrictInt, ...] = Field(..., description="Value codes in lexicographic input order")
    labels: Optional[Tuple[int, ...]] = Field(None, description="Original value behind each code")
    name: Optional[str] = None

    @field_validator("alphabet_sizes")
    @classmethod
    def validate_alphabet_sizes(cls, v):
        for size in v:
            if size < 1:
                raise ValueError(f"alphabet sizes must be >= 1, got {size}")
        return v

    @model_validator(mode="after")
    def validate_shape(self):
        expected = math.prod(self.alphabet_sizes)
        if len(self.values) != expected:
            raise ValueError(
                f"values length {len(self.values)} != product of alphabet sizes {expected}"
            )
        if self.labels is not None and len(self.labels) != len(set(self.values)):
            raise ValueError("labels must name every value code exactly once")
        return self

    @property
    def num_terminals(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def terminals(self) -> Subset:
        return tuple(range(1, self.num_terminals + 1))

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def num_values(self) -> int:
        return len(set(self.values))

    @property
    def is_injective(self) -> bool:
        return self.num_values == self.size

    def as_array(self) -> np.ndarray:
        """Values as an ndarray of shape alphabet_sizes"""
        return np.asarray(self.values, dtype=np.int64).reshape(self.alphabet_sizes)

    def inputs(self) -> np.ndarray:
        """All input tuples, one row per flat index"""
        return np.indices(self.alphabet_sizes).reshape(self.num_terminals, -1).T

    def encode(self, x: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(int(c) for c in x), self.alphabet_sizes))

    def decode(self, index: int) -> Tuple[int, ...]:
        return tuple(int(c) for c in np.unravel_index(index, self.alphabet_sizes))

    def value_at(self, x: Sequence[int]) -> int:
        return self.values[self.encode(x)]

    def label_of(self, code: int) -> int:
        return self.labels[code] if self.labels is not None else code

    def code_of_label(self, label: int) -> int:
        if self.labels is None:
            return label
        return self.labels.index(label)

    def fiber(self, code: int) -> np.ndarray:
        """Inverse image f^{-1}(code) as rows of input tuples"""
        mask = np.asarray(self.values) == code
        return self.inputs()[mask]

    def fiber_of_label(self, label: int) -> np.ndarray:
        return self.fiber(self.code_of_label(label))

    def kernel_key(self) -> bytes:
        """Relabeling-invariant identity of the function (its kernel)"""
        codes, _ = first_occurrence_codes(np.asarray(self.values))
        return np.asarray(self.alphabet_sizes, dtype=np.int64).tobytes() + b"|" + codes.tobytes()

    @classmethod
    def from_array(cls, alphabet_sizes: Sequence[int], values: Any, name: Optional[str] = None) -> "FunctionTable":
        """Build a normalized table from any array of hashable-by-row values"""
        keys = np.asarray(values)
        if keys.ndim > 1 and keys.shape[0] != int(np.prod(alphabet_sizes)):
            keys = keys.reshape(int(np.prod(alphabet_sizes)), -1)
        codes, _ = first_occurrence_codes(keys)
        return cls(
            alphabet_sizes=tuple(int(s) for s in alphabet_sizes),
            values=tuple(int(c) for c in codes),
            name=name,
        )


def normalize_values(raw: FunctionTable) -> FunctionTable:
    """
    Relabel value codes to {0, ..., |V|-1} by first occurrence

    The kernel is unchanged; the original value of each new code is kept in ``labels``.
    """
    # value names are arbitrary ints, possibly beyond int64
    codes: Dict[int, int] = {}
    values = tuple(codes.setdefault(v, len(codes)) for v in raw.values)
    labels = tuple(raw.label_of(v) for v in codes)
    return FunctionTable(
        alphabet_sizes=raw.alphabet_sizes,
        values=values,
        labels=labels,
        name=raw.name,
    )


def _first_error(exc: ValidationError) -> str:
    errors = exc.errors()
    if not errors:
        return str(exc)
    err = errors[0]
    location = ".".join(str(p) for p in err.get("loc", ()))
    message = err.get("msg", "invalid value")
    return f"{location}: {message}" if location else message


def parse_function_spec(text: Union[str, bytes, Dict[str, Any]]) -> FunctionTable:
    """
    Parse a function document into a normalized FunctionTable

    Args:
        text: JSON text or an already decoded mapping with keys
            "alphabets" and "values" (optionally "name")

    Returns:
        Validated, value-normalized FunctionTable
    """
    if isinstance(text, (str, bytes)):
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecificationError(f"function document is not valid JSON: {e}") from e
    else:
        document = text

    if not isinstance(document, dict):
        raise SpecificationError("function document must be a JSON object")
    missing = [k for k in ("alphabets", "values") if k not in document]
    if missing:
        raise SpecificationError(f"function document missing keys: {', '.join(missing)}")

    try:
        raw = FunctionTable(
            alphabet_sizes=document["alphabets"],
            values=document["values"],
            name=document.get("name"),
        )
    except ValidationError as e:
        raise SpecificationError(_first_error(e)) from e

    return normalize_values(raw)


def serialize_function(table: FunctionTable) -> str:
    """Canonical compact JSON form of a table (normalized codes only)"""
    document: Dict[str, Any] = {
        "alphabets": list(table.alphabet_sizes),
        "values": list(table.values),
    }
    if table.name is not None:
        document["name"] = table.name
    return json.dumps(document, separators=(",", ":"))


def load_function(path: Union[str, Path]) -> FunctionTable:
    """Read a function document from disk; the file stem names unnamed tables"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise SpecificationError(f"cannot read {path}: {e}") from e
    table = parse_function_spec(text)
    if table.name is None:
        table = table.model_copy(update={"name": path.stem})
    logger.debug("loaded %s: alphabets=%s |V|=%d", path, table.alphabet_sizes, table.num_values)
    return table
