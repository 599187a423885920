"""
Single-letter joint distributions P_{X_L} over X_1 x ... x X_L
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.models.errors import SpecificationError
from src.models.function_table import FunctionTable, _first_error

logger = logging.getLogger(__name__)

INGEST_TOLERANCE = 1e-9
INTERNAL_TOLERANCE = 1e-12


class JointDistribution(BaseModel):
    """A probability mass function with the same flat indexing as FunctionTable"""
    model_config = ConfigDict(frozen=True)

    alphabet_sizes: Tuple[int, ...] = Field(..., min_length=1)
    probabilities: Tuple[float, ...] = Field(..., description="P(x_L) in lexicographic order")
    name: Optional[str] = None

    @field_validator("alphabet_sizes")
    @classmethod
    def validate_alphabet_sizes(cls, v):
        for size in v:
            if size < 1:
                raise ValueError(f"alphabet sizes must be >= 1, got {size}")
        return v

    @field_validator("probabilities")
    @classmethod
    def validate_entries(cls, v):
        for p in v:
            if not np.isfinite(p):
                raise ValueError("probabilities must be finite")
            if p < 0:
                raise ValueError(f"negative probability {p}")
        return v

    @model_validator(mode="after")
    def validate_mass(self):
        expected = math.prod(self.alphabet_sizes)
        if len(self.probabilities) != expected:
            raise ValueError(
                f"probabilities length {len(self.probabilities)} != product of alphabet sizes {expected}"
            )
        total = float(np.sum(self.probabilities))
        if abs(total - 1.0) > INGEST_TOLERANCE:
            raise ValueError(f"probabilities sum to {total:.12g}, not 1")
        return self

    @property
    def num_terminals(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def is_positive(self) -> bool:
        return all(p > 0 for p in self.probabilities)

    def as_array(self) -> np.ndarray:
        """Probabilities as an ndarray of shape alphabet_sizes"""
        return np.asarray(self.probabilities, dtype=np.float64).reshape(self.alphabet_sizes)

    def marginal(self, subset: Sequence[int]) -> np.ndarray:
        """P_{X_A} as an ndarray over the terminals of A in increasing order"""
        keep = set(subset)
        drop = tuple(t - 1 for t in range(1, self.num_terminals + 1) if t not in keep)
        return self.as_array().sum(axis=drop) if drop else self.as_array()

    def compatible_with(self, table: FunctionTable) -> bool:
        return tuple(self.alphabet_sizes) == tuple(table.alphabet_sizes)

    @classmethod
    def from_array(cls, probs: Any, name: Optional[str] = None) -> "JointDistribution":
        """Build from an ndarray shaped like the alphabets, renormalizing rounding error"""
        arr = np.asarray(probs, dtype=np.float64)
        arr = arr / arr.sum()
        return cls(
            alphabet_sizes=tuple(int(s) for s in arr.shape),
            probabilities=tuple(float(p) for p in arr.reshape(-1)),
            name=name,
        )

    @classmethod
    def uniform(cls, alphabet_sizes: Sequence[int]) -> "JointDistribution":
        return cls.from_array(np.ones(tuple(alphabet_sizes)))


def validate_distribution(spec: Union[str, bytes, Dict[str, Any]], sizes: Optional[Sequence[int]] = None) -> JointDistribution:
    """
    Parse and validate a distribution document

    Args:
        spec: JSON text or decoded mapping with "alphabets" and "probs"
        sizes: alphabet sizes the distribution must match (e.g. of a function table)

    Returns:
        Validated JointDistribution
    """
    if isinstance(spec, (str, bytes)):
        try:
            document = json.loads(spec)
        except json.JSONDecodeError as e:
            raise SpecificationError(f"distribution document is not valid JSON: {e}") from e
    else:
        document = spec

    if not isinstance(document, dict):
        raise SpecificationError("distribution document must be a JSON object")
    missing = [k for k in ("alphabets", "probs") if k not in document]
    if missing:
        raise SpecificationError(f"distribution document missing keys: {', '.join(missing)}")

    try:
        dist = JointDistribution(
            alphabet_sizes=document["alphabets"],
            probabilities=document["probs"],
            name=document.get("name"),
        )
    except ValidationError as e:
        raise SpecificationError(_first_error(e)) from e

    if sizes is not None and tuple(sizes) != dist.alphabet_sizes:
        raise SpecificationError(
            f"distribution alphabets {list(dist.alphabet_sizes)} do not match {list(sizes)}"
        )
    return dist


def serialize_distribution(dist: JointDistribution) -> str:
    document: Dict[str, Any] = {
        "alphabets": list(dist.alphabet_sizes),
        "probs": list(dist.probabilities),
    }
    if dist.name is not None:
        document["name"] = dist.name
    return json.dumps(document, separators=(",", ":"))


def load_distribution(path: Union[str, Path], sizes: Optional[Sequence[int]] = None) -> JointDistribution:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise SpecificationError(f"cannot read {path}: {e}") from e
    dist = validate_distribution(text, sizes)
    if dist.name is None:
        dist = dist.model_copy(update={"name": path.stem})
    logger.debug("loaded distribution %s: alphabets=%s positive=%s", path, dist.alphabet_sizes, dist.is_positive)
    return dist
