"""
Result models: rate regions, certificates, witnesses and verdicts
"""
from enum import Enum
from typing import Dict, List, Literal, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.function_table import format_subset, mask_to_subset, subset_to_mask
from src.models.partitions import AlphabetPartitionTuple, TerminalPartition

Subset = Tuple[int, ...]
Point = Tuple[int, ...]

REGION_TOLERANCE = 1e-9


class Answer(str, Enum):
    IN_SW_CLASS = "InSwClass"
    NOT_IN_SW_CLASS = "NotInSwClass"
    UNKNOWN = "Unknown"


class SourceClass(str, Enum):
    SMOOTH = "smooth"
    IID = "iid-positive"

    @classmethod
    def from_flag(cls, flag: str) -> "SourceClass":
        return {"smooth": cls.SMOOTH, "iid": cls.IID, "iid-positive": cls.IID}[flag]


class RateRegionDescription(BaseModel):
    """
    Slepian-Wolf constraints h(A) = H(X_A | X_{A^c}) for every nonempty A

    ``constraints`` is keyed by subset bitmask, terminal 1 being the lowest bit.
    """
    model_config = ConfigDict(frozen=True)

    num_terminals: int = Field(..., ge=1)
    constraints: Dict[int, float]

    @model_validator(mode="after")
    def validate_constraints(self):
        full = (1 << self.num_terminals) - 1
        if sorted(self.constraints) != list(range(1, full + 1)):
            raise ValueError("constraints must cover every nonempty subset exactly once")
        for mask, value in self.constraints.items():
            if value < -REGION_TOLERANCE:
                raise ValueError(f"negative constraint {value} for subset {mask_to_subset(mask)}")
        return self

    def value(self, subset: Subset) -> float:
        return self.constraints[subset_to_mask(subset)]

    def is_monotone(self, tol: float = REGION_TOLERANCE) -> bool:
        for a, ha in self.constraints.items():
            for b, hb in self.constraints.items():
                if a & b == a and ha > hb + tol:
                    return False
        return True

    def is_supermodular(self, tol: float = REGION_TOLERANCE) -> bool:
        for a, ha in self.constraints.items():
            for b, hb in self.constraints.items():
                meet = self.constraints.get(a & b, 0.0)
                if self.constraints[a | b] + meet < ha + hb - tol:
                    return False
        return True

    def by_name(self) -> Dict[str, float]:
        """Constraints keyed by sorted terminal list, e.g. "12" for {1,2}"""
        return {format_subset(mask_to_subset(m)): v for m, v in sorted(self.constraints.items())}


class CertificateStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    terminal_partition: TerminalPartition
    alphabet_tuple: AlphabetPartitionTuple

    def describe(self) -> str:
        return f"{self.terminal_partition.describe()} : {self.alphabet_tuple.describe()}"


class Certificate(BaseModel):
    """Recursion certificate (terminal partition, per-terminal partitions) for i = 1..k"""
    model_config = ConfigDict(frozen=True)

    steps: Tuple[CertificateStep, ...] = Field(..., min_length=1)

    @property
    def depth(self) -> int:
        return len(self.steps)

    @model_validator(mode="after")
    def validate_final_step(self):
        if not self.steps[-1].alphabet_tuple.is_finest():
            raise ValueError("the last certificate step must use finest alphabet partitions")
        return self


class Witness(BaseModel):
    """
    Evidence that f violates the necessary condition

    kind "projection": x_A and x_hat_A differ in every coordinate of ``subset``
    and f_A(x_A) = f_A(x_hat_A).

    kind "extended": per-terminal pairs of ``subset`` assembled into a pair of
    m-tuples over X_A (m = block_length) on which the m-fold function collides.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["projection", "extended"]
    subset: Subset
    first: Point = Field(..., description="x_A (projection kind) or empty")
    second: Point = Field(..., description="x_hat_A (projection kind) or empty")
    case: Optional[Literal["i", "ii"]] = None
    block_length: int = Field(1, ge=1)
    per_terminal: Optional[Dict[int, Tuple[Point, Point]]] = None
    extended_first: Optional[Tuple[Point, ...]] = None
    extended_second: Optional[Tuple[Point, ...]] = None

    @model_validator(mode="after")
    def validate_shape(self):
        if self.kind == "projection":
            if len(self.first) != len(self.subset) or len(self.second) != len(self.subset):
                raise ValueError("projection witness points must have one symbol per terminal of the subset")
        else:
            if self.extended_first is None or self.extended_second is None:
                raise ValueError("extended witness needs both m-tuples")
            if len(self.extended_first) != self.block_length or len(self.extended_second) != self.block_length:
                raise ValueError("extended tuples must have block_length entries")
        return self


class Verdict(BaseModel):
    """Three-valued classification with its evidence"""
    model_config = ConfigDict(frozen=True)

    source_class: SourceClass
    answer: Answer
    certificate: Optional[Certificate] = None
    witness: Optional[Witness] = None
    trace: Optional[Tuple[Subset, ...]] = None
    reason: Optional[str] = None

    @model_validator(mode="after")
    def validate_evidence(self):
        if self.answer == Answer.IN_SW_CLASS:
            if self.source_class == SourceClass.SMOOTH and not self.trace:
                raise ValueError("smooth InSwClass verdict needs a pseudo-identity trace")
            if self.source_class == SourceClass.IID and self.certificate is None:
                raise ValueError("iid InSwClass verdict needs a certificate")
        if self.answer == Answer.NOT_IN_SW_CLASS and self.witness is None:
            raise ValueError("NotInSwClass verdict needs a witness")
        if self.answer == Answer.UNKNOWN and (self.certificate is not None or self.witness is not None):
            raise ValueError("Unknown verdict carries no evidence")
        return self


class CIConditionResult(NamedTuple):
    holds: bool
    violating_value: Optional[int]


class HKResult(NamedTuple):
    holds: bool
    failed_condition: Optional[int]
    witness: Optional[Tuple[Point, Point]]


class NecessaryResult(NamedTuple):
    holds: bool
    witness: Optional[Witness]


class PseudoIdentityResult(NamedTuple):
    holds: bool
    trace: Tuple[Subset, ...]


class MixtureCIResult(NamedTuple):
    induced: bool
    distance: float


class FunctionReport(BaseModel):
    """One row of the condition matrix"""
    name: str
    alphabets: List[int] = Field(default_factory=list)
    hk: Optional[bool] = None
    prop4: Optional[bool] = None
    prop5: Optional[bool] = None
    prop6: Optional[bool] = None
    certified_depth: Optional[int] = None
    pseudo_identity: Optional[bool] = None
    iid: Optional[Answer] = None
    smooth: Optional[Answer] = None
    error: Optional[str] = None
