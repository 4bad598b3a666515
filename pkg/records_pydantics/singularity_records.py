from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from constants import NON_QUASI_HOMOGENEOUS, QUASI_HOMOGENEOUS
from validation_utils import validate_non_negative_int


class ResolutionData(BaseModel):
    d: int = Field(..., ge=1)
    m: int = Field(..., ge=0)
    exponents: List[int] = Field(default_factory=list)
    second_degrees: List[int] = Field(default_factory=list)
    epsilons: List[int] = Field(default_factory=list)
    complete: bool = False

    @model_validator(mode='after')
    def validate_counts(self):
        if len(self.exponents) != self.m:
            raise ValueError(f"expected {self.m} exponents, got {len(self.exponents)}")
        if self.exponents != sorted(self.exponents):
            raise ValueError("exponents must be sorted ascending")
        if len(self.epsilons) != len(self.second_degrees):
            raise ValueError("one epsilon per second syzygy degree")
        return self

    @property
    def curve_type(self) -> str:
        return "free" if self.m == 2 else f"{self.m}-syzygy"

    class Config:
        validate_assignment = True
        extra = "forbid"


class BidegreeClass(BaseModel):
    """alpha*h1^2 + beta*h1*h2 + gamma*h2^2."""
    alpha: int
    beta: int
    gamma: int

    def as_list(self) -> List[int]:
        return [self.alpha, self.beta, self.gamma]

    def __str__(self):
        return f"{self.alpha}*h1^2 + {self.beta}*h1*h2 + {self.gamma}*h2^2"

    class Config:
        frozen = True
        extra = "forbid"


class ChartRecord(BaseModel):
    matrix: List[List[int]]
    attempts: int = Field(..., ge=1)

    @property
    def is_identity(self) -> bool:
        return all(a == (1 if i == j else 0) for i, row in enumerate(self.matrix) for j, a in enumerate(row))

    class Config:
        validate_assignment = True
        extra = "forbid"


class SingularityRecord(BaseModel):
    point: List[str]
    tau_p: int
    mu_p: int
    rank_mf: Literal[0, 1]
    verdict: Literal["quasi-homogeneous", "non-quasi-homogeneous"]
    # (generator j, component k) with A^j_k(p) != 0
    witness_entry: Optional[List[int]] = None
    cross_check: bool
    user_supplied: bool = False

    @field_validator('tau_p', 'mu_p', mode='before')
    def validate_numbers(cls, v, info):
        return validate_non_negative_int(v, info.field_name)

    @model_validator(mode='after')
    def validate_verdict(self):
        expected = QUASI_HOMOGENEOUS if self.rank_mf >= 1 else NON_QUASI_HOMOGENEOUS
        if self.verdict != expected:
            raise ValueError(f"verdict '{self.verdict}' contradicts rank {self.rank_mf}")
        if (self.witness_entry is not None) != (self.rank_mf >= 1):
            raise ValueError("a witness entry is recorded exactly for rank 1")
        if self.mu_p < self.tau_p:
            raise ValueError(f"mu_p = {self.mu_p} is smaller than tau_p = {self.tau_p}")
        return self

    @property
    def label(self) -> str:
        return "(" + ":".join(self.point) + ")"

    @property
    def is_quasi_homogeneous(self) -> bool:
        return self.verdict == QUASI_HOMOGENEOUS

    class Config:
        validate_assignment = True
        extra = "forbid"


class WitnessRecord(BaseModel):
    components: List[str]
    degree: int
    trials: int = Field(..., ge=1)
    points: List[List[str]]

    class Config:
        extra = "forbid"


class ClassSummary(BaseModel):
    sf_class: BidegreeClass
    zf_class: BidegreeClass
    polar_degree: int
    defect: int = Field(..., ge=0)

    @property
    def zf_irreducible(self) -> bool:
        return self.defect == 0

    class Config:
        extra = "forbid"
