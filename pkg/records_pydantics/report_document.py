from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from constants import REPORT_SCHEMA_VERSION
from records_pydantics.singularity_records import (
    ChartRecord,
    ClassSummary,
    ResolutionData,
    SingularityRecord,
    WitnessRecord,
)
from validation_utils import validate_non_negative_int, validate_rational_text


class GradedMatrixRecord(BaseModel):
    entries: List[List[str]]
    row_shifts: List[int]
    col_shifts: List[int]

    @model_validator(mode='after')
    def validate_shape(self):
        if len(self.entries) != len(self.row_shifts):
            raise ValueError(f"{len(self.entries)} rows but {len(self.row_shifts)} row shifts")
        for row in self.entries:
            if len(row) != len(self.col_shifts):
                raise ValueError(f"row of length {len(row)} but {len(self.col_shifts)} column shifts")
        return self

    @classmethod
    def from_matrix(cls, matrix) -> "GradedMatrixRecord":
        return cls(entries=matrix.to_strings(), row_shifts=list(matrix.row_shifts),
                   col_shifts=list(matrix.col_shifts))

    class Config:
        extra = "forbid"


class PlanarReport(BaseModel):
    second_syzygy_matrix: GradedMatrixRecord
    koszul_lift: GradedMatrixRecord
    hilbert_burch_matrix: GradedMatrixRecord
    minor_constant: str
    column_classes: List[List[int]]
    zf_equations: List[str]
    koszul_hull: List[str]
    classes: ClassSummary
    tau_from_resolution: int
    graph_samples: int = Field(..., ge=0)

    @field_validator('minor_constant', mode='before')
    def validate_minor_constant(cls, v):
        return validate_rational_text(v, "Minor constant")

    @property
    def zf_irreducible(self) -> bool:
        return self.classes.zf_irreducible

    class Config:
        extra = "forbid"


class AnalysisReport(BaseModel):
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    field: str
    curve_type: str
    resolution: ResolutionData
    first_syzygy_matrix: GradedMatrixRecord
    singular_points: List[SingularityRecord] = Field(default_factory=list)
    user_points: List[SingularityRecord] = Field(default_factory=list)
    residual_locus_degree: int
    tau_total: int
    mu_total: int
    global_all_qh: bool
    global_certificate_degree: Optional[int] = None
    chart: ChartRecord
    witness: Optional[WitnessRecord] = None
    planar: Optional[PlanarReport] = None
    warnings: List[str] = Field(default_factory=list)

    @field_validator('residual_locus_degree', 'tau_total', 'mu_total', mode='before')
    def validate_totals(cls, v, info):
        return validate_non_negative_int(v, info.field_name)

    @model_validator(mode='after')
    def validate_totals_agree(self):
        resolved = sum(p.tau_p for p in self.singular_points)
        if resolved + self.residual_locus_degree != self.tau_total:
            raise ValueError(
                f"sum of tau_p ({resolved}) plus residual ({self.residual_locus_degree}) "
                f"differs from tau_total ({self.tau_total})"
            )
        if self.mu_total < self.tau_total:
            raise ValueError(f"mu_total = {self.mu_total} is smaller than tau_total = {self.tau_total}")
        if self.global_all_qh != (self.mu_total == self.tau_total):
            raise ValueError(
                f"global_all_qh = {self.global_all_qh} but mu_total = {self.mu_total}, tau_total = {self.tau_total}"
            )
        return self

    @property
    def qh_points(self) -> int:
        return sum(1 for p in self.singular_points if p.is_quasi_homogeneous)

    @property
    def non_qh_points(self) -> int:
        return len(self.singular_points) - self.qh_points

    class Config:
        extra = "forbid"


class InputEcho(BaseModel):
    source: Optional[str] = None
    variables: List[str]
    polynomial: str
    field: str
    seed: int
    order: str

    class Config:
        extra = "forbid"


class Telemetry(BaseModel):
    counters: Dict[str, int] = Field(default_factory=dict)

    @field_validator('counters')
    def sort_counters(cls, v):
        return dict(sorted(v.items()))

    class Config:
        extra = "forbid"


class ReportDocument(BaseModel):
    schema_version: str = REPORT_SCHEMA_VERSION
    input: InputEcho
    report: AnalysisReport
    telemetry: Telemetry = Field(default_factory=Telemetry)

    @field_validator('schema_version')
    def validate_schema_version(cls, v):
        if v != REPORT_SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema version '{v}', expected '{REPORT_SCHEMA_VERSION}'")
        return v

    class Config:
        extra = "forbid"
