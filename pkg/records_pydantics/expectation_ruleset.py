"""
Expected values of a corpus entry, read from its ``.expect`` sidecar
(``key = value`` lines, ``#`` comments), and their comparison with a report.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ValidationError, field_validator

from analysis_errors import ExpectationFileError
from constants import EXPECTATION_KEYS
from records_pydantics.report_document import ReportDocument
from validation_utils import parse_bool, parse_int_list, strip_and_convert_empty_to_none


class CurveExpectation(BaseModel):
    d: Optional[int] = None
    n: Optional[int] = None
    m: Optional[int] = None
    exponents: Optional[List[int]] = None
    e: Optional[List[int]] = None
    tau: Optional[int] = None
    mu: Optional[int] = None
    deg_jf: Optional[int] = None
    residual: Optional[int] = None
    points: Optional[int] = None
    qh_points: Optional[int] = None
    non_qh_points: Optional[int] = None
    global_all_qh: Optional[bool] = None
    defect: Optional[int] = None
    zf_class: Optional[List[int]] = None
    sf_class: Optional[List[int]] = None
    curve_type: Optional[str] = None

    @field_validator('*', mode='before')
    def empty_to_none(cls, v):
        return strip_and_convert_empty_to_none(v)

    @field_validator('exponents', 'e', 'zf_class', 'sf_class', mode='before')
    def validate_int_lists(cls, v, info):
        return parse_int_list(v, info.field_name)

    @field_validator('global_all_qh', mode='before')
    def validate_flag(cls, v, info):
        return parse_bool(v, info.field_name)

    @field_validator('zf_class', 'sf_class')
    def validate_class_length(cls, v, info):
        if v is not None and len(v) != 3:
            raise ValueError(f"{info.field_name} must have three coefficients, got {v}")
        return v

    def declared(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)

    class Config:
        validate_assignment = True
        extra = "forbid"


def parse_expect_file(text: str, source: str = "<expect>") -> CurveExpectation:
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ExpectationFileError(f"{source}:{number}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in EXPECTATION_KEYS:
            raise ExpectationFileError(f"{source}:{number}: unknown key '{key}'")
        if key in values:
            raise ExpectationFileError(f"{source}:{number}: duplicate key '{key}'")
        values[key] = value
    try:
        return CurveExpectation(**values)
    except ValidationError as e:
        messages = "; ".join(f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ExpectationFileError(f"{source}: {messages}")


def observed_values(document: ReportDocument) -> Dict[str, Any]:
    """Every expectation key read off a report; planar keys only when the planar block ran."""
    report = document.report
    observed = {
        'd': report.d,
        'n': report.n,
        'm': report.resolution.m,
        'exponents': list(report.resolution.exponents),
        'tau': report.tau_total,
        'mu': report.mu_total,
        'deg_jf': report.tau_total,
        'residual': report.residual_locus_degree,
        'points': len(report.singular_points),
        'qh_points': report.qh_points,
        'non_qh_points': report.non_qh_points,
        'global_all_qh': report.global_all_qh,
        'defect': report.mu_total - report.tau_total,
        'curve_type': report.curve_type,
    }
    if report.resolution.complete:
        observed['e'] = list(report.resolution.second_degrees)
    if report.planar is not None:
        observed['zf_class'] = report.planar.classes.zf_class.as_list()
        observed['sf_class'] = report.planar.classes.sf_class.as_list()
    return observed


def compare(expectation: CurveExpectation, document: ReportDocument) -> List[str]:
    """One message per declared key whose observed value differs or is unavailable."""
    observed = observed_values(document)
    mismatches = []
    for key, expected in expectation.declared().items():
        if key not in observed:
            mismatches.append(f"{key}: expected {expected}, not computed")
        elif observed[key] != expected:
            mismatches.append(f"{key}: expected {expected}, got {observed[key]}")
    return mismatches
