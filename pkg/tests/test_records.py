import pytest
from pydantic import ValidationError

from analysis_errors import ExpectationFileError
from records_pydantics.expectation_ruleset import compare, observed_values, parse_expect_file
from records_pydantics.report_document import (
    AnalysisReport,
    GradedMatrixRecord,
    InputEcho,
    ReportDocument,
    Telemetry,
)
from records_pydantics.singularity_records import BidegreeClass, ChartRecord, SingularityRecord


def _point(tau=1, mu=1, rank=1):
    return SingularityRecord(
        point=["0", "0", "1"],
        tau_p=tau,
        mu_p=mu,
        rank_mf=rank,
        verdict="quasi-homogeneous" if rank else "non-quasi-homogeneous",
        witness_entry=[0, 0] if rank else None,
        cross_check=True,
    )


def _report(**changes):
    values = dict(
        n=2,
        d=3,
        field="Q",
        curve_type="3-syzygy",
        resolution={"d": 3, "m": 3, "exponents": [1, 2, 2]},
        first_syzygy_matrix={"entries": [["x0"]], "row_shifts": [2], "col_shifts": [3]},
        singular_points=[_point()],
        residual_locus_degree=0,
        tau_total=1,
        mu_total=1,
        global_all_qh=True,
        chart=ChartRecord(matrix=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], attempts=1),
    )
    values.update(changes)
    return AnalysisReport(**values)


def _document(report):
    echo = InputEcho(variables=["x0", "x1", "x2"], polynomial="x1^2*x2 - x0^3", field="Q", seed=0, order="grevlex")
    return ReportDocument(input=echo, report=report)


def test_singularity_record_verdict_follows_rank():
    with pytest.raises(ValidationError):
        SingularityRecord(point=["1", "0", "0"], tau_p=10, mu_p=11, rank_mf=0,
                          verdict="quasi-homogeneous", cross_check=True)


def test_singularity_record_needs_mu_at_least_tau():
    with pytest.raises(ValidationError):
        _point(tau=3, mu=2)


def test_singularity_record_label():
    assert _point().label == "(0:0:1)"
    assert _point().is_quasi_homogeneous


def test_report_totals_must_add_up():
    with pytest.raises(ValidationError):
        _report(tau_total=2, mu_total=2)
    assert _report(tau_total=2, mu_total=2, residual_locus_degree=1).tau_total == 2


def test_report_global_flag_matches_totals():
    with pytest.raises(ValidationError):
        _report(mu_total=2)
    report = _report(mu_total=2, global_all_qh=False)
    assert report.qh_points == 1
    assert report.non_qh_points == 0


def test_graded_matrix_record_shape():
    with pytest.raises(ValidationError):
        GradedMatrixRecord(entries=[["x0", "x1"]], row_shifts=[0], col_shifts=[1])


def test_schema_version_is_checked():
    document = _document(_report())
    assert document.schema_version == "1.2"
    with pytest.raises(ValidationError):
        ReportDocument(schema_version="0.9", input=document.input, report=document.report)


def test_telemetry_counters_are_sorted():
    telemetry = Telemetry(counters={"witness_trials": 1, "bases_computed": 4})
    assert list(telemetry.counters) == ["bases_computed", "witness_trials"]


def test_chart_record_identity():
    assert ChartRecord(matrix=[[1, 0], [0, 1]], attempts=1).is_identity
    assert not ChartRecord(matrix=[[1, 2], [0, 1]], attempts=3).is_identity


def test_bidegree_class_is_frozen():
    value = BidegreeClass(alpha=3, beta=2, gamma=1)
    with pytest.raises(ValidationError):
        value.alpha = 4


def test_parse_expect_file():
    expectation = parse_expect_file("# nodal cubic\nd = 3\ntau = 1  # one node\nexponents = 1, 2, 2\nglobal_all_qh = true\n")
    assert expectation.declared() == {"d": 3, "tau": 1, "exponents": [1, 2, 2], "global_all_qh": True}


@pytest.mark.parametrize("text, message", [
    ("d 3\n", "expected 'key = value'"),
    ("degree = 3\n", "unknown key 'degree'"),
    ("d = 3\nd = 4\n", "duplicate key 'd'"),
    ("tau = one\n", "tau"),
    ("zf_class = 3, 2\n", "zf_class"),
    ("global_all_qh = maybe\n", "global_all_qh"),
])
def test_bad_expect_files(text, message):
    with pytest.raises(ExpectationFileError) as info:
        parse_expect_file(text, "bad.expect")
    assert message in str(info.value)
    assert "bad.expect" in str(info.value)


def test_compare_reports_each_mismatch():
    document = _document(_report())
    expectation = parse_expect_file("d = 3\ntau = 2\npoints = 1\ne = 5\n")
    assert compare(expectation, document) == [
        "e: expected [5], not computed",
        "tau: expected 2, got 1",
    ]


def test_observed_values_without_planar_block():
    observed = observed_values(_document(_report()))
    assert observed["qh_points"] == 1
    assert observed["defect"] == 0
    assert "zf_class" not in observed
