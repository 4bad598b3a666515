from pathlib import Path

import pytest

from analysis_errors import NotHomogeneousError, PointNotSingularError, PreconditionError
from analyzer import CurveAnalyzer, add_warning, analysis_warnings_context, generate_text_report
from polynomial_parser import parse_poly_file
from records_pydantics.analysis_settings import AnalysisSettings
from records_pydantics.expectation_ruleset import compare, parse_expect_file
from singular_analysis import chebyshev_fixture

FIXTURES = Path(__file__).parent / "fixtures"
NODAL_CUBIC = "ring x0..x2 over Q\nx1^2*x2 - x0^2*(x0 + x2)\n"


@pytest.fixture
def analyzer():
    return CurveAnalyzer(AnalysisSettings(graph_samples=10))


def test_nodal_cubic_report(analyzer):
    document = analyzer.analyze_text(NODAL_CUBIC, "nodal.poly")
    report = document.report
    assert report.tau_total == report.mu_total == 1
    assert [p.point for p in report.singular_points] == [["0", "0", "1"]]
    assert report.singular_points[0].cross_check
    assert report.global_all_qh
    assert report.witness is not None
    assert report.planar.classes.zf_class.as_list() == [3, 2, 1]
    assert report.planar.graph_samples == 10
    assert document.telemetry.counters["singular_points"] == 1
    assert document.input.source == "nodal.poly"


def test_nodal_cubic_meets_its_expectations(analyzer):
    document = analyzer.analyze_file(FIXTURES / "nodal_cubic.poly")
    expectation = parse_expect_file((FIXTURES / "nodal_cubic.expect").read_text())
    assert compare(expectation, document) == []


def test_non_quasi_homogeneous_point():
    analyzer = CurveAnalyzer(AnalysisSettings(planar=False))
    report = analyzer.analyze_text("ring x0..x2 over Q\nx0*x1^2*x2^2 + x1^5 + x2^5\n").report
    assert report.tau_total == 10
    assert report.mu_total == 11
    assert report.non_qh_points == 1
    assert not report.global_all_qh
    assert report.witness is None
    assert report.planar is None


def test_same_seed_gives_identical_reports(analyzer):
    first = analyzer.analyze_text(NODAL_CUBIC)
    second = analyzer.analyze_text(NODAL_CUBIC)
    assert first.model_dump_json() == second.model_dump_json()


def test_cache_changes_only_telemetry(tmp_path):
    analyzer = CurveAnalyzer(AnalysisSettings(cache_dir=str(tmp_path), planar=False))
    cold = analyzer.analyze_text(NODAL_CUBIC)
    warm = analyzer.analyze_text(NODAL_CUBIC)
    assert cold.report == warm.report
    assert warm.telemetry.counters.get("cache_hits", 0) > 0


def test_cone_is_analyzed_with_a_warning():
    analyzer = CurveAnalyzer(AnalysisSettings(planar=False))
    report = analyzer.analyze_text("ring x0..x2 over Q\nx0^2 + x1^2\n").report
    assert report.resolution.exponents == [0, 1]
    assert report.tau_total == 1
    assert any("cone" in warning for warning in report.warnings)


def test_inhomogeneous_input_rejected(analyzer):
    with pytest.raises(NotHomogeneousError):
        analyzer.analyze_text("ring x0..x2 over Q\nx0^2 - x1\n")


def test_projective_line_rejected(analyzer):
    with pytest.raises(PreconditionError):
        analyzer.analyze_text("ring x0..x1 over Q\nx0^2 + x1^2\n")


def test_planar_block_needs_a_plane_curve():
    with pytest.raises(PreconditionError):
        CurveAnalyzer(AnalysisSettings(planar=True))._planar_enabled(3)


def test_field_override():
    context, _ = parse_poly_file(NODAL_CUBIC)
    widened = CurveAnalyzer(AnalysisSettings(field="Q(i) minpoly t^2+1")).resolve_field(context)
    assert widened.field.generator == "i"
    gaussian, _ = parse_poly_file("ring x0..x2 over Q(i) minpoly t^2+1\nx0^2 + x1^2 + x2^2\n")
    with pytest.raises(PreconditionError):
        CurveAnalyzer(AnalysisSettings(field="Q(a) minpoly t^2-2")).resolve_field(gaussian)


def test_smooth_user_point_gives_warning(analyzer):
    document = analyzer.analyze_text(NODAL_CUBIC, points_text="0 : 1 : 0\n")
    assert document.report.user_points == []
    assert any("smooth point" in warning for warning in document.report.warnings)
    assert ["0", "1", "0"] in document.report.witness.points


def test_user_point_off_the_curve_rejected(analyzer):
    with pytest.raises(PointNotSingularError):
        analyzer.analyze_text(NODAL_CUBIC, points_text="1 : 1 : 1\n")


def test_text_report(analyzer):
    text = generate_text_report(analyzer.analyze_text(NODAL_CUBIC, "nodal.poly"))
    assert text.startswith("Jacobian Syzygy Analysis Report\n" + "=" * 31)
    assert "(0:0:1)  tau_p=1  mu_p=1" in text
    assert "[Z_f] = 3*h1^2 + 2*h1*h2 + 1*h2^2" in text
    assert "Witness syzygy:" in text


def test_add_warning_collects_into_context():
    token = analysis_warnings_context.set([])
    try:
        add_warning("first")
        add_warning("second")
        assert analysis_warnings_context.get() == ["first", "second"]
    finally:
        analysis_warnings_context.reset(token)


@pytest.mark.slow
@pytest.mark.parametrize("n, d, k", [(3, 4, 1), (4, 6, 0)])
def test_chebyshev_hypersurfaces(n, d, k):
    fixture = chebyshev_fixture(n, d, k)
    document = CurveAnalyzer().analyze(fixture.context, fixture.polynomial)
    report = document.report
    assert report.tau_total == fixture.expected["tau"]
    assert report.mu_total == fixture.expected["mu"]
    assert report.global_all_qh
    assert report.residual_locus_degree + sum(p.tau_p for p in report.singular_points) == report.tau_total
