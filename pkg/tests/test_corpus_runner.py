from pathlib import Path

import pytest

from analyzer import CurveAnalyzer
from corpus_runner import CorpusRow, analyze_entry, discover, format_table, has_mismatch, run_corpus
from records_pydantics.analysis_settings import AnalysisSettings

FIXTURES = Path(__file__).parent / "fixtures"
NODAL_CUBIC = "ring x0..x2 over Q\nx1^2*x2 - x0^2*(x0 + x2)\n"
CUSP = "ring x0..x2 over Q\nx1^2*x2 - x0^3\n"


@pytest.fixture
def settings():
    return AnalysisSettings(planar=False)


@pytest.fixture
def small_corpus(tmp_path):
    (tmp_path / "b_nodal.poly").write_text(NODAL_CUBIC)
    (tmp_path / "b_nodal.expect").write_text("tau = 1\nmu = 1\npoints = 1\n")
    (tmp_path / "a_cusp.poly").write_text(CUSP)
    (tmp_path / "notes.txt").write_text("not a curve")
    return tmp_path


def test_discover_sorts_poly_files(small_corpus):
    assert [p.name for p in discover(small_corpus)] == ["a_cusp.poly", "b_nodal.poly"]


def test_entry_without_expectations_is_ok(small_corpus, settings):
    row = analyze_entry(small_corpus / "a_cusp.poly", settings.model_dump())
    assert row.status == "OK"
    assert (row.tau, row.mu, row.qh_points) == (2, 2, 1)


def test_broken_entry_fails_without_raising(tmp_path, settings):
    path = tmp_path / "broken.poly"
    path.write_text("ring x0..x2 over Q\nx0^2 - x1\n")
    row = analyze_entry(path, settings.model_dump())
    assert row.status == "FAILED"
    assert row.messages[0].startswith("NotHomogeneousError")


def test_bad_expect_file_fails_the_entry(tmp_path, settings):
    (tmp_path / "nodal.poly").write_text(NODAL_CUBIC)
    (tmp_path / "nodal.expect").write_text("taus = 1\n")
    row = analyze_entry(tmp_path / "nodal.poly", settings.model_dump())
    assert row.status == "FAILED"
    assert "unknown key 'taus'" in row.messages[0]


def test_run_corpus_sequential(small_corpus, settings):
    rows = run_corpus(small_corpus, settings, progress=False)
    assert [row.name for row in rows] == ["a_cusp", "b_nodal"]
    assert not has_mismatch(rows)


def test_run_corpus_in_worker_processes(small_corpus):
    rows = run_corpus(small_corpus, AnalysisSettings(planar=False, jobs=2), progress=False)
    assert [row.status for row in rows] == ["OK", "OK"]


def test_empty_directory(tmp_path, settings):
    assert run_corpus(tmp_path, settings, progress=False) == []


def test_format_table():
    rows = [
        CorpusRow(name="nodal", status="OK", d=3, m=3, exponents=[1, 2, 2], tau=1, mu=1,
                  qh_points=1, non_qh_points=0, seconds=0.5),
        CorpusRow(name="broken", status="FAILED", messages=["NotHomogeneousError: x0^2 - x1"]),
    ]
    table = format_table(rows)
    lines = table.splitlines()
    assert lines[0] == "Corpus Summary"
    assert "(1,2,2)" in lines[4]
    assert lines[5].startswith("broken")
    assert "  broken: NotHomogeneousError: x0^2 - x1" in lines
    assert has_mismatch(rows)


def test_unexpected_error_is_isolated(small_corpus, settings, monkeypatch):
    analyze_file = CurveAnalyzer.analyze_file

    def failing_for_cusp(self, path, points_path=None):
        if Path(path).stem == "a_cusp":
            raise RuntimeError("sympy gave up")
        return analyze_file(self, path, points_path)

    monkeypatch.setattr(CurveAnalyzer, "analyze_file", failing_for_cusp)
    rows = run_corpus(small_corpus, settings, progress=False)
    assert [row.status for row in rows] == ["FAILED", "OK"]
    assert rows[0].messages == ["RuntimeError: sympy gave up"]
    assert has_mismatch(rows)


def test_fixture_corpus_has_every_example():
    assert len(discover(FIXTURES)) >= 12
    assert all(path.with_suffix(".expect").exists() for path in discover(FIXTURES))


@pytest.mark.parametrize("path", discover(FIXTURES), ids=lambda path: path.stem)
def test_fixture_meets_expectations(path):
    row = analyze_entry(path, AnalysisSettings().model_dump())
    assert row.status == "OK", row.messages
