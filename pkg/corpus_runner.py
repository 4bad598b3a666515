"""
Runs the analyzer over a directory of ``.poly`` files, compares each report
with its ``.expect`` sidecar when there is one, and renders the summary table.
"""
import concurrent.futures
import logging
import time
from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError
from tqdm import tqdm

from analysis_errors import AnalysisError
from analyzer import CurveAnalyzer
from constants import (
    CORPUS_STATUS_FAILED,
    CORPUS_STATUS_MISMATCH,
    CORPUS_STATUS_OK,
    EXPECT_SUFFIX,
    POLY_SUFFIX,
)
from records_pydantics.analysis_settings import AnalysisSettings
from records_pydantics.expectation_ruleset import compare, parse_expect_file

LOGGER = logging.getLogger(__name__)


class CorpusRow(BaseModel):
    name: str
    status: str
    d: Optional[int] = None
    m: Optional[int] = None
    exponents: List[int] = Field(default_factory=list)
    tau: Optional[int] = None
    mu: Optional[int] = None
    qh_points: Optional[int] = None
    non_qh_points: Optional[int] = None
    seconds: float = 0.0
    messages: List[str] = Field(default_factory=list)

    class Config:
        extra = "forbid"


def discover(directory) -> List[Path]:
    return sorted(Path(directory).glob(f"*{POLY_SUFFIX}"))


def analyze_entry(path: Path, settings_data: Dict[str, Any]) -> CorpusRow:
    """One corpus row; failures of this file never escape."""
    started = time.perf_counter()
    name = path.stem
    try:
        settings = AnalysisSettings(**settings_data)
        document = CurveAnalyzer(settings).analyze_file(path)
        expect_path = path.with_suffix(EXPECT_SUFFIX)
        mismatches = []
        if expect_path.exists():
            expectation = parse_expect_file(expect_path.read_text(), str(expect_path))
            mismatches = compare(expectation, document)
    except (AnalysisError, ValidationError, OSError) as e:
        LOGGER.error(f"{name}: {type(e).__name__}: {e}")
        return CorpusRow(name=name, status=CORPUS_STATUS_FAILED,
                         seconds=time.perf_counter() - started,
                         messages=[f"{type(e).__name__}: {e}"])
    except Exception as e:
        LOGGER.exception(f"{name}: unexpected {type(e).__name__}")
        return CorpusRow(name=name, status=CORPUS_STATUS_FAILED,
                         seconds=time.perf_counter() - started,
                         messages=[f"{type(e).__name__}: {e}"])

    report = document.report
    return CorpusRow(
        name=name,
        status=CORPUS_STATUS_MISMATCH if mismatches else CORPUS_STATUS_OK,
        d=report.d,
        m=report.resolution.m,
        exponents=list(report.resolution.exponents),
        tau=report.tau_total,
        mu=report.mu_total,
        qh_points=report.qh_points,
        non_qh_points=report.non_qh_points,
        seconds=time.perf_counter() - started,
        messages=mismatches,
    )


def run_corpus(directory, settings: AnalysisSettings, progress: bool = True) -> List[CorpusRow]:
    paths = discover(directory)
    if not paths:
        LOGGER.info(f"No {POLY_SUFFIX} files in {directory}")
        return []
    worker = partial(analyze_entry, settings_data=settings.model_dump())
    rows = []
    if settings.jobs == 1:
        for path in tqdm(paths, desc="corpus", disable=not progress):
            rows.append(worker(path))
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=settings.jobs) as executor:
            for row in tqdm(executor.map(worker, paths, chunksize=1), total=len(paths),
                            desc="corpus", disable=not progress):
                rows.append(row)
    LOGGER.info(f"Corpus of {len(rows)} files: {sum(r.status == CORPUS_STATUS_OK for r in rows)} OK")
    return rows


def has_mismatch(rows: List[CorpusRow]) -> bool:
    return any(row.status != CORPUS_STATUS_OK for row in rows)


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, list):
        return "(" + ",".join(str(v) for v in value) + ")"
    return str(value)


def format_table(rows: List[CorpusRow]) -> str:
    headers = ["curve", "d", "m", "exponents", "tau", "mu", "#QH", "#non-QH", "time", "status"]
    table = [
        [row.name, _cell(row.d), _cell(row.m), _cell(row.exponents or None), _cell(row.tau),
         _cell(row.mu), _cell(row.qh_points), _cell(row.non_qh_points), f"{row.seconds:.2f}s", row.status]
        for row in rows
    ]
    widths = [max(len(h), *(len(r[i]) for r in table)) if table else len(h) for i, h in enumerate(headers)]
    title = "Corpus Summary"
    lines = [title, "=" * len(title)]
    lines.append("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    lines.append("-" * (sum(widths) + 2 * (len(widths) - 1)))
    for r in table:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    for row in rows:
        for message in row.messages:
            lines.append(f"  {row.name}: {message}")
    return "\n".join(lines)
