import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from analysis_errors import AnalysisError, PreconditionError
from analyzer import CurveAnalyzer, generate_text_report
from basis_cache import BasisCache
from constants import (
    EXIT_EXPECTATION_MISMATCH,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXPECT_SUFFIX,
    LOG_FORMAT,
    SUPPORTED_ORDERS,
)
from corpus_runner import format_table, has_mismatch, run_corpus
from polynomial_ring import format_polynomial
from records_pydantics.analysis_settings import AnalysisSettings, load_settings
from records_pydantics.report_document import ReportDocument
from singular_analysis import FixtureCurve, chebyshev_fixture, ploski_fixture

LOGGER = logging.getLogger(__name__)


def _add_engine_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--field", help="coefficient field, e.g. 'Q(i) minpoly t^2+1'")
    parser.add_argument("--seed", type=int, help="seed for chart and witness choices (default 0)")
    parser.add_argument("--order", choices=SUPPORTED_ORDERS, help="monomial order for deg J_f")
    parser.add_argument("--budget-degree", type=int, help="largest degree explored by Hilbert function loops")
    parser.add_argument("--budget-pairs", type=int, help="largest number of S-pairs per Groebner basis")
    parser.add_argument("--cache-dir", help="directory of the Groebner basis cache")
    planar = parser.add_mutually_exclusive_group()
    planar.add_argument("--planar", dest="planar", action="store_true", default=None,
                        help="force the plane curve block")
    planar.add_argument("--no-planar", dest="planar", action="store_false", default=None,
                        help="skip the plane curve block")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jacsyz",
        description="Jacobian syzygies and quasi-homogeneity of isolated hypersurface singularities",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="analyze one .poly file")
    analyze.add_argument("path", help=".poly file")
    analyze.add_argument("--points", help="file of extra points, one 'a : b : c' per line")
    analyze.add_argument("--json", dest="json_path", help="write the JSON report here")
    _add_engine_flags(analyze)

    corpus = commands.add_parser("corpus", help="analyze every .poly file of a directory")
    corpus.add_argument("directory")
    corpus.add_argument("--jobs", type=int, help="worker processes (default 1)")
    corpus.add_argument("--no-progress", action="store_true", help="hide the progress bar")
    _add_engine_flags(corpus)

    commands.add_parser("schema", help="print the JSON schema of the report")

    cache = commands.add_parser("cache", help="manage the Groebner basis cache")
    cache_commands = cache.add_subparsers(dest="cache_command", required=True)
    clear = cache_commands.add_parser("clear", help="delete every cached basis")
    clear.add_argument("--cache-dir", help="cache directory (default JACSYZ_CACHE_DIR)")

    fixture = commands.add_parser("fixture", help="write a generated curve as a .poly file")
    fixture_commands = fixture.add_subparsers(dest="fixture_kind", required=True)
    chebyshev = fixture_commands.add_parser("chebyshev", help="T_d(x1) + ... + T_d(xn) + k")
    chebyshev.add_argument("--n", type=int, required=True)
    chebyshev.add_argument("--d", type=int, required=True)
    chebyshev.add_argument("--k", default="0", help="constant term, an integer or p/q")
    chebyshev.add_argument("-o", "--output", required=True)
    ploski = fixture_commands.add_parser("ploski", help="k conics tangent at one point")
    ploski.add_argument("--k", type=int, required=True)
    ploski.add_argument("--tangent", action="store_true", help="also multiply by the common tangent")
    ploski.add_argument("-o", "--output", required=True)
    return parser


def settings_from_args(args: argparse.Namespace) -> AnalysisSettings:
    overrides = {}
    for name in AnalysisSettings.model_fields:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return load_settings(overrides)


def run_analyze(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    document = CurveAnalyzer(settings).analyze_file(args.path, args.points)
    if args.json_path:
        Path(args.json_path).write_text(document.model_dump_json(indent=2) + "\n")
        LOGGER.info(f"Report written to {args.json_path}")
    print(generate_text_report(document))
    return EXIT_OK


def run_corpus_command(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    rows = run_corpus(args.directory, settings, progress=not args.no_progress)
    print(format_table(rows))
    return EXIT_EXPECTATION_MISMATCH if has_mismatch(rows) else EXIT_OK


def run_schema(args: argparse.Namespace) -> int:
    print(json.dumps(ReportDocument.model_json_schema(), indent=2))
    return EXIT_OK


def run_cache_clear(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    if not settings.cache_dir:
        raise PreconditionError("no cache directory: pass --cache-dir or set JACSYZ_CACHE_DIR")
    removed = BasisCache(settings.cache_dir).clear()
    print(f"Removed {removed} cached bases from {settings.cache_dir}")
    return EXIT_OK


def format_expectations(expected: Dict[str, Any]) -> str:
    lines = []
    for key, value in expected.items():
        if isinstance(value, bool):
            value = str(value).lower()
        elif isinstance(value, (list, tuple)):
            value = ", ".join(str(v) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def format_poly_file(curve: FixtureCurve, comment: str) -> str:
    variables = curve.context.variables
    return (f"# {comment}\n"
            f"ring {variables[0]}..{variables[-1]} over Q\n"
            f"{format_polynomial(curve.polynomial)}\n")


def run_fixture(args: argparse.Namespace) -> int:
    if args.fixture_kind == "chebyshev":
        curve = chebyshev_fixture(args.n, args.d, args.k)
        comment = f"Chebyshev hypersurface C({args.n},{args.d},{args.k})"
    else:
        curve = ploski_fixture(args.k, args.tangent)
        comment = f"Ploski curve of {args.k} conics" + (" and their tangent" if args.tangent else "")
    output = Path(args.output)
    output.write_text(format_poly_file(curve, comment))
    output.with_suffix(EXPECT_SUFFIX).write_text(format_expectations(curve.expected))
    print(f"Wrote {output} and {output.with_suffix(EXPECT_SUFFIX)}")
    return EXIT_OK


COMMANDS = {
    "analyze": run_analyze,
    "corpus": run_corpus_command,
    "schema": run_schema,
    "cache": run_cache_clear,
    "fixture": run_fixture,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except AnalysisError as e:
        LOGGER.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValidationError as e:
        for error in e.errors():
            field_path = '.'.join(str(x) for x in error['loc'])
            LOGGER.error(f"invalid setting {field_path}: {error['msg']}")
        return EXIT_PRECONDITION
    except OSError as e:
        LOGGER.error(f"{e}")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
