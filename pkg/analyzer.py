"""
One analysis of a projective hypersurface V(f): parse, syzygies, singular
points and their local numbers, the quasi-homogeneity verdicts with their
cross-checks, and for plane curves the bigraded block. Produces a
ReportDocument and a text rendering of it.
"""
import logging
import random
import time
from contextvars import ContextVar
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from analysis_errors import (
    CrossCheckError,
    NotHomogeneousError,
    PointNotSingularError,
    PreconditionError,
    ResolutionIdentityError,
)
from basis_cache import BasisCache
from constants import NON_QUASI_HOMOGENEOUS, QUASI_HOMOGENEOUS
from field_arithmetic import format_rational
from groebner_engine import (
    Ideal,
    basis_cache_context,
    engine_counters_context,
    engine_limits,
    projective_degree,
)
from planar_geometry import (
    BigradedRing,
    class_coefficient_identities,
    classes,
    graph_sample_points,
    hilbert_burch,
    koszul_hull_generators,
    zf_generators,
)
from polynomial_parser import parse_field_declaration, parse_points_file, parse_poly_file
from polynomial_ring import RingContext, evaluate, format_polynomial, gradient, is_homogeneous, total_degree
from records_pydantics.analysis_settings import AnalysisSettings
from records_pydantics.report_document import (
    AnalysisReport,
    GradedMatrixRecord,
    InputEcho,
    PlanarReport,
    ReportDocument,
    Telemetry,
)
from records_pydantics.singularity_records import (
    ChartRecord,
    ResolutionData,
    SingularityRecord,
    WitnessRecord,
)
from singular_analysis import (
    ProjectivePoint,
    choose_transversal_chart,
    find_singular_points,
    global_all_qh,
    is_singular_point,
    local_numbers,
    qh_at_point,
    total_milnor,
    total_tjurina,
    witness_syzygy,
)
from syzygy_module import (
    GradedMatrix,
    check_resolution_identities,
    first_syzygy_matrix,
    jacobian_degree_from_resolution,
    lift_koszul,
    second_syzygies,
)

LOGGER = logging.getLogger(__name__)

# context variable to collect non-fatal diagnostics during one analysis
analysis_warnings_context: ContextVar[List[str]] = ContextVar('analysis_warnings', default=[])


def add_warning(message: str):
    LOGGER.warning(message)
    current_warnings = analysis_warnings_context.get()
    current_warnings.append(message)
    analysis_warnings_context.set(current_warnings)


class CurveAnalyzer:
    def __init__(self, settings: Optional[AnalysisSettings] = None):
        self.settings = settings or AnalysisSettings()

    # inputs

    def resolve_field(self, context: RingContext) -> RingContext:
        """Apply the --field override to the field declared in the file."""
        if self.settings.field is None:
            return context
        declared = parse_field_declaration(self.settings.field)
        if context.field.is_extension and declared != context.field:
            raise PreconditionError(
                f"--field {declared.describe()} contradicts the file's {context.field.describe()}"
            )
        return RingContext(context.variables, declared)

    def analyze_text(self, text: str, source: Optional[str] = None,
                     points_text: Optional[str] = None) -> ReportDocument:
        context, f = parse_poly_file(text)
        context = self.resolve_field(context)
        user_points = None
        if points_text is not None:
            user_points = parse_points_file(points_text, context.field, context.nvars)
        return self.analyze(context, f, user_points, source)

    def analyze_file(self, path, points_path=None) -> ReportDocument:
        path = Path(path)
        points_text = Path(points_path).read_text() if points_path else None
        return self.analyze_text(path.read_text(), str(path), points_text)

    # the pipeline

    def analyze(self, context: RingContext, f, user_points: Optional[Sequence[Sequence]] = None,
                source: Optional[str] = None) -> ReportDocument:
        settings = self.settings
        counters: Dict[str, int] = {}
        warnings_token = analysis_warnings_context.set([])
        counters_token = engine_counters_context.set(counters)
        cache = BasisCache(settings.cache_dir) if settings.cache_dir else None
        cache_token = basis_cache_context.set(cache)
        started = time.perf_counter()
        try:
            with engine_limits(settings.budget_pairs, settings.budget_degree):
                report = self._run(context, f, user_points or [], counters)
        finally:
            basis_cache_context.reset(cache_token)
            engine_counters_context.reset(counters_token)
            analysis_warnings_context.reset(warnings_token)
        LOGGER.info(f"Analysis of {source or 'input'} finished in {time.perf_counter() - started:.2f}s")

        echo = InputEcho(
            source=source,
            variables=list(context.variables),
            polynomial=format_polynomial(f),
            field=context.field.describe(),
            seed=settings.seed,
            order=settings.order,
        )
        return ReportDocument(input=echo, report=report, telemetry=Telemetry(counters=counters))

    def _check_input(self, context: RingContext, f) -> Tuple[int, int]:
        if not f:
            raise PreconditionError("the zero polynomial does not define a hypersurface")
        if not is_homogeneous(f):
            raise NotHomogeneousError(f"f = {format_polynomial(f)} is not homogeneous")
        n = context.nvars - 1
        d = total_degree(f)
        if n < 2:
            raise PreconditionError(f"need at least three variables, got {context.nvars}")
        if d < 2:
            raise PreconditionError(f"need degree at least 2, got {d}")
        return n, d

    def _run(self, context: RingContext, f, user_points: List[list], counters: Dict[str, int]) -> AnalysisReport:
        settings = self.settings
        n, d = self._check_input(context, f)
        rng = random.Random(settings.seed)

        tau = projective_degree(Ideal(gradient(f), f.ring), settings.order)
        LOGGER.info(f"deg J_f = {tau}")

        M_f, data = first_syzygy_matrix(f)
        if data.exponents and data.exponents[0] == 0:
            add_warning("f does not involve every variable: V(f) is a cone and M_f has a degree-0 column")
        LOGGER.info(f"M_f has {data.m} columns, exponents {data.exponents}")

        points, residual = find_singular_points(f, context.domain, tau, settings.local_order_budget)

        matrix, attempts = choose_transversal_chart(f, rng, settings.chart_retries)
        counters['chart_attempts'] = attempts
        tau_chart = total_tjurina(f, matrix)
        if tau_chart != tau:
            raise CrossCheckError(f"total Tjurina number {tau_chart} in the chart differs from deg J_f = {tau}")
        mu = total_milnor(f, matrix)

        records = [self._point_record(f, M_f, p) for p in points]
        if residual == 0 and sum(r.mu_p for r in records) != mu:
            raise CrossCheckError(
                f"local Milnor numbers add up to {sum(r.mu_p for r in records)}, total is {mu}"
            )
        if residual:
            add_warning(f"singular points of total Tjurina number {residual} have coordinates outside {context.field.describe()}")

        all_qh, certificate = global_all_qh(f, M_f)
        if all_qh != (mu == tau):
            raise CrossCheckError(f"global test says all_qh = {all_qh} but mu = {mu}, tau = {tau}")

        user_records, user_projective = self._user_points(f, M_f, context, user_points)

        planar = None
        if self._planar_enabled(n):
            planar, data = self._planar_block(f, M_f, data, tau, mu, rng, counters)

        witness = None
        targets = list(dict.fromkeys(points + user_projective))
        if all_qh and targets:
            element, trial = witness_syzygy(f, M_f, data, targets, rng, settings.witness_trials)
            counters['witness_trials'] = trial
            witness = WitnessRecord(
                components=element.to_strings(),
                degree=data.exponents[-1],
                trials=trial,
                points=[p.to_strings() for p in targets],
            )

        counters['singular_points'] = len(points)
        return AnalysisReport(
            n=n,
            d=d,
            field=context.field.describe(),
            curve_type=data.curve_type,
            resolution=data,
            first_syzygy_matrix=GradedMatrixRecord.from_matrix(M_f),
            singular_points=records,
            user_points=user_records,
            residual_locus_degree=residual,
            tau_total=tau,
            mu_total=mu,
            global_all_qh=all_qh,
            global_certificate_degree=certificate,
            chart=ChartRecord(matrix=[list(row) for row in matrix], attempts=attempts),
            witness=witness,
            planar=planar,
            warnings=list(analysis_warnings_context.get()),
        )

    def _point_record(self, f, M_f: GradedMatrix, point: ProjectivePoint, user_supplied: bool = False) -> SingularityRecord:
        tau_p, mu_p = local_numbers(f, point, self.settings.local_order_budget)
        rank, entry = qh_at_point(M_f, point)
        agrees = (rank >= 1) == (mu_p == tau_p)
        if not agrees:
            raise CrossCheckError(
                f"at {point}: rank M_f(p) = {rank} but mu_p = {mu_p}, tau_p = {tau_p}"
            )
        LOGGER.info(f"{point}: tau_p = {tau_p}, mu_p = {mu_p}, rank M_f(p) = {rank}")
        return SingularityRecord(
            point=point.to_strings(),
            tau_p=tau_p,
            mu_p=mu_p,
            rank_mf=rank,
            verdict=QUASI_HOMOGENEOUS if rank else NON_QUASI_HOMOGENEOUS,
            witness_entry=list(entry) if entry else None,
            cross_check=agrees,
            user_supplied=user_supplied,
        )

    def _user_points(self, f, M_f: GradedMatrix, context: RingContext,
                     user_points: List[list]) -> Tuple[List[SingularityRecord], List[ProjectivePoint]]:
        records, projective = [], []
        for coordinates in user_points:
            point = ProjectivePoint(coordinates, context.domain)
            if evaluate(f, point.coordinates, point.domain):
                raise PointNotSingularError(f"user point {point} does not lie on V(f)")
            projective.append(point)
            if is_singular_point(f, point):
                records.append(self._point_record(f, M_f, point, user_supplied=True))
            else:
                add_warning(f"user point {point} is a smooth point of V(f)")
        return records, projective

    def _planar_enabled(self, n: int) -> bool:
        planar = self.settings.planar
        if planar and n != 2:
            raise PreconditionError(f"the planar block needs a plane curve, got n = {n}")
        return n == 2 if planar is None else planar

    def _planar_block(self, f, M_f: GradedMatrix, data: ResolutionData, tau: int, mu: int,
                      rng: random.Random, counters: Dict[str, int]) -> Tuple[PlanarReport, ResolutionData]:
        settings = self.settings
        d = data.d
        P_f, data = second_syzygies(M_f, data)
        failures = check_resolution_identities(data, tau)
        failures += class_coefficient_identities(d, data.exponents, data.second_degrees, tau)
        if failures:
            raise ResolutionIdentityError("; ".join(failures))

        partials = gradient(f)
        N = lift_koszul(M_f, partials)
        bigraded = BigradedRing(f.ring)
        result = hilbert_burch(P_f, N, M_f, data, bigraded)
        summary = classes(d, mu, tau)
        forms = zf_generators(M_f, bigraded)
        hull = koszul_hull_generators(f, bigraded)

        samples = graph_sample_points(f, settings.graph_samples, rng)
        for p, q in samples:
            for form in forms + hull:
                if form.evaluate(p, q):
                    raise ResolutionIdentityError(f"{form} does not vanish on the graph of the polar map at {p}")
        counters['graph_samples'] = len(samples)
        if summary.defect:
            LOGGER.info(f"Z_f is reducible: mu - tau = {summary.defect}")

        planar = PlanarReport(
            second_syzygy_matrix=GradedMatrixRecord.from_matrix(P_f),
            koszul_lift=GradedMatrixRecord.from_matrix(N),
            hilbert_burch_matrix=GradedMatrixRecord.from_matrix(result.S),
            minor_constant=format_rational(result.constant),
            column_classes=[list(c) for c in result.column_classes],
            zf_equations=[str(form) for form in forms],
            koszul_hull=[str(form) for form in hull],
            classes=summary,
            tau_from_resolution=jacobian_degree_from_resolution(data),
            graph_samples=len(samples),
        )
        return planar, data


def generate_text_report(document: ReportDocument) -> str:
    report = document.report
    title = "Jacobian Syzygy Analysis Report"
    lines = [title, "=" * len(title)]
    if document.input.source:
        lines.append(f"\nSource: {document.input.source}")
    lines.append(f"Polynomial: {document.input.polynomial}")
    lines.append(f"Field: {report.field}")
    lines.append(f"n = {report.n}, d = {report.d}, curve type: {report.curve_type}")
    lines.append(f"Exponents d_i: {tuple(report.resolution.exponents)}")
    if report.resolution.complete:
        lines.append(f"Second syzygy degrees e_j: {tuple(report.resolution.second_degrees)}")
        lines.append(f"Epsilons: {tuple(report.resolution.epsilons)}")
    lines.append(f"\nTotal Tjurina number tau: {report.tau_total}")
    lines.append(f"Total Milnor number mu: {report.mu_total}")
    lines.append(f"Residual locus degree: {report.residual_locus_degree}")
    verdict = "all singularities quasi-homogeneous" if report.global_all_qh else "some singularity is not quasi-homogeneous"
    lines.append(f"Global test: {verdict}")
    if not report.chart.is_identity:
        lines.append(f"Chart: x0 -> {report.chart.matrix[0]} after {report.chart.attempts} attempt(s)")

    for heading, records in (("Singular points", report.singular_points), ("User points", report.user_points)):
        if not records:
            continue
        lines.append(f"\n\n{heading}:")
        lines.append("-" * 20)
        for record in records:
            lines.append(
                f"{record.label}  tau_p={record.tau_p}  mu_p={record.mu_p}  "
                f"rank M_f(p)={record.rank_mf}  {record.verdict}"
            )

    if report.witness:
        lines.append("\n\nWitness syzygy:")
        lines.append("-" * 20)
        lines.append(f"degree {report.witness.degree}, found in trial {report.witness.trials}")
        lines.append("(" + ", ".join(report.witness.components) + ")")

    if report.planar:
        planar = report.planar
        lines.append("\n\nPlane curve geometry:")
        lines.append("-" * 20)
        lines.append(f"[S_f] = {planar.classes.sf_class}")
        lines.append(f"[Z_f] = {planar.classes.zf_class}")
        lines.append(f"Degree of the polar map: {planar.classes.polar_degree}")
        lines.append(f"Z_f irreducible: {'yes' if planar.zf_irreducible else 'no'} (mu - tau = {planar.classes.defect})")
        lines.append(f"Hilbert-Burch minors = {planar.minor_constant} * (y M_f)")
        lines.append(f"Graph points checked: {planar.graph_samples}")

    if report.warnings:
        lines.append("\n\nWarnings:")
        lines.append("-" * 20)
        for warning in report.warnings:
            lines.append(f"  WARNING: {warning}")
    return "\n".join(lines)
