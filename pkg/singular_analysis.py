"""
Singular points of a projective hypersurface V(f), their local Milnor and
Tjurina numbers, the totals over the whole curve or surface, and the
quasi-homogeneity tests: the rank of M_f at a point and the global test
that J_f + I_f has no zero.
"""
import logging
import random
from functools import lru_cache
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy import QQ, Rational, chebyshevt_poly
from sympy.polys.rings import PolyRing

from analysis_errors import (
    ChartSearchError,
    CrossCheckError,
    NonIsolatedSingularityError,
    NonQuasiHomogeneousPointError,
    NotZeroDimensionalError,
    PointNotSingularError,
    PreconditionError,
    WitnessNotFoundError,
)
from constants import (
    DEFAULT_CHART_RETRIES,
    DEFAULT_LOCAL_ORDER_BUDGET,
    DEFAULT_WITNESS_TRIALS,
    SHEAR_COEFFICIENT_RANGE,
    WITNESS_COEFFICIENT_RANGE,
)
from field_arithmetic import format_field_element
from groebner_engine import Ideal, affine_quotient_dimension, projective_degree, projective_is_empty
from polynomial_ring import (
    RingContext,
    coerce_coordinates,
    dehomogenize,
    evaluate,
    gradient,
    homogenize,
    linear_change,
    monomial_power_ideal,
    monomials_of_degree,
    shear_matrix,
    to_ring,
    total_degree,
    translate,
    variable_range,
)
from records_pydantics.singularity_records import ResolutionData
from syzygy_module import FreeModuleElement, GradedMatrix, koszul_syzygies

LOGGER = logging.getLogger(__name__)


class ProjectivePoint:
    """Homogeneous coordinates scaled so that the first nonzero one is 1."""

    def __init__(self, coordinates: Sequence, domain=QQ):
        coords = coerce_coordinates(coordinates, domain)
        pivot = next((i for i, c in enumerate(coords) if c), None)
        if pivot is None:
            raise PreconditionError("a projective point needs a nonzero coordinate")
        inverse = domain.quo(domain.one, coords[pivot])
        self.coordinates = tuple(c * inverse for c in coords)
        self.domain = domain
        self.chart = pivot

    @property
    def nvars(self) -> int:
        return len(self.coordinates)

    def affine_coordinates(self) -> list:
        return [c for i, c in enumerate(self.coordinates) if i != self.chart]

    def to_strings(self) -> List[str]:
        return [format_field_element(c, self.domain) for c in self.coordinates]

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coordinates == other.coordinates

    def __hash__(self):
        return hash(self.coordinates)

    def __str__(self):
        return "(" + ":".join(self.to_strings()) + ")"

    def __repr__(self):
        return f"ProjectivePoint{self}"


def extended(f, domain):
    return to_ring(f, f.ring.clone(domain=domain))


def is_singular_point(f, point: ProjectivePoint) -> bool:
    return all(not evaluate(p, point.coordinates, point.domain) for p in gradient(f))


# locating the singular points

def _linear_roots(u) -> list:
    """Roots in the coefficient field of a polynomial that only involves the last variable."""
    roots = []
    _, factors = u.factor_list()
    for factor, _ in factors:
        if total_degree(factor) != 1:
            continue
        a = b = factor.ring.domain.zero
        for monom, coeff in factor.iterterms():
            if monom[-1] == 1:
                a = coeff
            else:
                b = coeff
        roots.append(-factor.ring.domain.quo(b, a))
    return roots


def _solve_zero_dimensional(polys: list, ring) -> List[tuple]:
    """All solutions with coordinates in the coefficient field, by lex triangularization."""
    basis = Ideal(polys, ring).basis('lex')
    if basis.is_unit:
        return []
    univariate = [g for g in basis.polys if all(not any(m[:-1]) for m in g.itermonoms())]
    if not univariate:
        raise NonIsolatedSingularityError("the singular locus is not zero-dimensional")
    u = min(univariate, key=total_degree)
    work = basis.ring
    last = work.gens[-1]
    solutions = []
    for root in _linear_roots(u):
        if work.ngens == 1:
            solutions.append((root,))
            continue
        substituted = [p for p in (g.evaluate(last, root) for g in basis.polys) if p]
        if not substituted:
            raise NonIsolatedSingularityError("the singular locus is not zero-dimensional")
        for partial_solution in _solve_zero_dimensional(substituted, substituted[0].ring):
            solutions.append(partial_solution + (root,))
    return solutions


def _chart_points(partials: list, j: int, domain) -> List[ProjectivePoint]:
    ring = partials[0].ring
    n = ring.ngens - 1
    substitutions = [(ring.gens[i], 0) for i in range(j)] + [(ring.gens[j], 1)]
    if j == n:
        values = [p.evaluate(substitutions) if p else domain.zero for p in partials]
        return [ProjectivePoint([0] * n + [1], domain)] if all(not v for v in values) else []
    restricted = [p.evaluate(substitutions) for p in partials if p]
    nonzero = [p for p in restricted if p]
    if not nonzero:
        raise NonIsolatedSingularityError(f"every point of the chart x{j} = 1 is singular")
    chart_ring = nonzero[0].ring
    try:
        affine_quotient_dimension(Ideal(nonzero, chart_ring))
    except NotZeroDimensionalError:
        raise NonIsolatedSingularityError(
            "V(f) has a positive-dimensional singular locus: J_f is not zero-dimensional"
        )
    return [ProjectivePoint([0] * j + [1] + list(solution), domain)
            for solution in _solve_zero_dimensional(nonzero, chart_ring)]


def find_singular_points(f, domain=QQ, tau_total: Optional[int] = None,
                         local_budget: int = DEFAULT_LOCAL_ORDER_BUDGET) -> Tuple[List[ProjectivePoint], int]:
    """
    Points of the Jacobian scheme with coordinates in ``domain``, chart by
    chart, and the Tjurina number of the part not resolved into such points.
    """
    if tau_total is None:
        tau_total = projective_degree(Ideal(gradient(f), f.ring))
    partials = gradient(extended(f, domain))
    points = set()
    for j in range(f.ring.ngens):
        points.update(_chart_points(partials, j, domain))
    ordered = sorted(points, key=lambda p: (p.chart, p.to_strings()))
    resolved = sum(local_tjurina(f, p, local_budget) for p in ordered)
    residual = tau_total - resolved
    if residual < 0:
        raise CrossCheckError(
            f"local Tjurina numbers add up to {resolved}, more than deg J_f = {tau_total}"
        )
    LOGGER.info(f"Found {len(ordered)} singular points over {domain}, residual degree {residual}")
    return ordered, residual


# transversal charts and totals

def _restriction_to_hyperplane(g):
    ring = g.ring
    return ring.from_dict({m: c for m, c in g.iterterms() if m[0] == 0})


def is_transversal(g) -> bool:
    """x0 = 0 avoids the singular points of V(g) and meets V(g) in a smooth hypersurface."""
    ring = g.ring
    x0 = ring.gens[0]
    partials = gradient(g)
    if not projective_is_empty(Ideal(partials + [x0], ring))[0]:
        return False
    h = _restriction_to_hyperplane(g)
    if not h:
        return False
    restricted_partials = [p for p in gradient(h)[1:] if p]
    if not restricted_partials:
        return False
    return projective_is_empty(Ideal(restricted_partials + [x0], ring))[0]


def choose_transversal_chart(f, rng: random.Random,
                             retries: int = DEFAULT_CHART_RETRIES) -> Tuple[List[List[int]], int]:
    """Identity first, then random shears x0 -> x0 + sum c_k x_k; returns (matrix, attempts)."""
    n = f.ring.ngens - 1
    low, high = SHEAR_COEFFICIENT_RANGE
    matrix = shear_matrix([0] * n)
    for attempt in range(1, retries + 1):
        if is_transversal(linear_change(f, matrix)):
            LOGGER.info(f"Transversal chart accepted after {attempt} attempt(s): {matrix[0]}")
            return matrix, attempt
        LOGGER.debug(f"chart {matrix[0]} rejected")
        matrix = shear_matrix([rng.randint(low, high) for _ in range(n)])
    raise ChartSearchError(f"no transversal hyperplane found in {retries} attempts")


def chart_germ(f, matrix: Sequence[Sequence[int]]):
    """g(y) = (f o A)(1, y)."""
    return dehomogenize(linear_change(f, matrix), 0)


def total_tjurina(f, matrix: Sequence[Sequence[int]]) -> int:
    g = chart_germ(f, matrix)
    return affine_quotient_dimension(Ideal([g] + gradient(g), g.ring))


def total_milnor(f, matrix: Sequence[Sequence[int]]) -> int:
    g = chart_germ(f, matrix)
    n = g.ring.ngens
    return affine_quotient_dimension(Ideal([g ** n] + gradient(g), g.ring))


# local numbers

def germ_at(f, point: ProjectivePoint):
    """f in the chart of the point's first nonzero coordinate, the point moved to the origin."""
    g = dehomogenize(extended(f, point.domain), point.chart)
    return translate(g, point.affine_coordinates())


def _stable_local_dimension(generators: list, ring, budget: int) -> int:
    # dim R/(I + m^k) grows with k until m^k lies in I locally
    previous = None
    for k in range(1, budget + 1):
        dimension = affine_quotient_dimension(Ideal(generators + monomial_power_ideal(ring, k), ring))
        if dimension == previous:
            return dimension
        previous = dimension
    raise NonIsolatedSingularityError(
        f"local algebra did not stabilize up to order {budget}: the singularity is not isolated"
    )


def _checked_germ(f, point: ProjectivePoint):
    if point.nvars != f.ring.ngens:
        raise PreconditionError(f"point {point} has {point.nvars} coordinates, ring has {f.ring.ngens}")
    germ = germ_at(f, point)
    zero = germ.ring.zero_monom
    partials = gradient(germ)
    if germ.get(zero) or any(p.get(zero) for p in partials):
        raise PointNotSingularError(f"{point} is not a singular point of V(f)")
    return germ, partials


@lru_cache(maxsize=1024)
def local_tjurina(f, point: ProjectivePoint, budget: int = DEFAULT_LOCAL_ORDER_BUDGET) -> int:
    germ, partials = _checked_germ(f, point)
    return _stable_local_dimension([germ] + partials, germ.ring, budget)


@lru_cache(maxsize=1024)
def local_milnor(f, point: ProjectivePoint, budget: int = DEFAULT_LOCAL_ORDER_BUDGET) -> int:
    germ, partials = _checked_germ(f, point)
    return _stable_local_dimension(partials, germ.ring, budget)


def local_numbers(f, point: ProjectivePoint, budget: int = DEFAULT_LOCAL_ORDER_BUDGET) -> Tuple[int, int]:
    """(tau_p, mu_p)."""
    return local_tjurina(f, point, budget), local_milnor(f, point, budget)


# quasi-homogeneity

def qh_at_point(M_f: GradedMatrix, point: ProjectivePoint) -> Tuple[int, Optional[Tuple[int, int]]]:
    """
    (rank, witness): rank 1 when some entry A^j_k(p) is nonzero, with the
    first such (j, k); rank 0 and no witness when M_f vanishes at p.
    """
    for j in range(M_f.ncols):
        for k in range(M_f.nrows):
            entry = M_f.entries[k][j]
            if entry and evaluate(entry, point.coordinates, point.domain):
                return 1, (j, k)
    return 0, None


def global_all_qh(f, M_f: GradedMatrix) -> Tuple[bool, Optional[int]]:
    """Whether J_f + I_f has no zero, I_f generated by the entries of M_f."""
    entries = [e for row in M_f.entries for e in row if e]
    return projective_is_empty(Ideal(gradient(f) + entries, f.ring))


def syzygy_span(f, M_f: GradedMatrix, degree: int) -> List[FreeModuleElement]:
    """Spanning set of the syzygies whose entries have the given degree."""
    ring = f.ring
    d = total_degree(f)
    elements = []
    sources = list(M_f.columns())
    if d - 1 <= degree:
        sources += koszul_syzygies(gradient(f))
    for rho in sources:
        entry_degree = rho.degree - rho.shifts[0]
        if degree >= entry_degree:
            elements.extend(rho.mul_monom(alpha) for alpha in monomials_of_degree(ring.ngens, degree - entry_degree))
    return elements


def witness_syzygy(f, M_f: GradedMatrix, data: ResolutionData, points: Sequence[ProjectivePoint],
                   rng: random.Random, trials: int = DEFAULT_WITNESS_TRIALS) -> Tuple[FreeModuleElement, int]:
    """A syzygy with entries of degree d_m that is nonzero at every point of ``points``."""
    for point in points:
        if is_singular_point(f, point) and qh_at_point(M_f, point)[0] == 0:
            raise NonQuasiHomogeneousPointError(
                f"{point} is a non-quasi-homogeneous singular point: every syzygy vanishes there"
            )
    degree = data.exponents[-1]
    span = syzygy_span(f, M_f, degree)
    low, high = WITNESS_COEFFICIENT_RANGE
    ring = f.ring
    for trial in range(1, trials + 1):
        combination = FreeModuleElement([ring.zero] * ring.ngens, span[0].shifts)
        for element in span:
            c = rng.randint(low, high)
            if c:
                combination = combination + element.scale(ring(c))
        if combination.is_zero():
            continue
        if all(any(v for v in combination.evaluate(p.coordinates, p.domain)) for p in points):
            LOGGER.info(f"Witness syzygy of degree {degree} found in trial {trial}")
            return combination, trial
    raise WitnessNotFoundError(f"no syzygy of degree {degree} nonzero at all {len(points)} points in {trials} trials")


# fixtures

class FixtureCurve(NamedTuple):
    context: RingContext
    polynomial: object
    expected: Dict[str, object]


def _plane_context(nvars: int) -> RingContext:
    return RingContext(variable_range("x", 0, nvars - 1))


def chebyshev_node_count(n: int, d: int, k) -> int:
    """Nodes of T_d(x_1) + ... + T_d(x_n) + k = 0; zero when the hypersurface is smooth."""
    k = Rational(k)
    if not k.is_integer or abs(k) > n or (n + k) % 2:
        return 0
    half = d // 2
    if d % 2:
        return comb(n, int((n + k) // 2)) * half ** n
    # a node takes a critical value +1 in exactly (n - k)/2 coordinates;
    # T_d has half - 1 critical points with value +1 and half with value -1
    plus = int((n - k) // 2)
    return comb(n, plus) * (half - 1) ** plus * half ** (n - plus)


def chebyshev_fixture(n: int, d: int, k=0) -> FixtureCurve:
    """x0-homogenization of T_d(x_1) + ... + T_d(x_n) + k."""
    if n < 2 or d < 2:
        raise PreconditionError("Chebyshev hypersurfaces need n >= 2 and d >= 2")
    context = _plane_context(n + 1)
    affine = PolyRing(context.symbols[1:], QQ, context.ring.order)
    coefficients = chebyshevt_poly(d, polys=True).all_coeffs()
    g = affine.from_dict({(0,) * n: QQ.from_sympy(Rational(k))})
    for i in range(n):
        for power, c in enumerate(reversed(coefficients)):
            if c:
                monom = tuple(power if j == i else 0 for j in range(n))
                g += affine.from_dict({monom: QQ.from_sympy(c)})
    f = homogenize(g, context.ring, 0, d)
    nodes = chebyshev_node_count(n, d, k)
    expected = {'d': d, 'n': n, 'tau': nodes, 'mu': nodes, 'global_all_qh': True}
    if d <= 3:
        # critical points of T_d are rational only for d = 2, 3
        expected.update(points=nodes, residual=0)
    return FixtureCurve(context, f, expected)


def ploski_fixture(k: int, with_tangent: bool = False) -> FixtureCurve:
    """
    Product of k conics x0^2 + c*(x0*x2 + x1^2), c = 1, -1, 2, -2, ...,
    all tangent to x0 = 0 at (0:0:1); optionally times the line x0.
    """
    if k < 1:
        raise PreconditionError("a Ploski curve needs at least one conic")
    context = _plane_context(3)
    x0, x1, x2 = context.gens
    f = x0 if with_tangent else context.ring.one
    for i in range(k):
        c = (i // 2 + 1) * (1 if i % 2 == 0 else -1)
        f *= x0 ** 2 + c * (x0 * x2 + x1 ** 2)
    d = 2 * k + (1 if with_tangent else 0)
    expected = {
        'd': d, 'n': 2, 'm': 2, 'curve_type': 'free', 'points': 1,
        'mu': (d - 1) ** 2 - d // 2,
        'tau': (d - 1) * (d - 2) + 1,
        'defect': (d - 1) ** 2 - d // 2 - (d - 1) * (d - 2) - 1,
    }
    return FixtureCurve(context, f, expected)


def quasi_homogeneous_family(a: int, b: int, n: int) -> Tuple[FixtureCurve, FreeModuleElement]:
    """x0^a x1^b + x2^d + ... + xn^d with d = a + b, and its linear syzygy (b x0, -a x1, 0, ...)."""
    if a < 2 or b < 2 or n < 2:
        raise PreconditionError("the family needs a, b >= 2 and n >= 2")
    d = a + b
    context = _plane_context(n + 1)
    gens = context.gens
    f = gens[0] ** a * gens[1] ** b
    for x in gens[2:]:
        f += x ** d
    components = [b * gens[0], -a * gens[1]] + [context.ring.zero] * (n - 1)
    syzygy = FreeModuleElement(components, [d - 1] * (n + 1))
    expected = {'d': d, 'n': n, 'points': 2, 'qh_points': 2, 'non_qh_points': 0, 'global_all_qh': True}
    return FixtureCurve(context, f, expected), syzygy
