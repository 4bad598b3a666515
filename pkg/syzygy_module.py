"""
Syzygies of the partial derivatives: Schreyer generators, graded
minimalization to the first syzygy matrix M_f, second syzygies P_f and the
lift N of the Koszul relations with M_f * N = K.

All linear algebra is exact and runs through sympy's ``DomainMatrix``.
"""
import logging
from functools import reduce
from math import gcd
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from analysis_errors import (
    LiftError,
    PreconditionError,
    RankDefectError,
    ResolutionIdentityError,
)
from groebner_engine import Ideal
from polynomial_ring import (
    evaluate,
    format_polynomial,
    is_homogeneous,
    monomials_of_degree,
    partial_derivative,
    to_ring,
    total_degree,
)
from records_pydantics.singularity_records import ResolutionData

LOGGER = logging.getLogger(__name__)


class FreeModuleElement:
    """Vector of polynomials in the free module sum_i R(-shift_i)."""

    def __init__(self, components: Sequence, shifts: Sequence[int]):
        if len(components) != len(shifts):
            raise PreconditionError("component and shift counts differ")
        self.components = tuple(components)
        self.shifts = tuple(shifts)

    @property
    def ring(self):
        return self.components[0].ring

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    @property
    def degree(self) -> Optional[int]:
        for c, a in zip(self.components, self.shifts):
            if c:
                return total_degree(c) + a
        return None

    def is_homogeneous(self) -> bool:
        degrees = set()
        for c, a in zip(self.components, self.shifts):
            if c:
                if not is_homogeneous(c):
                    return False
                degrees.add(total_degree(c) + a)
        return len(degrees) <= 1

    def __add__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        return FreeModuleElement([a + b for a, b in zip(self.components, other.components)], self.shifts)

    def __sub__(self, other: "FreeModuleElement") -> "FreeModuleElement":
        return FreeModuleElement([a - b for a, b in zip(self.components, other.components)], self.shifts)

    def __neg__(self):
        return FreeModuleElement([-a for a in self.components], self.shifts)

    def __eq__(self, other):
        return (isinstance(other, FreeModuleElement) and self.shifts == other.shifts
                and self.components == other.components)

    def __hash__(self):
        return hash((self.components, self.shifts))

    def scale(self, p) -> "FreeModuleElement":
        return FreeModuleElement([p * c for c in self.components], self.shifts)

    def mul_monom(self, monomial) -> "FreeModuleElement":
        return FreeModuleElement([c.mul_monom(monomial) for c in self.components], self.shifts)

    def dot(self, values: Sequence):
        """sum_i component_i * values_i."""
        total = self.components[0].ring.zero
        for c, v in zip(self.components, values):
            if c:
                total += c * to_ring(v, c.ring)
        return total

    def evaluate(self, point: Sequence, domain=None) -> list:
        return [evaluate(c, point, domain) for c in self.components]

    def coordinates(self) -> Dict[Tuple[int, tuple], object]:
        return {(i, m): coeff for i, c in enumerate(self.components) for m, coeff in c.iterterms()}

    def to_ring(self, ring) -> "FreeModuleElement":
        return FreeModuleElement([to_ring(c, ring) for c in self.components], self.shifts)

    def to_strings(self) -> List[str]:
        return [format_polynomial(c) for c in self.components]

    def __repr__(self):
        return f"FreeModuleElement({self.to_strings()}, degree={self.degree})"


class GradedMatrix:
    """
    Matrix of homogeneous polynomials; a nonzero entry (i, j) has degree
    col_shifts[j] - row_shifts[i].
    """

    def __init__(self, entries: Sequence[Sequence], row_shifts: Sequence[int],
                 col_shifts: Sequence[int], ring=None):
        self.entries = [list(row) for row in entries]
        self.row_shifts = list(row_shifts)
        self.col_shifts = list(col_shifts)
        if len(self.entries) != len(self.row_shifts):
            raise PreconditionError("row count differs from the number of row shifts")
        if any(len(row) != len(self.col_shifts) for row in self.entries):
            raise PreconditionError("column count differs from the number of column shifts")
        if ring is None:
            if not self.entries or not self.col_shifts:
                raise PreconditionError("an empty graded matrix needs an explicit ring")
            ring = self.entries[0][0].ring
        self.ring = ring

    @classmethod
    def from_columns(cls, columns: Sequence[FreeModuleElement], row_shifts: Sequence[int], ring) -> "GradedMatrix":
        entries = [[col.components[i] for col in columns] for i in range(len(row_shifts))]
        return cls(entries, row_shifts, [col.degree for col in columns], ring)

    @property
    def nrows(self) -> int:
        return len(self.row_shifts)

    @property
    def ncols(self) -> int:
        return len(self.col_shifts)

    def column(self, j: int) -> FreeModuleElement:
        return FreeModuleElement([row[j] for row in self.entries], self.row_shifts)

    def columns(self) -> List[FreeModuleElement]:
        return [self.column(j) for j in range(self.ncols)]

    def entry_degree(self, i: int, j: int) -> int:
        return self.col_shifts[j] - self.row_shifts[i]

    def is_graded(self) -> bool:
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                if entry and (not is_homogeneous(entry) or total_degree(entry) != self.entry_degree(i, j)):
                    return False
        return True

    def is_zero(self) -> bool:
        return not any(entry for row in self.entries for entry in row)

    def transpose(self) -> "GradedMatrix":
        entries = [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return GradedMatrix(entries, [-s for s in self.col_shifts], [-s for s in self.row_shifts], self.ring)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.ncols != other.nrows:
            raise PreconditionError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        ring = self.ring
        entries = []
        for row in self.entries:
            product_row = []
            for j in range(other.ncols):
                total = ring.zero
                for k, a in enumerate(row):
                    b = other.entries[k][j]
                    if a and b:
                        total += a * to_ring(b, ring)
                product_row.append(total)
            entries.append(product_row)
        return GradedMatrix(entries, self.row_shifts, other.col_shifts, ring)

    def evaluate(self, point: Sequence, domain=None) -> List[list]:
        return [[evaluate(entry, point, domain) for entry in row] for row in self.entries]

    def to_strings(self) -> List[List[str]]:
        return [[format_polynomial(entry) for entry in row] for row in self.entries]

    def __repr__(self):
        return f"GradedMatrix({self.nrows}x{self.ncols}, rows {self.row_shifts}, columns {self.col_shifts})"


# exact linear algebra

def _matrix(columns: Sequence[Dict[Hashable, object]], domain) -> Tuple[Optional[DomainMatrix], List]:
    keys = sorted(set().union(*[c.keys() for c in columns])) if columns else []
    if not keys or not columns:
        return None, keys
    rows = [[col.get(k, domain.zero) for col in columns] for k in keys]
    return DomainMatrix(rows, (len(keys), len(columns)), domain), keys


def pivot_columns(columns: Sequence[Dict[Hashable, object]], domain) -> List[int]:
    """Indices of a maximal linearly independent subset, leftmost first."""
    matrix, _ = _matrix(columns, domain)
    if matrix is None:
        return []
    _, pivots = matrix.rref()
    return list(pivots)


def nullspace(columns: Sequence[Dict[Hashable, object]], domain) -> List[list]:
    """Basis of {c : sum_j c_j * columns_j = 0}, one free variable per vector."""
    matrix, _ = _matrix(columns, domain)
    n = len(columns)
    if matrix is None:
        return [[domain.one if i == j else domain.zero for i in range(n)] for j in range(n)]
    reduced, pivots = matrix.rref()
    rows = reduced.to_list()
    basis = []
    for free in (j for j in range(n) if j not in pivots):
        vector = [domain.zero] * n
        vector[free] = domain.one
        for k, p in enumerate(pivots):
            vector[p] = -domain.quo(rows[k][free], rows[k][p])
        basis.append(vector)
    return basis


def solve(columns: Sequence[Dict[Hashable, object]], target: Dict[Hashable, object], domain) -> Optional[list]:
    """One solution c of sum_j c_j * columns_j = target, or None."""
    augmented = list(columns) + [target]
    matrix, _ = _matrix(augmented, domain)
    n = len(columns)
    if matrix is None:
        return [domain.zero] * n
    reduced, pivots = matrix.rref()
    if n in pivots:
        return None
    rows = reduced.to_list()
    solution = [domain.zero] * n
    for k, p in enumerate(pivots):
        solution[p] = domain.quo(rows[k][n], rows[k][p])
    return solution


def _primitive(element: FreeModuleElement) -> FreeModuleElement:
    """Scale to integer coefficients without common factor, leading coefficient positive."""
    coefficients = [c for comp in element.components for _, c in sorted(comp.iterterms(), reverse=True)]
    if not coefficients:
        return element
    domain = element.ring.domain
    if not domain.is_QQ:
        return element
    denominators = reduce(lambda a, b: a * b // gcd(a, b), (int(c.denominator) for c in coefficients), 1)
    numerators = reduce(gcd, (abs(int(c.numerator * denominators // c.denominator)) for c in coefficients), 0)
    factor = domain.convert(denominators) / domain.convert(numerators)
    if coefficients[0] < 0:
        factor = -factor
    return FreeModuleElement([c.mul_ground(factor) for c in element.components], element.shifts)


def _sort_key(element: FreeModuleElement):
    order = element.ring.order
    return (element.degree,
            tuple((i, order(c.LM)) for i, c in enumerate(element.components) if c)[:1],
            tuple(element.to_strings()))


# syzygy computations

def _check_generators(gens: Sequence):
    if not gens:
        raise PreconditionError("no generators given")
    if any(not g for g in gens):
        raise PreconditionError("generators must be nonzero")
    if any(not is_homogeneous(g) for g in gens):
        raise PreconditionError("generators must be homogeneous")


def koszul_syzygies(gens: Sequence) -> List[FreeModuleElement]:
    """g_j e_i - g_i e_j for i < j."""
    ring = gens[0].ring
    shifts = [total_degree(g) for g in gens]
    result = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            components = [ring.zero] * len(gens)
            components[i] = gens[j]
            components[j] = -gens[i]
            result.append(FreeModuleElement(components, shifts))
    return result


def syzygy_generators(gens: Sequence) -> List[FreeModuleElement]:
    """
    Homogeneous generators of the syzygy module of ``gens``: the S-pair
    relations of a Groebner basis G, written back in the original generators
    through the cofactor matrix, plus one relation per generator from its
    standard representation over G.
    """
    _check_generators(gens)
    ring = gens[0].ring
    shifts = [total_degree(g) for g in gens]
    basis = Ideal(list(gens), ring).basis('grevlex', cofactors=True)
    work = basis.ring
    G, T = basis.polys, basis.cofactors
    r = len(gens)

    def through_cofactors(sigma):
        rho = [work.zero] * r
        for s, row in zip(sigma, T):
            if s:
                rho = [a + s * t for a, t in zip(rho, row)]
        return rho

    result = []
    for k in range(len(G)):
        for l in range(k + 1, len(G)):
            L = work.monomial_lcm(G[k].LM, G[l].LM)
            mk, ml = work.monomial_div(L, G[k].LM), work.monomial_div(L, G[l].LM)
            s = G[k].mul_monom(mk) - G[l].mul_monom(ml)
            sigma = [work.zero] * len(G)
            sigma[k] += work.from_dict({mk: work.domain.one})
            sigma[l] -= work.from_dict({ml: work.domain.one})
            if s:
                quotients, remainder = s.div(G)
                if remainder:
                    raise RankDefectError("S-polynomial of a Groebner basis did not reduce to zero")
                sigma = [a - q for a, q in zip(sigma, quotients)]
            rho = through_cofactors(sigma)
            if any(rho):
                result.append(FreeModuleElement([to_ring(c, ring) for c in rho], shifts))

    for i, f in enumerate(gens):
        quotients, remainder = to_ring(f, work).div(G)
        if remainder:
            raise RankDefectError("generator does not reduce to zero modulo its own Groebner basis")
        rho = [-c for c in through_cofactors(quotients)]
        rho[i] += work.one
        if any(rho):
            result.append(FreeModuleElement([to_ring(c, ring) for c in rho], shifts))

    LOGGER.debug(f"Schreyer construction: {len(result)} syzygies from a basis of {len(G)} elements")
    return result


def _multiples_in_degree(generators: Sequence[FreeModuleElement], degree: int, nvars: int) -> List[FreeModuleElement]:
    multiples = []
    for b in generators:
        gap = degree - b.degree
        if gap >= 0:
            multiples.extend(b.mul_monom(alpha) for alpha in monomials_of_degree(nvars, gap))
    return multiples


def minimal_generators(elements: Sequence[FreeModuleElement]) -> List[FreeModuleElement]:
    """
    Minimal homogeneous generating subset of the submodule spanned by
    ``elements``, by degree-ascending elimination on coefficient vectors.
    """
    candidates = [e for e in elements if not e.is_zero()]
    if any(not e.is_homogeneous() for e in candidates):
        raise PreconditionError("minimalization needs homogeneous module elements")
    if not candidates:
        return []
    ring = candidates[0].ring
    domain = ring.domain
    chosen: List[FreeModuleElement] = []
    for degree in sorted({e.degree for e in candidates}):
        batch = sorted((e for e in candidates if e.degree == degree), key=_sort_key)
        span = _multiples_in_degree(chosen, degree, ring.ngens)
        columns = [v.coordinates() for v in span] + [e.coordinates() for e in batch]
        pivots = set(pivot_columns(columns, domain))
        for k, e in enumerate(batch):
            if len(span) + k in pivots:
                chosen.append(e)
    return sorted((_primitive(e) for e in chosen), key=_sort_key)


def minimalize(syzygies: Sequence[FreeModuleElement]) -> Tuple[GradedMatrix, ResolutionData]:
    """M_f from any generating set of the syzygies of the n+1 partials of f."""
    if not syzygies:
        raise PreconditionError("minimalization needs at least one syzygy")
    columns = minimal_generators(syzygies)
    shifts = syzygies[0].shifts
    if len(set(shifts)) != 1:
        raise PreconditionError("expected syzygies of generators of one common degree")
    d = shifts[0] + 1
    ring = syzygies[0].ring
    matrix = GradedMatrix.from_columns(columns, shifts, ring)
    exponents = [c.degree - shifts[0] for c in columns]
    LOGGER.info(f"Minimal syzygies: m = {len(columns)}, exponents {exponents}")
    return matrix, ResolutionData(d=d, m=len(columns), exponents=exponents)


def minimality_certificate(matrix: GradedMatrix) -> List[bool]:
    """Per column: True when it is not an R-combination of the other columns."""
    columns = matrix.columns()
    nvars = matrix.ring.ngens
    domain = matrix.ring.domain
    certificate = []
    for j, column in enumerate(columns):
        others = columns[:j] + columns[j + 1:]
        span = _multiples_in_degree(others, column.degree, nvars)
        coefficients = solve([v.coordinates() for v in span], column.coordinates(), domain)
        certificate.append(coefficients is None)
    return certificate


def first_syzygy_matrix(f) -> Tuple[GradedMatrix, ResolutionData]:
    """M_f of a homogeneous f; a variable missing from f contributes a degree-0 column."""
    ring = f.ring
    partials = [partial_derivative(f, j) for j in range(ring.ngens)]
    present = [j for j, p in enumerate(partials) if p]
    if not present:
        raise PreconditionError("f is constant")
    shifts = [total_degree(f) - 1] * ring.ngens
    syzygies = []
    for rho in syzygy_generators([partials[j] for j in present]):
        components = [ring.zero] * ring.ngens
        for j, c in zip(present, rho.components):
            components[j] = c
        syzygies.append(FreeModuleElement(components, shifts))
    for j, p in enumerate(partials):
        if not p:
            components = [ring.zero] * ring.ngens
            components[j] = ring.one
            syzygies.append(FreeModuleElement(components, shifts))
    return minimalize(syzygies)


def second_syzygies(M_f: GradedMatrix, data: ResolutionData) -> Tuple[GradedMatrix, ResolutionData]:
    """
    P_f for a plane curve: the kernel of M_f, generated degree by degree
    until m - 2 generators are found.
    """
    if M_f.nrows != 3:
        raise PreconditionError("second syzygies are computed for plane curves only")
    ring = M_f.ring
    domain = ring.domain
    m, d = data.m, data.d
    column_shifts = M_f.col_shifts
    if m < 3:
        empty = GradedMatrix([[] for _ in range(m)], column_shifts, [], ring)
        completed = data.model_copy(update={'complete': True})
        _raise_on_failures(check_resolution_identities(completed))
        return empty, completed

    bound = (m - 3) * (d - 1) + sum(data.exponents)
    found: List[FreeModuleElement] = []
    degree = min(column_shifts)
    while len(found) < m - 2:
        if degree > bound:
            raise RankDefectError(
                f"found {len(found)} of {m - 2} second syzygies up to degree {bound}"
            )
        unknowns = []
        for j, shift in enumerate(column_shifts):
            if degree >= shift:
                unknowns.extend((j, alpha) for alpha in monomials_of_degree(ring.ngens, degree - shift))
        if unknowns:
            columns = []
            for j, alpha in unknowns:
                image = {}
                for i in range(3):
                    entry = M_f.entries[i][j]
                    for monom, coeff in entry.mul_monom(alpha).iterterms():
                        image[(i, monom)] = coeff
                columns.append(image)
            kernel = []
            for vector in nullspace(columns, domain):
                components = [ring.zero] * m
                for c, (j, alpha) in zip(vector, unknowns):
                    if c:
                        components[j] += ring.from_dict({alpha: c})
                kernel.append(FreeModuleElement(components, column_shifts))
            span = _multiples_in_degree(found, degree, ring.ngens)
            pivots = set(pivot_columns([v.coordinates() for v in span + kernel], domain))
            for k, element in enumerate(kernel):
                if len(span) + k in pivots and len(found) < m - 2:
                    found.append(_primitive(element))
        degree += 1

    P_f = GradedMatrix.from_columns(found, column_shifts, ring)
    if not (M_f @ P_f).is_zero():
        raise RankDefectError("M_f * P_f is not zero")
    e = [c.degree for c in found]
    epsilons = [e_j - d - data.exponents[j + 2] + 1 for j, e_j in enumerate(e)]
    completed = data.model_copy(update={'second_degrees': e, 'epsilons': epsilons, 'complete': True})
    _raise_on_failures(check_resolution_identities(completed))
    LOGGER.info(f"Second syzygies: e = {e}, epsilons {epsilons}")
    return P_f, completed


def _raise_on_failures(failures: List[str]):
    if failures:
        raise ResolutionIdentityError("; ".join(failures))


def jacobian_degree_from_resolution(data: ResolutionData) -> int:
    """deg J_f of a plane curve from d, the exponents and the second syzygy degrees."""
    d, ds, e = data.d, data.exponents, data.second_degrees
    value = (d - 1) ** 2
    value -= sum(ds[i] * ds[j] for i in range(len(ds)) for j in range(i + 1, len(ds)))
    gaps = [d - 1 - e_j for e_j in e]
    value += sum(gaps[i] * gaps[j] for i in range(len(gaps)) for j in range(i + 1, len(gaps)))
    value += (1 - d) * sum(gaps)
    return value


def check_resolution_identities(data: ResolutionData, tau: Optional[int] = None) -> List[str]:
    """Failed degree identities of a plane-curve resolution; empty when all hold."""
    failures = []
    d, ds, e, eps = data.d, data.exponents, data.second_degrees, data.epsilons
    if data.m >= 2 and ds[0] + ds[1] != d - 1 + sum(eps):
        failures.append(f"d_1 + d_2 = {ds[0] + ds[1]} but d - 1 + sum(epsilon) = {d - 1 + sum(eps)}")
    bad = [x for x in eps if x < 1]
    if bad:
        failures.append(f"epsilons {eps} must all be at least 1")
    if d - 1 - sum(ds) != sum(d - 1 - e_j for e_j in e):
        failures.append(
            f"degree bookkeeping: d - 1 - sum(d_i) = {d - 1 - sum(ds)} but "
            f"sum(d - 1 - e_j) = {sum(d - 1 - e_j for e_j in e)}"
        )
    if tau is not None and jacobian_degree_from_resolution(data) != tau:
        failures.append(
            f"deg J_f from the resolution is {jacobian_degree_from_resolution(data)}, expected {tau}"
        )
    return failures


def koszul_matrix(partials: Sequence) -> GradedMatrix:
    """The skew-symmetric 3x3 matrix whose columns are the Koszul relations of the partials."""
    if len(partials) != 3:
        raise PreconditionError("the Koszul matrix is defined for three partials")
    p0, p1, p2 = partials
    zero = p0.ring.zero
    entries = [
        [zero, p2, -p1],
        [-p2, zero, p0],
        [p1, -p0, zero],
    ]
    shift = max(total_degree(p) for p in partials)
    return GradedMatrix(entries, [shift] * 3, [2 * shift] * 3, p0.ring)


def lift_koszul(M_f: GradedMatrix, partials: Sequence) -> GradedMatrix:
    """N with M_f * N = K, one homogeneous linear solve per Koszul column."""
    K = koszul_matrix(partials)
    ring = M_f.ring
    domain = ring.domain
    columns = []
    for c in range(3):
        target_degree = K.col_shifts[c]
        unknowns = []
        for j, shift in enumerate(M_f.col_shifts):
            if target_degree >= shift:
                unknowns.extend((j, alpha) for alpha in monomials_of_degree(ring.ngens, target_degree - shift))
        images = []
        for j, alpha in unknowns:
            images.append(M_f.column(j).mul_monom(alpha).coordinates())
        solution = solve(images, K.column(c).coordinates(), domain)
        if solution is None:
            raise LiftError(f"Koszul relation {c} is not in the span of the columns of M_f")
        components = [ring.zero] * M_f.ncols
        for value, (j, alpha) in zip(solution, unknowns):
            if value:
                components[j] += ring.from_dict({alpha: value})
        columns.append(FreeModuleElement(components, M_f.col_shifts))
    N = GradedMatrix([[col.components[j] for col in columns] for j in range(M_f.ncols)],
                     M_f.col_shifts, K.col_shifts, ring)
    product = M_f @ N
    if any(a != b for row_a, row_b in zip(product.entries, K.entries) for a, b in zip(row_a, row_b)):
        raise LiftError("M_f * N differs from the Koszul matrix")
    return N


def derivation(rho: FreeModuleElement) -> Callable:
    """D_rho = sum_i rho_i * d/dx_i as a function on polynomials."""
    def apply(h):
        total = h.ring.zero
        for i, a in enumerate(rho.components):
            if a:
                total += to_ring(a, h.ring) * partial_derivative(h, i)
        return total
    return apply
