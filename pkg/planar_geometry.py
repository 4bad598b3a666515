"""
Bigraded constructions for a reduced plane curve C = V(f) in P^2 x P^2:
the equations y * M_f of Z_f, the Hilbert-Burch matrix S = (P_f | N y),
the classes of S_f and Z_f, and the 2x2 minors of the Koszul hull.

Forms live in one ring with the x variables first and y0..yn after them.
"""
import logging
import random
from math import comb
from typing import List, Optional, Sequence, Tuple

from sympy import Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyRing

from analysis_errors import PreconditionError, ProportionalityError, ResolutionIdentityError
from constants import DEFAULT_GRAPH_SAMPLES, SAMPLE_COORDINATE_RANGE
from polynomial_ring import evaluate, format_polynomial, gradient, total_degree
from records_pydantics.singularity_records import BidegreeClass, ClassSummary, ResolutionData
from syzygy_module import GradedMatrix

LOGGER = logging.getLogger(__name__)


class BigradedRing:
    """x0..xn of the curve's ring followed by y0..yn."""

    def __init__(self, ring, prefix: str = "y"):
        names = {str(s) for s in ring.symbols}
        while any(f"{prefix}{i}" in names for i in range(ring.ngens)):
            prefix = prefix + "_"
        self.nx = ring.ngens
        self.source = ring
        y_symbols = tuple(Symbol(f"{prefix}{i}") for i in range(ring.ngens))
        self.ring = PolyRing(tuple(ring.symbols) + y_symbols, ring.domain, ring.order)

    @property
    def x(self):
        return self.ring.gens[:self.nx]

    @property
    def y(self):
        return self.ring.gens[self.nx:]

    def embed(self, p):
        """A polynomial in the x variables only."""
        pad = (0,) * self.nx
        return self.ring.from_dict({m + pad: c for m, c in p.iterterms()})

    def bidegree_of(self, monomial) -> Tuple[int, int]:
        return sum(monomial[:self.nx]), sum(monomial[self.nx:])


class BigradedForm:
    def __init__(self, polynomial, bidegree: Tuple[int, int], bigraded: BigradedRing):
        for monom in polynomial.itermonoms():
            if bigraded.bidegree_of(monom) != tuple(bidegree):
                raise PreconditionError(
                    f"term of bidegree {bigraded.bidegree_of(monom)} in a form declared of bidegree {bidegree}"
                )
        self.polynomial = polynomial
        self.bidegree = tuple(bidegree)
        self.bigraded = bigraded

    def is_zero(self) -> bool:
        return not self.polynomial

    def evaluate(self, x_point: Sequence, y_point: Sequence, domain=None):
        return evaluate(self.polynomial, list(x_point) + list(y_point), domain)

    def on_graph(self, f):
        """The form with y replaced by the gradient of f."""
        bigraded = self.bigraded
        images = [bigraded.embed(p) for p in gradient(f)]
        return self.polynomial.compose(list(zip(bigraded.y, images)))

    def __str__(self):
        return format_polynomial(self.polynomial)

    def __repr__(self):
        return f"BigradedForm({self}, bidegree={self.bidegree})"


def _require_plane(M_f: GradedMatrix):
    if M_f.nrows != 3:
        raise PreconditionError("planar constructions need a plane curve (n = 2)")


def zf_generators(M_f: GradedMatrix, bigraded: BigradedRing) -> List[BigradedForm]:
    """y0*A^j_0 + y1*A^j_1 + y2*A^j_2 for each column j of M_f."""
    _require_plane(M_f)
    forms = []
    for j in range(M_f.ncols):
        form = bigraded.ring.zero
        for y, entry in zip(bigraded.y, (M_f.entries[i][j] for i in range(3))):
            if entry:
                form += y * bigraded.embed(entry)
        forms.append(BigradedForm(form, (M_f.entry_degree(0, j), 1), bigraded))
    return forms


class HilbertBurchResult:
    def __init__(self, S: GradedMatrix, constant, column_classes: List[Tuple[int, int]],
                 predicted_classes: List[Tuple[int, int]]):
        self.S = S
        self.constant = constant
        self.column_classes = column_classes
        self.predicted_classes = predicted_classes


def _signed_maximal_minors(S: GradedMatrix) -> list:
    ring = S.ring
    domain = ring.to_domain()
    minors = []
    for i in range(S.nrows):
        rows = [row for k, row in enumerate(S.entries) if k != i]
        size = len(rows)
        if size == 0:
            minors.append(ring.one)
            continue
        determinant = DomainMatrix([list(r) for r in rows], (size, size), domain).det()
        minors.append(determinant if i % 2 == 0 else -determinant)
    return minors


def proportionality_constant(minors: list, forms: List[BigradedForm]):
    """c with minors[i] = c * forms[i] for all i; c is nonzero."""
    constant = None
    for minor, form in zip(minors, forms):
        if not minor and form.is_zero():
            continue
        if not minor or form.is_zero():
            raise ProportionalityError("a maximal minor of S and the matching Z_f equation do not vanish together")
        ratio = minor.LC / form.polynomial.LC
        if constant is None:
            constant = ratio
        if minor != form.polynomial.mul_ground(constant):
            raise ProportionalityError("maximal minors of S are not proportional to the Z_f equations")
    if constant is None:
        raise ProportionalityError("all maximal minors of S vanish")
    return constant


def column_classes(S: GradedMatrix, data: ResolutionData, bigraded: BigradedRing) -> List[Tuple[int, int]]:
    """B_k = bidegree(S[j][k]) + D_j with D_j = d_j*h1 + h2, read off a nonzero entry."""
    classes = []
    for k in range(S.ncols):
        found = None
        for j in range(S.nrows):
            entry = S.entries[j][k]
            if entry:
                a, b = bigraded.bidegree_of(entry.LM)
                found = (a + data.exponents[j], b + 1)
                break
        if found is None:
            raise ProportionalityError(f"column {k} of S is zero")
        classes.append(found)
    return classes


def predicted_column_classes(data: ResolutionData) -> List[Tuple[int, int]]:
    return [(1 + e - data.d, 1) for e in data.second_degrees] + [(data.d - 1, 2)]


def hilbert_burch(P_f: GradedMatrix, N: GradedMatrix, M_f: GradedMatrix, data: ResolutionData,
                  bigraded: BigradedRing) -> HilbertBurchResult:
    """
    S = (P_f | N y) with the checks (y M_f) S = 0 and signed maximal minors
    of S proportional to the entries of y M_f.
    """
    _require_plane(M_f)
    m = M_f.ncols
    ring = bigraded.ring
    entries = []
    for j in range(m):
        row = [bigraded.embed(P_f.entries[j][k]) for k in range(P_f.ncols)]
        last = ring.zero
        for c, y in enumerate(bigraded.y):
            if N.entries[j][c]:
                last += bigraded.embed(N.entries[j][c]) * y
        entries.append(row + [last])
    # total-degree shifts: D_j and B_k summed over their bidegree
    row_shifts = [d_j + 1 for d_j in data.exponents]
    col_shifts = [a + b for a, b in predicted_column_classes(data)]
    S = GradedMatrix(entries, row_shifts, col_shifts, ring)

    forms = zf_generators(M_f, bigraded)
    for k in range(S.ncols):
        total = ring.zero
        for j, form in enumerate(forms):
            if S.entries[j][k]:
                total += form.polynomial * S.entries[j][k]
        if total:
            raise ResolutionIdentityError(f"(y M_f) S is not zero in column {k}")

    constant = proportionality_constant(_signed_maximal_minors(S), forms)
    computed = column_classes(S, data, bigraded)
    predicted = predicted_column_classes(data)
    if computed != predicted:
        raise ResolutionIdentityError(f"column classes of S are {computed}, expected {predicted}")
    LOGGER.info(f"Hilbert-Burch matrix {S.nrows}x{S.ncols} verified, minor constant {constant}")
    return HilbertBurchResult(S, constant, computed, predicted)


def classes(d: int, mu: int, tau: int) -> ClassSummary:
    """Classes of S_f and Z_f in P^2 x P^2, deg of the polar map, and mu - tau."""
    if d < 2 or tau < 0 or mu < tau:
        raise PreconditionError(f"classes need d >= 2 and mu >= tau >= 0, got d={d}, mu={mu}, tau={tau}")
    polar_degree = (d - 1) ** 2 - mu
    return ClassSummary(
        sf_class=BidegreeClass(alpha=polar_degree, beta=d - 1, gamma=1),
        zf_class=BidegreeClass(alpha=(d - 1) ** 2 - tau, beta=d - 1, gamma=1),
        polar_degree=polar_degree,
        defect=mu - tau,
    )


def class_coefficient_identities(d: int, exponents: Sequence[int], e: Sequence[int], tau: int) -> List[str]:
    """The alpha, beta, gamma relations between the class of Z_f and the resolution; failures only."""
    m = len(exponents)
    b = [1 + e_j - d for e_j in e]
    pairs_d = sum(exponents[i] * exponents[j] for i in range(m) for j in range(i + 1, m))
    pairs_b = sum(b[i] * b[j] for i in range(len(b)) for j in range(i + 1, len(b)))
    alpha, beta, gamma = (d - 1) ** 2 - tau, d - 1, 1
    failures = []
    if alpha + (d - 1) * sum(b) + pairs_b != pairs_d:
        failures.append(f"alpha identity: {alpha + (d - 1) * sum(b) + pairs_b} != {pairs_d}")
    if beta + (m - 1) * sum(b) + (m - 2) * (d - 1) != (m - 1) * sum(exponents):
        failures.append(
            f"beta identity: {beta + (m - 1) * sum(b) + (m - 2) * (d - 1)} != {(m - 1) * sum(exponents)}"
        )
    if gamma + comb(m - 2, 2) + 2 * (m - 2) != comb(m, 2):
        failures.append(f"gamma identity fails for m = {m}")
    return failures


def koszul_hull_generators(f, bigraded: BigradedRing) -> List[BigradedForm]:
    """y_i * d_j f - y_j * d_i f for i < j."""
    partials = [bigraded.embed(p) for p in gradient(f)]
    y = bigraded.y
    d = total_degree(f)
    forms = []
    for i in range(len(partials)):
        for j in range(i + 1, len(partials)):
            minor = y[i] * partials[j] - y[j] * partials[i]
            forms.append(BigradedForm(minor, (d - 1, 1), bigraded))
    return forms


def graph_sample_points(f, count: int = DEFAULT_GRAPH_SAMPLES, rng: Optional[random.Random] = None) -> List[Tuple[list, list]]:
    """Pairs (p, grad f(p)) for random integer p off the singular locus."""
    rng = rng or random.Random(0)
    low, high = SAMPLE_COORDINATE_RANGE
    domain = f.ring.domain
    partials = gradient(f)
    samples = []
    attempts = 0
    while len(samples) < count:
        attempts += 1
        if attempts > 50 * count:
            raise PreconditionError(f"found only {len(samples)} graph points in {attempts - 1} attempts")
        p = [domain.convert(rng.randint(low, high)) for _ in range(f.ring.ngens)]
        if not any(p):
            continue
        q = [evaluate(partial, p) for partial in partials]
        if any(q):
            samples.append((p, q))
    return samples
