"""
Polynomial rings, monomial orders and the elementary polynomial operations.

Polynomials are sympy ``PolyElement`` values. Every ring context stores its
polynomials in one canonical ring (coefficients in Q, grevlex); algorithms
that need another order or an extended coefficient field move copies into a
cloned ring and back.
"""
import logging
from typing import List, Optional, Sequence, Tuple

from sympy import QQ, Symbol
from sympy.polys.orderings import MonomialOrder, grevlex, lex
from sympy.polys.rings import PolyRing

from analysis_errors import FieldMismatchError, PreconditionError, SingularMatrixError
from field_arithmetic import FieldSpec, RATIONALS, format_field_element, is_extension_domain

LOGGER = logging.getLogger(__name__)


def _grevlex_key(monomial):
    return (sum(monomial), tuple(reversed([-e for e in monomial])))


class EliminationOrder(MonomialOrder):
    """Block order: grevlex on the first ``k`` variables, ties broken by grevlex on the rest."""

    alias = 'elim'
    is_global = True

    def __init__(self, k: int):
        self.k = k

    def __call__(self, monomial):
        return (_grevlex_key(monomial[:self.k]), _grevlex_key(monomial[self.k:]))

    def __repr__(self):
        return f"EliminationOrder({self.k})"

    def __str__(self):
        return f"elim({self.k})"

    def __eq__(self, other):
        return isinstance(other, EliminationOrder) and other.k == self.k

    def __hash__(self):
        return hash((self.__class__, self.k))


class WeightedOrder(MonomialOrder):
    """Weighted degree first, grevlex second. Weights must be positive."""

    alias = 'weighted'
    is_global = True

    def __init__(self, weights: Sequence[int]):
        if not weights or any(w <= 0 for w in weights):
            raise PreconditionError(f"weights must be positive integers, got {list(weights)}")
        self.weights = tuple(int(w) for w in weights)

    def __call__(self, monomial):
        return (sum(w * e for w, e in zip(self.weights, monomial)), _grevlex_key(monomial))

    def __repr__(self):
        return f"WeightedOrder({self.weights})"

    def __str__(self):
        return "weighted(" + ",".join(str(w) for w in self.weights) + ")"

    def __eq__(self, other):
        return isinstance(other, WeightedOrder) and other.weights == self.weights

    def __hash__(self):
        return hash((self.__class__, self.weights))


_NAMED_ORDERS = {
    'grevlex': grevlex,
    'lex': lex,
}


def monomial_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    try:
        return _NAMED_ORDERS[order]
    except KeyError:
        raise PreconditionError(
            f"unsupported monomial order '{order}', expected one of {sorted(_NAMED_ORDERS)}"
        )


def order_name(order) -> str:
    return str(monomial_order(order))


class RingContext:
    """Variable names plus the declared coefficient field of one analysis."""

    def __init__(self, variables: Sequence[str], field: FieldSpec = RATIONALS):
        if not variables:
            raise PreconditionError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise PreconditionError(f"duplicate variable names in {list(variables)}")
        if field.generator is not None and field.generator in variables:
            raise PreconditionError(
                f"field generator '{field.generator}' clashes with a variable name"
            )
        self.variables: Tuple[str, ...] = tuple(variables)
        self.field = field
        self.symbols = tuple(Symbol(v) for v in self.variables)
        self.ring = PolyRing(self.symbols, QQ, grevlex)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def gens(self):
        return self.ring.gens

    @property
    def domain(self):
        return self.field.domain()

    def working_ring(self, order='grevlex', extended: bool = False):
        domain = self.domain if extended else QQ
        return self.ring.clone(domain=domain, order=monomial_order(order))

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def __eq__(self, other):
        return (isinstance(other, RingContext) and self.variables == other.variables
                and self.field == other.field)

    def __hash__(self):
        return hash((self.variables, self.field.generator))

    def __repr__(self):
        return f"RingContext({list(self.variables)}, {self.field.describe()})"


def variable_range(prefix: str, start: int, stop: int) -> List[str]:
    return [f"{prefix}{i}" for i in range(start, stop + 1)]


def to_ring(f, ring):
    """Copy ``f`` into ``ring``: same variables, possibly other order or field."""
    return f.set_ring(ring)


def is_homogeneous(f) -> bool:
    degrees = {sum(m) for m in f.itermonoms()}
    return len(degrees) <= 1


def total_degree(f) -> int:
    """Degree of a nonzero polynomial; -1 for the zero polynomial."""
    if not f:
        return -1
    return max(sum(m) for m in f.itermonoms())


def partial_derivative(f, j: int):
    return f.diff(f.ring.gens[j])


def gradient(f) -> List:
    return [partial_derivative(f, j) for j in range(f.ring.ngens)]


def coerce_coordinates(coordinates: Sequence, domain) -> list:
    """Move point coordinates into ``domain``; algebraic values must come from that very field."""
    coerced = []
    for c in coordinates:
        if hasattr(c, "mod_to_DMP"):
            if not is_extension_domain(domain) or c.mod_to_DMP() != domain.mod:
                raise FieldMismatchError(
                    "point coordinate lies in an algebraic extension that is not the declared field"
                )
            coerced.append(c)
        else:
            coerced.append(domain.convert(c))
    return coerced


def evaluate(f, point: Sequence, domain=None):
    """Exact value of ``f`` at ``point``; the result lies in ``domain`` (Q by default)."""
    if len(point) != f.ring.ngens:
        raise PreconditionError(
            f"point has {len(point)} coordinates but the ring has {f.ring.ngens} variables"
        )
    if domain is None:
        domain = f.ring.domain
    coords = coerce_coordinates(point, domain)
    source = f.ring.domain
    total = domain.zero
    for monom, coeff in f.iterterms():
        value = domain.convert_from(coeff, source)
        for c, e in zip(coords, monom):
            if e:
                value = value * c ** e
        total += value
    return total


def linear_change(f, matrix: Sequence[Sequence[int]]):
    """
    Substitute x_i -> sum_j A[i][j] x_j, i.e. return f(A x). The variable
    names are kept. A must be invertible over Q.
    """
    ring = f.ring
    n = ring.ngens
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise SingularMatrixError(f"change of coordinates must be a {n}x{n} matrix")

    from sympy.polys.matrices import DomainMatrix
    dm = DomainMatrix([[QQ(int(a)) for a in row] for row in matrix], (n, n), QQ)
    if not dm.det():
        raise SingularMatrixError(f"change of coordinates {[list(r) for r in matrix]} is singular")

    images = []
    for row in matrix:
        image = ring.zero
        for j, a in enumerate(row):
            if a:
                image += ring.domain.convert(a) * ring.gens[j]
        images.append(image)
    return f.compose(list(zip(ring.gens, images)))


def invert_integer_matrix(matrix: Sequence[Sequence[int]]) -> List[List]:
    from sympy.polys.matrices import DomainMatrix
    n = len(matrix)
    dm = DomainMatrix([[QQ(int(a)) for a in row] for row in matrix], (n, n), QQ)
    if not dm.det():
        raise SingularMatrixError("matrix is singular")
    return dm.inv().to_list()


def shear_matrix(coefficients: Sequence[int]) -> List[List[int]]:
    """x0 -> x0 + sum_k c_k x_k, all other variables fixed."""
    n = len(coefficients) + 1
    matrix = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for k, c in enumerate(coefficients, start=1):
        matrix[0][k] = int(c)
    return matrix


def dehomogenize(f, j: int):
    """Set x_j = 1. The result lives in the ring without x_j."""
    return f.evaluate(f.ring.gens[j], 1)


def homogenize(g, ring, j: int = 0, degree: Optional[int] = None):
    """
    Inverse of ``dehomogenize``: insert x_j (a generator of ``ring``) so that
    every term of g has total degree ``degree`` (default: deg g).
    """
    if degree is None:
        degree = total_degree(g)
    if degree < total_degree(g):
        raise PreconditionError(f"cannot homogenize a polynomial of degree {total_degree(g)} to {degree}")
    terms = {}
    for monom, coeff in g.iterterms():
        full = monom[:j] + (degree - sum(monom),) + monom[j:]
        terms[full] = ring.domain.convert_from(coeff, g.ring.domain)
    return ring.from_dict(terms)


def translate(g, shifts: Sequence):
    """g(y + c): move the point c of the affine chart to the origin."""
    ring = g.ring
    images = [y + ring.domain.convert(c) if c else y for y, c in zip(ring.gens, shifts)]
    return g.compose(list(zip(ring.gens, images)))


def monomials_of_degree(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    result = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            result.append((first,) + rest)
    return result


def monomial_power_ideal(ring, degree: int) -> list:
    """Generators of the power m^degree of the maximal ideal at the origin."""
    return [ring.from_dict({m: ring.domain.one}) for m in monomials_of_degree(ring.ngens, degree)]


def _format_coefficient(c, domain) -> str:
    text = format_field_element(c, domain)
    if is_extension_domain(domain) and (" + " in text or " - " in text[1:]):
        return f"({text})"
    return text


def format_polynomial(f, variables: Optional[Sequence[str]] = None) -> str:
    """Canonical text: descending grevlex, '^' powers, '*' products."""
    if not f:
        return "0"
    domain = f.ring.domain
    names = list(variables) if variables else [str(s) for s in f.ring.symbols]
    pieces = []
    for monom, coeff in sorted(f.iterterms(), key=lambda t: _grevlex_key(t[0]), reverse=True):
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        monomial = "*".join(factors)
        if not monomial:
            pieces.append(_format_coefficient(coeff, domain))
        elif coeff == domain.one:
            pieces.append(monomial)
        elif coeff == -domain.one:
            pieces.append(f"-{monomial}")
        else:
            pieces.append(f"{_format_coefficient(coeff, domain)}*{monomial}")
    text = pieces[0]
    for piece in pieces[1:]:
        text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
    return text
