"""
Groebner bases (Buchberger with sugar selection and Gebauer-Moeller pair
elimination) and the ideal-theoretic queries built on them: normal forms,
saturation, elimination, intersections, quotient dimensions and Hilbert
functions of homogeneous ideals.

Engine limits, telemetry counters and the optional on-disk basis cache are
carried in context variables so that one analysis can set them once for
every ideal it creates.
"""
import logging
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Dict, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, Field
from sympy import Symbol
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyRing

from analysis_errors import BudgetExceededError, NotZeroDimensionalError, PreconditionError
from constants import DEFAULT_BUDGET_DEGREE, DEFAULT_BUDGET_PAIRS
from polynomial_ring import (
    EliminationOrder,
    is_homogeneous,
    monomial_order,
    order_name,
    to_ring,
    total_degree,
)

LOGGER = logging.getLogger(__name__)

engine_limits_context: ContextVar[Dict[str, int]] = ContextVar(
    'engine_limits',
    default={'budget_pairs': DEFAULT_BUDGET_PAIRS, 'budget_degree': DEFAULT_BUDGET_DEGREE},
)
engine_counters_context: ContextVar[Optional[Dict[str, int]]] = ContextVar('engine_counters', default=None)
basis_cache_context: ContextVar[Optional[object]] = ContextVar('basis_cache', default=None)


@contextmanager
def engine_limits(budget_pairs: Optional[int] = None, budget_degree: Optional[int] = None):
    limits = dict(engine_limits_context.get())
    if budget_pairs is not None:
        limits['budget_pairs'] = budget_pairs
    if budget_degree is not None:
        limits['budget_degree'] = budget_degree
    token = engine_limits_context.set(limits)
    try:
        yield limits
    finally:
        engine_limits_context.reset(token)


def _count(name: str, amount: int = 1):
    counters = engine_counters_context.get()
    if counters is not None:
        counters[name] = counters.get(name, 0) + amount


class HilbertProfile(BaseModel):
    values: List[int] = Field(default_factory=list)
    stabilization_index: Optional[int] = None

    class Config:
        validate_assignment = True
        extra = "forbid"

    @property
    def stable_value(self) -> Optional[int]:
        if self.stabilization_index is None:
            return None
        return self.values[self.stabilization_index]


class GroebnerBasis:
    """
    Reduced Groebner basis in ``ring`` (whose order is the basis order).
    ``cofactors[k][i]`` expresses basis element k in the i-th original generator.
    """

    def __init__(self, polys: list, ring, cofactors: Optional[List[list]] = None,
                 counters: Optional[Dict[str, int]] = None):
        self.polys = polys
        self.ring = ring
        self.cofactors = cofactors
        self.counters = dict(counters or {})

    @property
    def order(self):
        return self.ring.order

    @property
    def leading_monomials(self) -> List[Tuple[int, ...]]:
        return [g.LM for g in self.polys]

    @property
    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].LM == self.ring.zero_monom

    def reduce(self, f):
        f = to_ring(f, self.ring)
        if not self.polys or not f:
            return f
        return f.rem(self.polys)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


def spoly(f, g, lmf=None, lmg=None):
    """S-polynomial of monic f and g."""
    R = f.ring
    lmf = f.LM if lmf is None else lmf
    lmg = g.LM if lmg is None else lmg
    lcm = R.monomial_lcm(lmf, lmg)
    return f.mul_monom(R.monomial_div(lcm, lmf)) - g.mul_monom(R.monomial_div(lcm, lmg))


def update(G, P, f, lmG):
    """Add f to the basis G; prune the pair set with the Gebauer-Moeller criteria."""
    lmf = f.LM
    R = f.ring
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div

    kept = {p for p in P if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf) or
                             lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf) or
                             lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}
    lcm_dict = {}
    for i in range(len(G)):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimalized_lcms = []
    for L in sorted(lcm_dict.keys(), key=R.order):
        if all(not div(L, L_) for L_ in minimalized_lcms):
            minimalized_lcms.append(L)
    new_pairs = set()
    for L in minimalized_lcms:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            new_pairs.add((min(lcm_dict[L]), len(G)))
    _count('pairs_pruned', len(P) - len(kept) + len(G) - len(new_pairs))
    return G + [f], kept | new_pairs


def _scaled(vector, c):
    return [v * c for v in vector]


def buchberger(generators: list, ring, with_cofactors: bool = False,
               budget_pairs: Optional[int] = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``generators`` in ``ring`` (which fixes the order)."""
    if budget_pairs is None:
        budget_pairs = engine_limits_context.get()['budget_pairs']
    F = [to_ring(f, ring) for f in generators]
    r = len(F)
    domain = ring.domain

    G, lmG, sugar, cofs = [], [], [], []
    P: Set[Tuple[int, int]] = set()
    keys = {}
    tally = {'created': 0, 'dropped': 0}

    def add(g, s, cof):
        nonlocal G, P
        lc = g.LC
        inverse = domain.quo(domain.one, lc)
        g = g.mul_ground(inverse)
        G, P = update(G, P, g, lmG)
        lmG.append(g.LM)
        sugar.append(s)
        cofs.append(_scaled(cof, inverse) if with_cofactors else None)
        for p in [p for p in keys if p not in P]:
            del keys[p]
            tally['dropped'] += 1
        for p in P:
            if p not in keys:
                i, j = p
                L = ring.monomial_lcm(lmG[i], lmG[j])
                s_pair = max(sugar[i] + sum(L) - sum(lmG[i]), sugar[j] + sum(L) - sum(lmG[j]))
                keys[p] = (s_pair, ring.order(L), i, j)
                tally['created'] += 1

    for i, f in enumerate(F):
        if f:
            unit = [ring.zero] * r
            unit[i] = ring.one
            add(f, total_degree(f), unit)

    processed = 0
    zero_reductions = 0
    while P:
        pair = min(P, key=keys.__getitem__)
        P.remove(pair)
        processed += 1
        if processed > budget_pairs:
            raise BudgetExceededError(
                f"Groebner basis computation exceeded the budget of {budget_pairs} pairs "
                f"(basis size {len(G)})"
            )
        i, j = pair
        L = ring.monomial_lcm(lmG[i], lmG[j])
        mi, mj = ring.monomial_div(L, lmG[i]), ring.monomial_div(L, lmG[j])
        s = G[i].mul_monom(mi) - G[j].mul_monom(mj)
        s_sugar = keys.pop(pair)[0]
        if with_cofactors:
            s_cof = [a.mul_monom(mi) - b.mul_monom(mj) for a, b in zip(cofs[i], cofs[j])]
            if s:
                quotients, remainder = s.div(G)
                for q, c in zip(quotients, cofs):
                    if q:
                        s_cof = [a - q * b for a, b in zip(s_cof, c)]
            else:
                remainder = s
        else:
            remainder = s.rem(G) if s else s
        if remainder:
            LOGGER.debug(f"pair {pair} sugar {s_sugar}: new element with leading monomial {remainder.LM}")
            add(remainder, s_sugar, s_cof if with_cofactors else None)
        else:
            zero_reductions += 1

    # minimalize, then interreduce
    order = ring.order
    chosen = []
    for k in sorted(range(len(G)), key=lambda k: order(lmG[k])):
        if all(not ring.monomial_div(lmG[k], lmG[c]) for c in chosen):
            chosen.append(k)
    polys = [G[k] for k in chosen]
    cofactors = [cofs[k] for k in chosen] if with_cofactors else None
    reduced, reduced_cofactors = [], []
    for idx in range(len(polys)):
        others = polys[:idx] + polys[idx + 1:]
        g = polys[idx]
        if with_cofactors:
            cof = list(cofactors[idx])
            if others:
                quotients, g = g.div(others)
                other_cofs = cofactors[:idx] + cofactors[idx + 1:]
                for q, c in zip(quotients, other_cofs):
                    if q:
                        cof = [a - q * b for a, b in zip(cof, c)]
            inverse = domain.quo(domain.one, g.LC)
            reduced_cofactors.append(_scaled(cof, inverse))
            reduced.append(g.mul_ground(inverse))
        else:
            g = g.rem(others) if others else g
            reduced.append(g.monic())

    counters = {
        'pairs_processed': processed,
        'pairs_created': tally['created'],
        'pairs_dropped': tally['dropped'],
        'zero_reductions': zero_reductions,
        'basis_size': len(reduced),
    }
    _count('bases_computed')
    _count('pairs_processed', processed)
    LOGGER.debug(f"Groebner basis in order {order_name(order)}: {len(reduced)} elements, "
                 f"{processed} pairs, {zero_reductions} zero reductions")
    return GroebnerBasis(reduced, ring, reduced_cofactors if with_cofactors else None, counters)


class Ideal:
    """Ideal given by generators in ``ring``; bases are cached per order."""

    def __init__(self, generators: list, ring=None):
        if ring is None:
            if not generators:
                raise PreconditionError("an ideal without generators needs an explicit ring")
            ring = generators[0].ring
        self.ring = ring
        self.generators = [to_ring(g, ring) for g in generators if g]
        self._cache: Dict[Tuple[object, bool], GroebnerBasis] = {}

    @property
    def nvars(self) -> int:
        return self.ring.ngens

    def is_zero(self) -> bool:
        return not self.generators

    def is_homogeneous(self) -> bool:
        return all(is_homogeneous(g) for g in self.generators)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + [to_ring(g, self.ring) for g in other.generators], self.ring)

    def extended(self, extra: list) -> "Ideal":
        return Ideal(self.generators + [to_ring(g, self.ring) for g in extra], self.ring)

    def basis(self, order='grevlex', cofactors: bool = False) -> GroebnerBasis:
        order = monomial_order(order)
        for key in ((order, cofactors), (order, True)):
            if key in self._cache:
                return self._cache[key]
        ring = self.ring.clone(order=order)
        cache = basis_cache_context.get()
        cacheable = cache is not None and not cofactors and self.ring.domain.is_QQ
        if cacheable:
            key = cache.key_for(self.generators, order)
            stored = cache.load(key, ring)
            if stored is not None:
                basis = GroebnerBasis(stored, ring)
                self._cache[(order, False)] = basis
                _count('cache_hits')
                return basis
        basis = buchberger(self.generators, ring, with_cofactors=cofactors)
        if cacheable:
            cache.store(key, basis.polys)
        self._cache[(order, cofactors)] = basis
        return basis

    def __repr__(self):
        return f"Ideal({len(self.generators)} generators in {self.ring.ngens} variables)"


def groebner_basis(ideal: Ideal, order='grevlex') -> GroebnerBasis:
    return ideal.basis(order)


def normal_form(f, ideal: Ideal, order='grevlex'):
    """Remainder of f modulo the basis; returned in the ideal's ring."""
    basis = ideal.basis(order)
    return to_ring(basis.reduce(f), ideal.ring)


def ideal_membership(f, ideal: Ideal) -> Tuple[bool, Optional[list]]:
    """(True, c) with f = sum c_i * generator_i when f lies in the ideal, else (False, None)."""
    basis = ideal.basis('grevlex', cofactors=True)
    f = to_ring(f, basis.ring)
    if not f:
        return True, [ideal.ring.zero] * len(ideal.generators)
    if not basis.polys:
        return False, None
    quotients, remainder = f.div(basis.polys)
    if remainder:
        return False, None
    certificate = [basis.ring.zero] * len(ideal.generators)
    for q, row in zip(quotients, basis.cofactors):
        if q:
            certificate = [c + q * t for c, t in zip(certificate, row)]
    return True, [to_ring(c, ideal.ring) for c in certificate]


def verify_buchberger_criterion(basis: GroebnerBasis) -> bool:
    polys = basis.polys
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            s = spoly(polys[i], polys[j])
            if s and s.rem(polys):
                return False
    return True


def ideals_equal(first: Ideal, second: Ideal) -> bool:
    a = first.basis('grevlex').polys
    b = [to_ring(g, a[0].ring) if a else g for g in second.basis('grevlex').polys]
    if len(a) != len(b):
        return False
    key = first.ring.clone(order=grevlex).order
    return sorted(a, key=lambda g: key(g.LM)) == sorted(b, key=lambda g: key(g.LM))


def _fresh_name(ring, stem: str) -> str:
    taken = {str(s) for s in ring.symbols}
    name = stem
    while name in taken:
        name = "_" + name
    return name


def _prepend_variable(ring, stem: str):
    name = _fresh_name(ring, stem)
    big = PolyRing((Symbol(name),) + tuple(ring.symbols), ring.domain, EliminationOrder(1))

    def embed(p):
        return big.from_dict({(0,) + m: c for m, c in p.iterterms()})

    return big, embed


def _contract(basis: GroebnerBasis, k: int, target_ring) -> list:
    kept = []
    for g in basis.polys:
        if all(not any(m[:k]) for m in g.itermonoms()):
            kept.append(target_ring.from_dict({m[k:]: c for m, c in g.iterterms()}))
    return kept


def elimination_ideal(ideal: Ideal, k: int) -> Ideal:
    """Intersection with the subring of the variables after the first ``k``."""
    target = PolyRing(ideal.ring.symbols[k:], ideal.ring.domain, grevlex)
    if ideal.is_zero():
        return Ideal([], target)
    basis = ideal.basis(EliminationOrder(k))
    return Ideal(_contract(basis, k, target), target)


def saturate(ideal: Ideal, h) -> Ideal:
    """I : h^infinity via one extra variable s and the generator 1 - s*h."""
    h = to_ring(h, ideal.ring)
    if not h:
        raise PreconditionError("cannot saturate by the zero polynomial")
    if h.is_ground or ideal.is_zero():
        return Ideal(ideal.generators, ideal.ring)
    big, embed = _prepend_variable(ideal.ring, "s")
    s = big.gens[0]
    extended = Ideal([embed(g) for g in ideal.generators] + [big.one - s * embed(h)], big)
    return Ideal(_contract(extended.basis(big.order), 1, ideal.ring), ideal.ring)


def intersect_ideals(first: Ideal, second: Ideal) -> Ideal:
    """I cap J as the t-free part of t*I + (1 - t)*J."""
    if first.is_zero() or second.is_zero():
        return Ideal([], first.ring)
    big, embed = _prepend_variable(first.ring, "t")
    t = big.gens[0]
    generators = [t * embed(g) for g in first.generators]
    generators += [(big.one - t) * embed(to_ring(g, first.ring)) for g in second.generators]
    combined = Ideal(generators, big)
    return Ideal(_contract(combined.basis(big.order), 1, first.ring), first.ring)


def saturate_irrelevant(ideal: Ideal) -> Ideal:
    """I : (x_0, ..., x_n)^infinity as the intersection of the I : x_i^infinity."""
    result = None
    for x in ideal.ring.gens:
        part = saturate(ideal, x)
        result = part if result is None else intersect_ideals(result, part)
    return result


def _divisible(monomial, leading: List[Tuple[int, ...]]) -> bool:
    return any(all(a >= b for a, b in zip(monomial, lm)) for lm in leading)


def standard_monomial_layers(basis: GroebnerBasis) -> Iterator[Set[Tuple[int, ...]]]:
    """Degree layers of the monomials outside the leading-term ideal; infinite when not finite."""
    leading = basis.leading_monomials
    n = basis.ring.ngens
    layer = set() if _divisible((0,) * n, leading) else {(0,) * n}
    while True:
        yield layer
        following = set()
        for m in layer:
            for i in range(n):
                candidate = m[:i] + (m[i] + 1,) + m[i + 1:]
                if candidate not in following and not _divisible(candidate, leading):
                    following.add(candidate)
        layer = following


def _has_pure_powers(basis: GroebnerBasis) -> bool:
    n = basis.ring.ngens
    covered = set()
    for lm in basis.leading_monomials:
        support = [i for i, e in enumerate(lm) if e]
        if len(support) == 1:
            covered.add(support[0])
        elif not support:
            return True
    return len(covered) == n


def affine_quotient_dimension(ideal: Ideal) -> int:
    """Dimension over the coefficient field of R/I for a zero-dimensional I."""
    basis = ideal.basis('grevlex')
    if basis.is_unit:
        return 0
    if not _has_pure_powers(basis):
        raise NotZeroDimensionalError(
            "quotient is infinite dimensional: positive-dimensional singular locus or wrong chart"
        )
    total = 0
    for layer in standard_monomial_layers(basis):
        if not layer:
            break
        total += len(layer)
    return total


def hilbert_profile(ideal: Ideal, upto: int) -> HilbertProfile:
    """h(t) = dim (R/I)_t for t = 0..upto, from the standard monomials of a homogeneous I."""
    if not ideal.is_homogeneous():
        raise PreconditionError("Hilbert function requested for a non-homogeneous ideal")
    basis = ideal.basis('grevlex')
    values = []
    for t, layer in enumerate(standard_monomial_layers(basis)):
        if t > upto:
            break
        values.append(len(layer))
    stabilization = None
    for t in range(len(values) - 1, -1, -1):
        if values[t] != values[-1]:
            break
        stabilization = t
    return HilbertProfile(values=values, stabilization_index=stabilization)


def projective_is_empty(ideal: Ideal) -> Tuple[bool, Optional[int]]:
    """
    Whether V(I) is empty in projective space, with the first degree in which
    the Hilbert function of R/I vanishes as certificate.
    """
    if not ideal.is_homogeneous():
        raise PreconditionError("projective emptiness requested for a non-homogeneous ideal")
    basis = ideal.basis('grevlex')
    if not _has_pure_powers(basis):
        return False, None
    budget = engine_limits_context.get()['budget_degree']
    for t, layer in enumerate(standard_monomial_layers(basis)):
        if not layer:
            return True, t
        if t > budget:
            raise BudgetExceededError(f"Hilbert function did not vanish by degree {budget}")
    return False, None


def projective_degree(ideal: Ideal, order='grevlex') -> int:
    """
    Degree of the zero-dimensional projective scheme V(I): the eventual value
    of the Hilbert function. It is accepted once constant for max(2, n)
    consecutive degrees past sum(deg g_i) - n. Any order gives the same Hilbert function.
    """
    if not ideal.is_homogeneous():
        raise PreconditionError("projective degree requested for a non-homogeneous ideal")
    n = ideal.nvars - 1
    window = max(2, n)
    start = max(0, sum(total_degree(g) for g in ideal.generators) - n)
    budget = engine_limits_context.get()['budget_degree']
    basis = ideal.basis(order)
    history = []
    for t, layer in enumerate(standard_monomial_layers(basis)):
        history.append(len(layer))
        if not layer:
            return 0
        if t >= start + window - 1 and len(set(history[-window:])) == 1:
            LOGGER.debug(f"Hilbert function constant {history[-1]} from degree {t - window + 1}")
            return history[-1]
        if t >= budget:
            raise BudgetExceededError(
                f"Hilbert function did not stabilize by degree {budget}: "
                f"the scheme is not zero-dimensional"
            )
    return history[-1]
