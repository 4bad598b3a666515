import pytest

from analysis_errors import BudgetExceededError, NotZeroDimensionalError, PreconditionError
from groebner_engine import (
    Ideal,
    affine_quotient_dimension,
    buchberger,
    elimination_ideal,
    engine_counters_context,
    engine_limits,
    groebner_basis,
    hilbert_profile,
    ideal_membership,
    ideals_equal,
    intersect_ideals,
    normal_form,
    projective_degree,
    projective_is_empty,
    saturate,
    saturate_irrelevant,
    verify_buchberger_criterion,
)
from polynomial_ring import RingContext, gradient


@pytest.fixture
def affine_plane():
    return RingContext(["x", "y"])


def test_reduced_basis_satisfies_buchberger_criterion(rational_quintic):
    basis = Ideal(gradient(rational_quintic)).basis()
    assert verify_buchberger_criterion(basis)
    assert all(g.LC == 1 for g in basis)


def test_basis_of_generators_that_are_already_a_basis(plane):
    x0, x1, x2 = plane.gens
    basis = buchberger([x0**2, x1**2, x2**2], plane.ring)
    assert sorted(basis.leading_monomials) == sorted([(2, 0, 0), (0, 2, 0), (0, 0, 2)])


def test_normal_form(poly):
    ideal = Ideal([poly("x0^2 - x1*x2")])
    assert normal_form(poly("x0^2 + x2"), ideal) == poly("x1*x2 + x2")


def test_membership_certificate_reproduces_polynomial(nodal_cubic, plane):
    generators = gradient(nodal_cubic)
    member, certificate = ideal_membership(nodal_cubic, Ideal(generators))
    assert member
    combination = sum((c * g for c, g in zip(certificate, generators)), plane.ring.zero)
    assert combination == nodal_cubic


def test_non_member(poly):
    member, certificate = ideal_membership(poly("x2"), Ideal([poly("x0"), poly("x1")]))
    assert not member
    assert certificate is None


def test_ideals_equal_ignores_generator_choice(poly):
    first = Ideal([poly("x0 + x1"), poly("x0 - x1")])
    second = Ideal([poly("x0"), poly("x1")])
    assert ideals_equal(first, second)
    assert not ideals_equal(first, Ideal([poly("x0")]))


def test_elimination(poly):
    ideal = Ideal([poly("x0 - x1^2"), poly("x1 - x2")])
    eliminated = elimination_ideal(ideal, 1)
    y1, y2 = eliminated.ring.gens
    assert eliminated.ring.ngens == 2
    assert eliminated.basis().polys == [y1 - y2]


def test_saturation_removes_a_component(poly):
    saturated = saturate(Ideal([poly("x0*x1")]), poly("x0"))
    assert ideals_equal(saturated, Ideal([poly("x1")]))


def test_saturation_by_zero_rejected(poly):
    with pytest.raises(PreconditionError):
        saturate(Ideal([poly("x0")]), poly("0"))


def test_intersection(poly):
    meet = intersect_ideals(Ideal([poly("x0")]), Ideal([poly("x1")]))
    assert ideals_equal(meet, Ideal([poly("x0*x1")]))


def test_saturation_by_irrelevant_ideal(poly):
    embedded = Ideal([poly("x0^2"), poly("x0*x1"), poly("x0*x2")])
    assert ideals_equal(saturate_irrelevant(embedded), Ideal([poly("x0")]))


def test_affine_quotient_dimension(affine_plane):
    x, y = affine_plane.gens
    assert affine_quotient_dimension(Ideal([x**2 - y, y**2])) == 4
    assert affine_quotient_dimension(Ideal([x - 1, y])) == 1
    assert affine_quotient_dimension(Ideal([x, x + 1])) == 0


def test_affine_quotient_dimension_of_curve_fails(affine_plane):
    x, y = affine_plane.gens
    with pytest.raises(NotZeroDimensionalError):
        affine_quotient_dimension(Ideal([x * y]))


def test_hilbert_profile_of_a_point(poly):
    profile = hilbert_profile(Ideal([poly("x0"), poly("x1")]), 5)
    assert profile.values == [1, 1, 1, 1, 1, 1]
    assert profile.stable_value == 1


def test_hilbert_profile_needs_homogeneous_ideal(poly):
    with pytest.raises(PreconditionError):
        hilbert_profile(Ideal([poly("x0 - 1")]), 3)


def test_projective_emptiness_certificate(poly):
    empty, degree = projective_is_empty(Ideal([poly("x0^2"), poly("x1^2"), poly("x2^2")]))
    assert empty
    assert degree == 4
    assert projective_is_empty(Ideal([poly("x0"), poly("x1")])) == (False, None)


def test_jacobian_degree_of_nodal_cubic(nodal_cubic):
    assert projective_degree(Ideal(gradient(nodal_cubic))) == 1


def test_jacobian_degree_is_order_independent(nodal_cubic, rational_quintic):
    ideal = Ideal(gradient(nodal_cubic))
    assert projective_degree(ideal, "grevlex") == projective_degree(ideal, "lex") == 1
    assert projective_degree(Ideal(gradient(rational_quintic))) == 10


def test_positive_dimensional_scheme_exhausts_degree_budget(poly):
    with engine_limits(budget_degree=10):
        with pytest.raises(BudgetExceededError):
            projective_degree(Ideal([poly("x0")]))


def test_pair_budget(nodal_cubic):
    with engine_limits(budget_pairs=0):
        with pytest.raises(BudgetExceededError):
            Ideal(gradient(nodal_cubic)).basis()


def test_engine_limits_restored(nodal_cubic):
    with engine_limits(budget_pairs=0):
        pass
    assert len(Ideal(gradient(nodal_cubic)).basis()) > 0


def test_counters_collect_basis_computations(nodal_cubic):
    counters = {}
    token = engine_counters_context.set(counters)
    try:
        ideal = Ideal(gradient(nodal_cubic))
        ideal.basis()
        ideal.basis()
    finally:
        engine_counters_context.reset(token)
    assert counters["bases_computed"] == 1
    assert counters["pairs_processed"] >= 1


def test_groebner_basis_of_coordinate_ideal(plane):
    x0, x1, _ = plane.gens
    basis = groebner_basis(Ideal([x0, x1]))
    assert sorted(basis.leading_monomials) == [(0, 1, 0), (1, 0, 0)]
    assert not basis.is_unit
    assert groebner_basis(Ideal([x0, x0 - 1])).is_unit


def test_every_pair_is_processed_or_dropped(rational_quintic):
    counters = buchberger(gradient(rational_quintic), rational_quintic.ring).counters
    assert counters["pairs_created"] > 0
    assert counters["pairs_created"] == counters["pairs_processed"] + counters["pairs_dropped"]
