import random

import pytest
from sympy import QQ

from analysis_errors import (
    NonIsolatedSingularityError,
    NonQuasiHomogeneousPointError,
    PointNotSingularError,
    PreconditionError,
)
from polynomial_ring import gradient, linear_change
from singular_analysis import (
    ProjectivePoint,
    chebyshev_fixture,
    chebyshev_node_count,
    choose_transversal_chart,
    find_singular_points,
    global_all_qh,
    is_singular_point,
    is_transversal,
    local_numbers,
    ploski_fixture,
    qh_at_point,
    quasi_homogeneous_family,
    total_milnor,
    total_tjurina,
    witness_syzygy,
)
from syzygy_module import first_syzygy_matrix

ORIGIN = ProjectivePoint([0, 0, 1])
FAR_POINT = ProjectivePoint([1, 0, 0])


def test_projective_point_is_normalized():
    point = ProjectivePoint([0, 2, -4])
    assert point.coordinates == (QQ(0), QQ(1), QQ(-2))
    assert point.chart == 1
    assert str(point) == "(0:1:-2)"
    assert point == ProjectivePoint([0, -1, 2])


def test_projective_point_needs_nonzero_coordinate():
    with pytest.raises(PreconditionError):
        ProjectivePoint([0, 0, 0])


def test_local_numbers_of_node_and_cusp(nodal_cubic, poly):
    assert local_numbers(nodal_cubic, ORIGIN) == (1, 1)
    assert local_numbers(poly("x1^2*x2 - x0^3"), ORIGIN) == (2, 2)


def test_local_numbers_of_non_quasi_homogeneous_point(rational_quintic):
    assert local_numbers(rational_quintic, FAR_POINT) == (10, 11)


def test_smooth_point_is_rejected(nodal_cubic):
    point = ProjectivePoint([0, 1, 0])
    assert not is_singular_point(nodal_cubic, point)
    with pytest.raises(PointNotSingularError):
        local_numbers(nodal_cubic, point)


def test_find_singular_points(three_syzygy_quintic):
    points, residual = find_singular_points(three_syzygy_quintic)
    assert set(points) == {ORIGIN, FAR_POINT}
    assert residual == 0
    assert sum(local_numbers(three_syzygy_quintic, p)[0] for p in points) == 10


def test_find_singular_points_of_smooth_curve(poly):
    assert find_singular_points(poly("x0^3 + x1^3 + x2^3")) == ([], 0)


def test_non_isolated_singular_locus(poly):
    with pytest.raises(NonIsolatedSingularityError):
        find_singular_points(poly("x0^2*x1"), tau_total=0)


def test_rank_test_agrees_with_local_numbers(three_syzygy_quintic, rational_quintic):
    M_f, _ = first_syzygy_matrix(three_syzygy_quintic)
    assert qh_at_point(M_f, ORIGIN)[0] == 1
    assert qh_at_point(M_f, FAR_POINT)[0] == 1
    M_g, _ = first_syzygy_matrix(rational_quintic)
    assert qh_at_point(M_g, FAR_POINT) == (0, None)


def test_global_test(three_syzygy_quintic, rational_quintic):
    M_f, _ = first_syzygy_matrix(three_syzygy_quintic)
    all_qh, certificate = global_all_qh(three_syzygy_quintic, M_f)
    assert all_qh
    assert certificate is not None
    M_g, _ = first_syzygy_matrix(rational_quintic)
    assert global_all_qh(rational_quintic, M_g) == (False, None)


def test_transversal_chart_totals(rational_quintic):
    matrix, attempts = choose_transversal_chart(rational_quintic, random.Random(0))
    assert attempts >= 1
    assert is_transversal(linear_change(rational_quintic, matrix))
    assert total_tjurina(rational_quintic, matrix) == 10
    assert total_milnor(rational_quintic, matrix) == 11


def test_chart_search_is_deterministic(nodal_cubic):
    first = choose_transversal_chart(nodal_cubic, random.Random(7))
    second = choose_transversal_chart(nodal_cubic, random.Random(7))
    assert first == second
    assert total_tjurina(nodal_cubic, first[0]) == total_milnor(nodal_cubic, first[0]) == 1


def test_witness_syzygy(three_syzygy_quintic):
    M_f, data = first_syzygy_matrix(three_syzygy_quintic)
    points = [ORIGIN, FAR_POINT]
    witness, trials = witness_syzygy(three_syzygy_quintic, M_f, data, points, random.Random(0))
    assert trials >= 1
    assert not witness.dot(gradient(three_syzygy_quintic))
    assert witness.degree - witness.shifts[0] == data.exponents[-1]
    assert all(any(witness.evaluate(p.coordinates)) for p in points)


def test_witness_refused_at_non_quasi_homogeneous_point(rational_quintic):
    M_f, data = first_syzygy_matrix(rational_quintic)
    with pytest.raises(NonQuasiHomogeneousPointError):
        witness_syzygy(rational_quintic, M_f, data, [FAR_POINT], random.Random(0))


@pytest.mark.parametrize("n, d, k, expected", [
    (4, 6, 0, 216),
    (2, 3, 0, 2),
    (2, 4, 0, 4),
    (2, 3, 1, 0),
    (2, 4, 3, 0),
    (3, 4, 1, 3 * 1 * 2 * 2),
])
def test_chebyshev_node_count(n, d, k, expected):
    assert chebyshev_node_count(n, d, k) == expected


def test_chebyshev_cubic_nodes_are_rational():
    fixture = chebyshev_fixture(2, 3)
    assert fixture.expected["points"] == 2
    points, residual = find_singular_points(fixture.polynomial)
    assert len(points) == 2
    assert residual == 0
    assert all(local_numbers(fixture.polynomial, p) == (1, 1) for p in points)


def test_chebyshev_fixture_needs_degree_two():
    with pytest.raises(PreconditionError):
        chebyshev_fixture(2, 1)


def test_ploski_expectations():
    sextic = ploski_fixture(3)
    assert sextic.expected["tau"] == 21
    assert sextic.expected["mu"] == 22
    assert sextic.expected["defect"] == 1
    assert sextic.polynomial.degree() == 6
    assert ploski_fixture(4).expected["defect"] == 2
    assert ploski_fixture(3, with_tangent=True).expected["d"] == 7


def test_quasi_homogeneous_family_syzygy():
    fixture, syzygy = quasi_homogeneous_family(2, 3, 3)
    assert fixture.expected["d"] == 5
    assert not syzygy.dot(gradient(fixture.polynomial))


@pytest.mark.parametrize("name", ["nodal_cubic", "three_syzygy_quintic", "qh_family_plane", "qh_family_space"])
def test_witness_syzygy_on_quasi_homogeneous_fixtures(name, load_fixture):
    _, f = load_fixture(name)
    M_f, data = first_syzygy_matrix(f)
    points, residual = find_singular_points(f)
    assert points
    assert residual == 0
    witness, trials = witness_syzygy(f, M_f, data, points, random.Random(0), trials=16)
    assert trials <= 16
    assert not witness.dot(gradient(f))
    assert witness.degree - witness.shifts[0] == data.exponents[-1]
    assert all(any(witness.evaluate(p.coordinates)) for p in points)
