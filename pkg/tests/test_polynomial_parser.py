import pytest
from sympy import QQ

from analysis_errors import (
    CoefficientFieldError,
    FieldDeclarationError,
    PolynomialSyntaxError,
    UnknownVariableError,
)
from polynomial_parser import (
    parse_field_declaration,
    parse_field_element,
    parse_points_file,
    parse_poly_file,
    parse_polynomial,
    parse_variable_list,
)
from polynomial_ring import format_polynomial


def test_parse_nodal_cubic(plane):
    f = parse_polynomial("x1^2*x2 - x0^2*(x0 + x2)", plane)
    x0, x1, x2 = plane.gens
    assert f == x1**2 * x2 - x0**3 - x0**2 * x2


def test_parse_rational_coefficients_and_division(plane):
    f = parse_polynomial("x0/2 - 3/4*x1", plane)
    x0, x1, _ = plane.gens
    assert f == x0 * QQ(1, 2) - x1 * QQ(3, 4)


def test_power_is_right_associative(plane):
    assert parse_polynomial("x0^2^2", plane) == plane.gens[0] ** 4


def test_unary_minus(plane):
    x0, x1, _ = plane.gens
    assert parse_polynomial("-x0 + -(x1)", plane) == -x0 - x1


def test_format_then_parse_gives_back_the_polynomial(plane):
    f = parse_polynomial("(x0 + 2*x1 - x2/3)^3", plane)
    assert parse_polynomial(format_polynomial(f), plane) == f


def test_unknown_variable_reports_position(plane):
    with pytest.raises(UnknownVariableError) as info:
        parse_polynomial("x0 + y1", plane)
    assert info.value.name == "y1"
    assert info.value.line == 1
    assert info.value.column == 6


def test_syntax_error_has_line_and_column(plane):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("x0 + * x1", plane)
    assert info.value.line == 1
    assert info.value.column >= 1


def test_non_constant_exponent_rejected(plane):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x0^x1", plane)


def test_negative_exponent_rejected(plane):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x0^(-1)", plane)


def test_division_by_polynomial_rejected(plane):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x0/x1", plane)


def test_division_by_zero_rejected(plane):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x0/(1-1)", plane)


def test_empty_expression_rejected(plane):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("   ", plane)


def test_field_declaration_rational():
    field = parse_field_declaration("Q")
    assert not field.is_extension
    assert field.describe() == "Q"


def test_field_declaration_extension():
    field = parse_field_declaration("field Q(i) minpoly t^2+1")
    assert field.generator == "i"
    assert field.degree == 2
    assert field.minpoly == ["1", "0", "1"]


def test_field_declaration_in_generator_name():
    assert parse_field_declaration("Q(a) minpoly a^2-2").minpoly == ["1", "0", "-2"]


def test_field_declaration_made_monic():
    assert parse_field_declaration("Q(a) minpoly 2*t^2-6").minpoly == ["1", "0", "-3"]


def test_reducible_minpoly_rejected():
    with pytest.raises(FieldDeclarationError):
        parse_field_declaration("Q(a) minpoly t^2-1")


def test_linear_minpoly_rejected():
    with pytest.raises(FieldDeclarationError):
        parse_field_declaration("Q(a) minpoly t-1")


def test_garbage_field_declaration_rejected():
    with pytest.raises(FieldDeclarationError):
        parse_field_declaration("R")


def test_field_element_in_extension():
    field = parse_field_declaration("Q(i) minpoly t^2+1")
    domain = field.domain()
    i = parse_field_element("i", field)
    assert i * i == -domain.one
    assert parse_field_element("1/2 - 3*i", field) == domain.convert(QQ(1, 2)) - 3 * i


def test_variable_list_range_and_names():
    assert parse_variable_list("x0..x3") == ["x0", "x1", "x2", "x3"]
    assert parse_variable_list("x, y, z") == ["x", "y", "z"]


def test_parse_poly_file_with_field_line():
    text = "# sextic\nring x0..x2 over Q\nfield Q(i) minpoly t^2+1\n(x0^2 + x1^2)^3 - 4*x0^2*x1^2*x2^2\n"
    context, f = parse_poly_file(text)
    assert context.variables == ("x0", "x1", "x2")
    assert context.field.generator == "i"
    assert f.degree() == 6


def test_parse_poly_file_error_line_numbers_refer_to_file():
    text = "# comment\nring x0..x2 over Q\n\nx0 + + \n"
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_poly_file(text)
    assert info.value.line == 4


def test_parse_poly_file_needs_header():
    with pytest.raises(PolynomialSyntaxError):
        parse_poly_file("x0^2 + x1^2\n")


def test_generator_not_allowed_in_polynomial():
    with pytest.raises(CoefficientFieldError):
        parse_poly_file("ring x0..x2 over Q(i) minpoly t^2+1\nx0^2 + i*x1^2\n")


def test_points_file():
    field = parse_field_declaration("Q(i) minpoly t^2+1")
    points = parse_points_file("# q and r\n1 : -i : 0\n1 : i : 0\n", field, 3)
    assert len(points) == 2
    i = parse_field_element("i", field)
    assert points[0][1] == -i


def test_points_file_wrong_arity():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_points_file("1 : 0\n", parse_field_declaration("Q"), 3)
    assert info.value.line == 1
