"""
Text grammar for polynomials, field declarations, field elements, ``.poly``
files and points files.

    expr    :: term [ ('+' | '-') term ]*
    term    :: signed [ ('*' | '/') signed ]*
    signed  :: ['+' | '-'] signed | power
    power   :: atom [ '^' signed ]*
    atom    :: integer | identifier | '(' expr ')'

Exponents must be non-negative integer constants, division is only by
nonzero constants.
"""
import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple

import pyparsing as pp
from sympy import QQ
from sympy.polys.rings import PolyRing

from analysis_errors import (
    CoefficientFieldError,
    FieldDeclarationError,
    PolynomialSyntaxError,
    UnknownVariableError,
)
from constants import MINPOLY_VARIABLE, RATIONAL_FIELD_NAME
from field_arithmetic import FieldSpec, RATIONALS, make_extension
from polynomial_ring import RingContext, variable_range

LOGGER = logging.getLogger(__name__)


class _Operand:
    __slots__ = ('kind', 'text', 'loc')

    def __init__(self, kind: str, text: str, loc: int):
        self.kind = kind
        self.text = text
        self.loc = loc


def _make_operand(kind):
    def action(s, loc, toks):
        return _Operand(kind, toks[0], loc)
    return action


_integer = pp.Word(pp.nums).set_parse_action(_make_operand('integer'))
_identifier = pp.Word(pp.alphas + "_", pp.alphanums + "_").set_parse_action(_make_operand('name'))

_expression = pp.infix_notation(
    _integer | _identifier,
    [
        ("^", 2, pp.OpAssoc.RIGHT),
        (pp.one_of("+ -"), 1, pp.OpAssoc.RIGHT),
        (pp.one_of("* /"), 2, pp.OpAssoc.LEFT),
        (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT),
    ],
)


def _first_location(node) -> int:
    if isinstance(node, _Operand):
        return node.loc
    for item in node:
        if not isinstance(item, str):
            return _first_location(item)
    return 0


class _Evaluator:
    """Folds the parse tree into values of ``domain`` or polynomials of ``ring``."""

    def __init__(self, text: str, namespace: Dict[str, object], domain, forbidden: Sequence[str] = ()):
        self.text = text
        self.namespace = namespace
        self.domain = domain
        self.forbidden = set(forbidden)

    def _syntax_error(self, message: str, loc: int):
        return PolynomialSyntaxError(message, pp.lineno(loc, self.text), pp.col(loc, self.text),
                                     pp.line(loc, self.text))

    def _is_constant(self, value) -> bool:
        return not hasattr(value, "ring") or value.is_ground

    def _constant(self, value):
        return value.const() if hasattr(value, "ring") else value

    def evaluate(self, node):
        if isinstance(node, _Operand):
            return self._operand(node)
        items = list(node)
        if len(items) == 1:
            return self.evaluate(items[0])
        if isinstance(items[0], str):
            # unary sign
            value = self.evaluate(items[1])
            return -value if items[0] == "-" else value
        if items[1] == "^":
            return self._power(items)
        value = self.evaluate(items[0])
        for op, operand in zip(items[1::2], items[2::2]):
            right = self.evaluate(operand)
            if op == "+":
                value = value + right
            elif op == "-":
                value = value - right
            elif op == "*":
                value = value * right
            else:
                if not self._is_constant(right):
                    raise self._syntax_error("division by a non-constant expression",
                                             _first_location(operand))
                divisor = self._constant(right)
                if not divisor:
                    raise self._syntax_error("division by zero", _first_location(operand))
                value = value * self.domain.quo(self.domain.one, self.domain.convert(divisor))
        return value

    def _power(self, items):
        # right associative: a ^ b ^ c = a ^ (b ^ c)
        result = self.evaluate(items[-1])
        loc = _first_location(items[-1])
        for base_node in items[-3::-2]:
            k = self._exponent(result, loc)
            result = self.evaluate(base_node) ** k
            loc = _first_location(base_node)
        return result

    def _exponent(self, value, loc: int) -> int:
        if not self._is_constant(value):
            raise self._syntax_error("exponent must be a constant", loc)
        constant = self._constant(value)
        if hasattr(constant, "mod_to_DMP"):
            raise self._syntax_error("exponent must be a non-negative integer", loc)
        constant = QQ.convert(constant)
        if constant.denominator != 1 or constant < 0:
            raise self._syntax_error("exponent must be a non-negative integer", loc)
        return int(constant.numerator)

    def _operand(self, operand: _Operand):
        if operand.kind == 'integer':
            return self.domain.convert(int(operand.text))
        name = operand.text
        if name in self.forbidden:
            raise CoefficientFieldError(
                f"'{name}' is a field generator; polynomial coefficients must be rational "
                f"(line {pp.lineno(operand.loc, self.text)}, column {pp.col(operand.loc, self.text)})"
            )
        if name not in self.namespace:
            raise UnknownVariableError(name, pp.lineno(operand.loc, self.text), pp.col(operand.loc, self.text))
        return self.namespace[name]


def _parse_tree(text: str):
    try:
        return _expression.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise PolynomialSyntaxError(f"syntax error: {e.msg}", e.lineno, e.col, e.line)


def parse_expression(text: str, ring, forbidden: Sequence[str] = ()):
    """Parse into ``ring`` (any sympy PolyRing); names resolve to its generators."""
    if not text.strip():
        raise PolynomialSyntaxError("empty expression", 1, 1, "")
    tree = _parse_tree(text)
    namespace = {str(s): g for s, g in zip(ring.symbols, ring.gens)}
    evaluator = _Evaluator(text, namespace, ring.domain, forbidden)
    value = evaluator.evaluate(tree[0])
    return ring.ring_new(value) if not hasattr(value, "ring") else value


def parse_polynomial(text: str, context: RingContext):
    forbidden = [context.field.generator] if context.field.is_extension else []
    return parse_expression(text, context.ring, forbidden)


def parse_field_element(text: str, field: FieldSpec):
    """A value of Q or of the declared extension, e.g. ``1/2 - 3*alpha``."""
    domain = field.domain()
    tree = _parse_tree(text)
    namespace = {field.generator: domain.unit} if field.is_extension else {}
    return _Evaluator(text, namespace, domain).evaluate(tree[0])


_FIELD_DECLARATION = re.compile(
    r"^\s*(?:field\s+)?Q\s*(?:\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\s*minpoly\s+(.+?))?\s*$"
)


def parse_field_declaration(text: str) -> FieldSpec:
    """``Q`` or ``Q(alpha) minpoly t^2+1``, optionally prefixed by ``field``."""
    match = _FIELD_DECLARATION.match(text)
    if not match:
        raise FieldDeclarationError(
            f"field declaration must look like '{RATIONAL_FIELD_NAME}' or "
            f"'{RATIONAL_FIELD_NAME}(alpha) minpoly {MINPOLY_VARIABLE}^2+1', got '{text.strip()}'"
        )
    generator, minpoly_text = match.group(1), match.group(2)
    if generator is None:
        return RATIONALS

    # the minimal polynomial may be written in t or in the generator name
    ring = PolyRing((MINPOLY_VARIABLE,), QQ)
    normalized = re.sub(rf"\b{re.escape(generator)}\b", MINPOLY_VARIABLE, minpoly_text)
    try:
        poly = parse_expression(normalized, ring)
    except (PolynomialSyntaxError, UnknownVariableError) as e:
        raise FieldDeclarationError(f"invalid minimal polynomial '{minpoly_text}': {e}")
    if not poly:
        raise FieldDeclarationError("minimal polynomial must be nonzero")
    degree = poly.degree()
    coefficients = [poly.get((k,), QQ.zero) for k in range(degree, -1, -1)]
    return make_extension(generator, coefficients)


_VARIABLE_RANGE = re.compile(r"^([A-Za-z_]+)(\d+)\s*\.\.\s*\1(\d+)$")
_HEADER = re.compile(r"^\s*ring\s+(.+?)\s+over\s+(.+?)\s*$")


def parse_variable_list(text: str) -> List[str]:
    text = text.strip()
    match = _VARIABLE_RANGE.match(text)
    if match:
        prefix, start, stop = match.group(1), int(match.group(2)), int(match.group(3))
        if stop < start:
            raise PolynomialSyntaxError(f"empty variable range '{text}'", 1, 1, text)
        return variable_range(prefix, start, stop)
    names = [name.strip() for name in text.split(",")]
    for name in names:
        if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", name):
            raise PolynomialSyntaxError(f"invalid variable name '{name}'", 1, 1, text)
    return names


def _strip_comment(line: str) -> str:
    position = line.find("#")
    return line if position < 0 else line[:position] + " " * (len(line) - position)


def parse_poly_file(text: str) -> Tuple[RingContext, object]:
    """
    ``.poly`` format::

        # nodal cubic
        ring x0..x2 over Q
        field Q(i) minpoly t^2+1      (optional)
        x1^2*x2 - x0^2*(x0 + x2)

    Header and field lines are blanked rather than removed, so syntax errors
    in the polynomial report line numbers of the file itself.
    """
    lines = [_strip_comment(line) for line in text.splitlines()]
    header_index = next((i for i, line in enumerate(lines) if line.strip()), None)
    if header_index is None:
        raise PolynomialSyntaxError("empty .poly file", 1, 1, "")

    header = _HEADER.match(lines[header_index])
    if not header:
        raise PolynomialSyntaxError("expected header 'ring <variables> over <field>'",
                                    header_index + 1, 1, lines[header_index])
    variables = parse_variable_list(header.group(1))
    field = parse_field_declaration(header.group(2))
    lines[header_index] = ""

    for i, line in enumerate(lines):
        if line.strip().startswith("field "):
            if field.is_extension:
                raise FieldDeclarationError(f"second field declaration on line {i + 1}")
            field = parse_field_declaration(line)
            lines[i] = ""

    context = RingContext(variables, field)
    body = "\n".join(lines)
    polynomial = parse_polynomial(body, context)
    LOGGER.info(f"Parsed polynomial in {context.nvars} variables over {field.describe()}")
    return context, polynomial


def parse_points_file(text: str, field: FieldSpec, nvars: int) -> List[list]:
    """One point per line, coordinates separated by ':'; blank lines and '#' comments ignored."""
    points = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        parts = line.split(":")
        if len(parts) != nvars:
            raise PolynomialSyntaxError(
                f"point has {len(parts)} coordinates, expected {nvars}", number, 1, raw
            )
        coordinates = []
        for part in parts:
            try:
                coordinates.append(parse_field_element(part, field))
            except PolynomialSyntaxError as e:
                raise PolynomialSyntaxError(f"bad coordinate '{part.strip()}'", number, e.column, raw)
            except UnknownVariableError as e:
                raise UnknownVariableError(e.name, number, e.column)
        points.append(coordinates)
    return points
