"""
Coefficient fields: the rationals and one declared simple extension Q(alpha).

Arithmetic itself is sympy's (``QQ`` and ``AlgebraicField``); this module only
describes which field is in use, builds the sympy domain for it and prints its
elements in the input grammar.
"""
import logging
import re
from functools import lru_cache
from typing import List, Optional, Sequence

from pydantic import BaseModel, field_validator, model_validator
from sympy import Dummy, Poly, QQ, Symbol

from analysis_errors import FieldDeclarationError, FieldMismatchError
from constants import MINPOLY_VARIABLE, RATIONAL_FIELD_NAME

LOGGER = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class FieldSpec(BaseModel):
    generator: Optional[str] = None
    # dense rational coefficients of the monic minimal polynomial, leading first
    minpoly: Optional[List[str]] = None

    @field_validator('generator')
    def validate_generator_name(cls, v):
        if v is not None and not _IDENTIFIER.match(v):
            raise ValueError(f"field generator must be an identifier, got '{v}'")
        return v

    @model_validator(mode='after')
    def validate_extension(self):
        if (self.generator is None) != (self.minpoly is None):
            raise ValueError("an extension needs both a generator name and a minimal polynomial")
        if self.minpoly is not None:
            coeffs = [QQ.from_sympy(_rational(c)) for c in self.minpoly]
            if len(coeffs) < 3:
                raise ValueError("minimal polynomial must have degree at least 2")
            if coeffs[0] != QQ.one:
                raise ValueError("minimal polynomial must be monic")
        return self

    class Config:
        validate_assignment = True
        extra = "forbid"

    @property
    def is_extension(self) -> bool:
        return self.generator is not None

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1 if self.minpoly else 1

    def describe(self) -> str:
        if not self.is_extension:
            return RATIONAL_FIELD_NAME
        t = Symbol(MINPOLY_VARIABLE)
        expr = Poly([_rational(c) for c in self.minpoly], t).as_expr()
        text = str(expr).replace("**", "^")
        return f"{RATIONAL_FIELD_NAME}({self.generator}) minpoly {text}"

    def domain(self):
        return build_domain(self.generator, tuple(self.minpoly or ()))


RATIONALS = FieldSpec()


def _rational(text: str):
    from sympy import Rational
    return Rational(text)


def make_extension(generator: str, coefficients: Sequence) -> FieldSpec:
    """
    Validate and normalize Q(generator) = Q[t]/(m) from the dense rational
    coefficients of m. The polynomial is made monic and must be irreducible.
    """
    coeffs = [QQ.convert(c) for c in coefficients]
    while coeffs and not coeffs[0]:
        coeffs.pop(0)
    if len(coeffs) < 3:
        raise FieldDeclarationError(
            f"minimal polynomial of {generator} must have degree at least 2"
        )
    t = Dummy(MINPOLY_VARIABLE)
    poly = Poly([QQ.to_sympy(c) for c in coeffs], t, domain=QQ)
    if not poly.is_irreducible:
        raise FieldDeclarationError(
            f"minimal polynomial {poly.as_expr()} of {generator} is reducible over Q"
        )
    poly = poly.monic()
    try:
        return FieldSpec(generator=generator, minpoly=[str(c) for c in poly.all_coeffs()])
    except ValueError as e:
        raise FieldDeclarationError(str(e))


@lru_cache(maxsize=None)
def build_domain(generator: Optional[str], minpoly: tuple):
    if generator is None:
        return QQ
    t = Dummy(MINPOLY_VARIABLE)
    poly = Poly([_rational(c) for c in minpoly], t, domain=QQ)
    LOGGER.info(f"Building number field {generator} = root of {poly.as_expr()}")
    return QQ.alg_field_from_poly(poly, alias=generator)


def is_extension_domain(domain) -> bool:
    return getattr(domain, "is_Algebraic", False)


def check_compatible(point_field: FieldSpec, ring_field: FieldSpec):
    # points may live in the declared field or in Q, nothing else
    if point_field.is_extension and point_field != ring_field:
        raise FieldMismatchError(
            f"point coordinates lie in {point_field.describe()} but the ring is declared "
            f"over {ring_field.describe()}"
        )


def format_rational(q) -> str:
    numerator, denominator = int(q.numerator), int(q.denominator)
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def format_field_element(a, domain, generator: Optional[str] = None) -> str:
    if not is_extension_domain(domain):
        return format_rational(domain.convert(a))

    coefficients = list(a.to_list()) if hasattr(a, "to_list") else list(a.rep)
    if not coefficients:
        return "0"
    name = generator or str(domain.ext.alias or "alpha")
    degree = len(coefficients) - 1
    pieces = []
    for i, c in enumerate(coefficients):
        if not c:
            continue
        power = degree - i
        if power == 0:
            body = format_rational(c)
        else:
            monomial = name if power == 1 else f"{name}^{power}"
            if c == 1:
                body = monomial
            elif c == -1:
                body = f"-{monomial}"
            else:
                body = f"{format_rational(c)}*{monomial}"
        pieces.append(body)
    text = pieces[0]
    for piece in pieces[1:]:
        text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
    return text


def generator_element(domain):
    if not is_extension_domain(domain):
        raise FieldMismatchError("the rational field has no extension generator")
    return domain.unit
