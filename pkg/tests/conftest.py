from pathlib import Path

import pytest

from polynomial_parser import parse_poly_file, parse_polynomial
from polynomial_ring import RingContext, variable_range

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow fixtures")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def plane():
    return RingContext(variable_range("x", 0, 2))


@pytest.fixture
def space():
    return RingContext(variable_range("x", 0, 3))


@pytest.fixture
def poly(plane):
    def make(text, context=None):
        return parse_polynomial(text, context or plane)
    return make


@pytest.fixture
def load_fixture():
    def load(name):
        return parse_poly_file((FIXTURES / f"{name}.poly").read_text())
    return load


@pytest.fixture
def nodal_cubic(poly):
    return poly("x1^2*x2 - x0^2*(x0 + x2)")


@pytest.fixture
def three_syzygy_quintic(poly):
    return poly("x0^2*x1^3 + 3*x1^5 - 4*x0*x1^3*x2 + x0^2*x1*x2^2")


@pytest.fixture
def rational_quintic(poly):
    return poly("x0*x1^2*x2^2 + x1^5 + x2^5")
