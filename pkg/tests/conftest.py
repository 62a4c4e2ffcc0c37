import pytest

from app.services.cartan import parse_type


@pytest.fixture
def a2():
    return parse_type("A2-2")


@pytest.fixture
def a4():
    return parse_type("A4-2")


@pytest.fixture
def a3():
    return parse_type("A3-2")


@pytest.fixture
def d4_3():
    return parse_type("D4-3")


@pytest.fixture
def e6():
    return parse_type("E6-2")
