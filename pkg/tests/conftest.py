import pytest

from virtual_wrt.algebra.poly import GENERIC
from virtual_wrt.diagram.codec import parse_diagram
from virtual_wrt.diagram.library import builtin


@pytest.fixture
def generic():
    return GENERIC


@pytest.fixture
def unknot():
    return parse_diagram("")


@pytest.fixture
def trefoil():
    return builtin("trefoil")


@pytest.fixture
def hopf():
    return builtin("hopf+")


@pytest.fixture
def paper_k():
    return builtin("paperK")


@pytest.fixture
def paper_khat():
    return builtin("paperKhat")
