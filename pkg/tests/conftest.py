"""
Shared fixtures: built-in spaces and presented categories.

Categories are expensive to build, so they are session scoped and shared
between test modules.
"""

import pytest

from modules.ntcat.category import build_presented_category
from modules.poset.builtins import accordion, chain, cycle_space, parse_builtin
from modules.poset.poset_core import Space


@pytest.fixture(scope="session")
def x1() -> Space:
    return parse_builtin("X1")


@pytest.fixture(scope="session")
def x3() -> Space:
    return parse_builtin("X3")


@pytest.fixture(scope="session")
def w4() -> Space:
    """1 < 2 < 3 > 4."""
    return accordion([3, 2])


@pytest.fixture(scope="session")
def o2() -> Space:
    return chain(2)


@pytest.fixture(scope="session")
def o4() -> Space:
    return chain(4)


@pytest.fixture(scope="session")
def c2() -> Space:
    return cycle_space(2)


@pytest.fixture(scope="session")
def cat_x1(x1):
    return build_presented_category(x1)


@pytest.fixture(scope="session")
def cat_x3(x3):
    return build_presented_category(x3)


@pytest.fixture(scope="session")
def cat_w4(w4):
    return build_presented_category(w4)


@pytest.fixture(scope="session")
def cat_o2(o2):
    return build_presented_category(o2)


@pytest.fixture(scope="session")
def cat_o4(o4):
    return build_presented_category(o4)


@pytest.fixture(scope="session")
def cat_c2(c2):
    return build_presented_category(c2)
