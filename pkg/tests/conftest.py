import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from angulator.model import fixture_example_3_10, type_a


@pytest.fixture(scope="session")
def a22():
    return type_a(2, 2)


@pytest.fixture(scope="session")
def a23():
    return type_a(2, 3)


@pytest.fixture(scope="session")
def square():
    return type_a(1, 1)


@pytest.fixture(scope="session")
def hexagon():
    return type_a(3, 1)


@pytest.fixture(scope="session")
def octagon():
    return type_a(5, 1)


@pytest.fixture(scope="session")
def fixture310():
    return fixture_example_3_10()
