import random
import sys
from pathlib import Path

import pytest

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from crypto.group import gen_descriptor  # noqa: E402
from scheme.rsabe import rsabe_setup  # noqa: E402

ATTRIBUTES = ("a", "b", "c")


@pytest.fixture(scope="session")
def descriptor24():
    return gen_descriptor(24, random.Random(2024))


@pytest.fixture(scope="session")
def descriptor32():
    return gen_descriptor(32, random.Random(3232))


@pytest.fixture
def rng():
    return random.Random(7)


@pytest.fixture(scope="session")
def small_scheme(descriptor24):
    """(mk, pi, pk) with 3 attributes, T_max = 6 and 4 users"""
    return rsabe_setup(24, ATTRIBUTES, 6, 4, random.Random(11), max_duplication=2, descriptor=descriptor24)


@pytest.fixture(scope="session")
def scheme32(descriptor32):
    """(mk, pi, pk) with 3 attributes, T_max = 6 and 4 users at lambda = 32"""
    return rsabe_setup(32, ATTRIBUTES, 6, 4, random.Random(12), max_duplication=2, descriptor=descriptor32)
