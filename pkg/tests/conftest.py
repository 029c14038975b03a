import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from anyonladder.model import builtin


@pytest.fixture(scope="session")
def fib():
    return builtin("fibonacci")


@pytest.fixture(scope="session")
def fermion():
    return builtin("fermion")


@pytest.fixture(scope="session")
def ising():
    return builtin("ising")
