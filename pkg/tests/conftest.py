import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import worked_example  # noqa: E402

from rank1dm import GF, QQ, dm_decompose  # noqa: E402


@pytest.fixture
def gf2():
    return GF(2)


@pytest.fixture
def gf3():
    return GF(3)


@pytest.fixture
def qq():
    return QQ


@pytest.fixture
def example():
    return worked_example()


@pytest.fixture(scope="session")
def example_result():
    return dm_decompose(worked_example())
