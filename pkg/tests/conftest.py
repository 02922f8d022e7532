import pytest

from pschen.arith import SpfTable


@pytest.fixture(scope="session")
def spf10k() -> SpfTable:
    return SpfTable(10_000)
