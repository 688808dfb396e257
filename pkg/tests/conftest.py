import pytest

from quatmatch.verifycli import ClassSetPool


@pytest.fixture(scope="session")
def pool():
    """Shared in-memory pool of class sets (saves rebuilding across tests)."""
    return ClassSetPool()
