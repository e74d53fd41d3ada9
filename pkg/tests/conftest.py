import pytest

from chebcircle import sieve


@pytest.fixture(scope="session")
def table_million():
    return sieve.PrimeTable.build(10**6)


@pytest.fixture(scope="session")
def table_small():
    return sieve.PrimeTable.build(10**4)
