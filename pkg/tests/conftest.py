import pytest

from lafuzzy.algebra import CayleyTable, enumerate_la_semigroups
from lafuzzy.structio import bundled


@pytest.fixture(scope="session")
def ex_sub():
    return bundled("example_subsemigroup.json")


@pytest.fixture(scope="session")
def ex_left():
    return bundled("example_left_ideal.json")


@pytest.fixture(scope="session")
def ex_gbi():
    return bundled("example_generalized_bi.json")


@pytest.fixture(scope="session")
def ex_quasi():
    return bundled("example_quasi.json")


@pytest.fixture(scope="session")
def small_tables():
    """Every LA-semigroup of order 1..3 (112 tables)."""
    return [T for n in (1, 2, 3) for T in enumerate_la_semigroups(n)]


def table(*rows):
    """Rows written with 1-based labels, as Cayley tables are usually printed."""
    return CayleyTable.from_rows([[v - 1 for v in r] for r in rows])
