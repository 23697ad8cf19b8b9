import pytest

from hktlab.analyze import analyze_entry
from hktlab.catalog import CatalogEntry, builtin_by_name
from hktlab.hyperhermitian import hkt_check
from hktlab.tensors import KForm


@pytest.fixture(scope="session")
def catalog() -> dict[str, CatalogEntry]:
    return builtin_by_name()


@pytest.fixture(scope="session")
def analyses(catalog) -> dict[str, dict]:
    return {name: analyze_entry(entry) for name, entry in catalog.items()}


@pytest.fixture(scope="session")
def torsions(catalog) -> dict[str, KForm]:
    out: dict[str, KForm] = {}
    for name, entry in catalog.items():
        res = hkt_check(entry.structure, entry.lie)
        if res.ok:
            out[name] = res.torsion
    return out
