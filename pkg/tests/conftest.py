from pathlib import Path

import pytest

from src.models import catalog

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "data" / "corpus"
DISTRIBUTIONS = ROOT / "data" / "distributions"


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def distributions_dir():
    return DISTRIBUTIONS


@pytest.fixture
def table1():
    return catalog.table1()


@pytest.fixture
def table2():
    return catalog.table2()


@pytest.fixture
def table4():
    return catalog.table4()


@pytest.fixture
def mod2sum():
    return catalog.mod2sum()


@pytest.fixture
def example8():
    return catalog.example8_family(3)
