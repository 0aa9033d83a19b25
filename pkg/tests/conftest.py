import pathlib

import pytest

from reggraph.catalog import all_graphs
from reggraph.textio import load_graph

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def chain5():
    return load_graph(str(FIXTURES / "chain5.txt"))


@pytest.fixture(scope="session")
def study_graph():
    return load_graph(str(FIXTURES / "child_study.txt"))


@pytest.fixture(scope="session")
def catalog4():
    """Every regression-graph class on 2..4 nodes."""
    out = []
    for n in (2, 3, 4):
        out.extend(all_graphs(n))
    return out


@pytest.fixture(scope="session")
def catalog5():
    return all_graphs(5)
