from pathlib import Path

import pytest

from mlcores import read_edge_list

DATA = Path(__file__).parent / "data"
TOY = DATA / "toy.txt"


@pytest.fixture(scope="session")
def toy():
    g, _ = read_edge_list(TOY)
    return g


def ids(g, labels):
    return frozenset(g.index_of(x) for x in labels)


def names(g, vertices):
    return "".join(sorted(g.label(u) for u in vertices))
