import pytest

from spinecycles import ssgraph


@pytest.fixture(scope="session")
def graph_4643_3():
    return ssgraph.build_graph(4643, 3)


@pytest.fixture(scope="session")
def graph_101_2():
    return ssgraph.build_graph(101, 2)
