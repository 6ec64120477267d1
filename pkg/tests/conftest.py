import pytest

from kgraphlab.shapes import Shape
from kgraphlab.kgraph import flip_graph, grid_graph, one_loop_per_color_graph


@pytest.fixture(scope="session")
def grid11():
    return grid_graph(Shape(1, 1))


@pytest.fixture(scope="session")
def n2graph():
    return one_loop_per_color_graph(2)


@pytest.fixture(scope="session")
def flip22():
    return flip_graph()


@pytest.fixture(scope="session")
def graph_family(grid11, n2graph, flip22):
    return (grid11, n2graph, flip22)
