import itertools
from typing import Iterator

import pytest

from cutcraft.graph import (
    Graph,
    complete_graph,
    connected_graphs,
    cycle_graph,
    grid_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)


def small_graphs(max_n: int = 4, sample_five: int = 40) -> list[Graph]:
    graphs = [g for n in range(1, max_n + 1) for g in connected_graphs(n)]
    return graphs + list(itertools.islice(connected_graphs(5), sample_five))


def random_graphs(count: int = 12, sizes=(5, 6, 7), p: float = 0.3) -> list[Graph]:
    return [random_connected_graph(n, p, seed) for n in sizes for seed in range(count // len(sizes))]


def exhaustive_graphs(max_n: int = 8, full_up_to: int = 6, cap: int = 300) -> Iterator[Graph]:
    """Every connected graph up to full_up_to vertices, then the first cap graphs of each larger size."""
    for n in range(1, max_n + 1):
        yield from connected_graphs(n, cap if n > full_up_to else 1 << 20)


def random_sweep_graphs() -> list[Graph]:
    return random_graphs(count=200, sizes=(8, 9, 10, 11, 12), p=0.25)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def c4() -> Graph:
    return cycle_graph(4)


@pytest.fixture
def p3() -> Graph:
    return path_graph(3)


@pytest.fixture
def star5() -> Graph:
    return star_graph(5)


@pytest.fixture
def grid23() -> Graph:
    return grid_graph(2, 3)


@pytest.fixture
def paw() -> Graph:
    """Triangle 0-1-2 with a pendant 3 on vertex 2."""
    return Graph(4, ((0, 1), (0, 2), (1, 2), (2, 3)))


@pytest.fixture
def gr_file(tmp_path):
    def write(g: Graph, name: str = "g.gr"):
        from cutcraft.graph import emit_graph

        path = tmp_path / name
        path.write_text(emit_graph(g))
        return path

    return write
