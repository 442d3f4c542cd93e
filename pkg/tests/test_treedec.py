import pytest

from cutcraft.errors import InputError
from cutcraft.graph import complete_graph, cycle_graph, grid_graph, path_graph, random_connected_graph
from cutcraft.treedec import (
    NodeKind,
    TreeDecomposition,
    emit_td,
    heuristic_decompose,
    parse_td,
    path_decompose,
    to_nice,
    validate,
)

from .conftest import small_graphs


@pytest.mark.parametrize("graph, width", [(path_graph(3), 1), (complete_graph(4), 3), (cycle_graph(4), 2)])
def test_min_fill_width(graph, width):
    td = heuristic_decompose(graph)
    assert td.width == width
    assert validate(graph, td) is None


def test_heuristic_is_valid_on_small_graphs():
    for g in small_graphs():
        assert validate(g, heuristic_decompose(g)) is None
        assert validate(g, path_decompose(g)) is None


def test_path_decomposition_is_a_path():
    g = grid_graph(3, 4)
    td = path_decompose(g)
    degree = [0] * len(td.bags)
    for a, b in td.tree_edges:
        degree[a] += 1
        degree[b] += 1
    assert max(degree, default=0) <= 2
    assert td.width >= heuristic_decompose(g).width


def test_vertex_coverage_violation(p3):
    td = TreeDecomposition(3, (frozenset({0}), frozenset({2})), ((0, 1),))
    assert str(validate(p3, td)) == "vertex coverage violated: 2"


def test_subtree_connectivity_violation(p3):
    td = TreeDecomposition(3, (frozenset({0, 1}), frozenset({2}), frozenset({1, 2})), ((0, 1), (1, 2)))
    assert str(validate(p3, td)) == "subtree connectivity violated: 2"


def test_structure_and_edge_violations(p3):
    cyclic = TreeDecomposition(3, (frozenset({0, 1}), frozenset({1, 2}), frozenset({1})), ((0, 1), (1, 2), (0, 2)))
    assert str(validate(p3, cyclic)) == "tree structure violated"
    missing_edge = TreeDecomposition(3, (frozenset({0, 1}), frozenset({2})), ((0, 1),))
    assert str(validate(p3, missing_edge)) == "edge coverage violated: 2 3"


def test_parse_single_bag():
    td = parse_td("c K2\ns td 1 2 2\nb 1 1 2\n")
    assert td.width == 1
    assert td.bags == (frozenset({0, 1}),)


def test_emit_is_canonical(c4):
    text = emit_td(heuristic_decompose(c4))
    assert emit_td(parse_td(text)) == text
    assert text.startswith("s td ")


@pytest.mark.parametrize(
    "text",
    [
        "s td 1 2 4\nb 1 1 5\n",
        "b 1 1 2\n",
        "s td 2 2 2\nb 1 1 2\n",
        "s td 1 2 2\nb 1 1 2\n1 3\n",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_td(text)


def test_parse_checks_graph_size():
    with pytest.raises(InputError):
        parse_td("s td 1 2 2\nb 1 1 2\n", n=3)


def test_nice_anchored_path(p3):
    ntd = to_nice(p3, heuristic_decompose(p3), (0, 2))
    assert all({0, 2} <= node.bag for node in ntd.nodes)
    assert ntd.width <= 3
    assert sorted(ntd.introduced_edges()) == [(0, 1), (1, 2)]
    assert ntd.nodes[ntd.root].bag == frozenset({0, 2})


def test_nice_introduces_every_edge_once(k4):
    ntd = to_nice(k4, heuristic_decompose(k4))
    assert sorted(ntd.introduced_edges()) == list(k4.edges)
    assert ntd.nodes[ntd.root].bag == frozenset()


def test_nice_shape_on_random_graphs():
    for seed in range(5):
        g = random_connected_graph(9, 0.3, seed)
        ntd = to_nice(g, heuristic_decompose(g), (seed % 9,))
        assert sorted(ntd.introduced_edges()) == list(g.edges)
        for i, node in enumerate(ntd.nodes):
            assert all(c < i for c in node.children)
            if node.kind is NodeKind.JOIN:
                assert [ntd.nodes[c].bag for c in node.children] == [node.bag, node.bag]
            elif node.kind is NodeKind.LEAF:
                assert node.bag == frozenset({seed % 9})
        assert validate(g, ntd.flatten()) is None


def test_nice_rejects_bad_input(p3):
    with pytest.raises(InputError):
        to_nice(p3, heuristic_decompose(p3), (0, 0))
    with pytest.raises(InputError):
        to_nice(p3, TreeDecomposition(3, (frozenset({0, 1}),), ()))
