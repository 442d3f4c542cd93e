import pytest

from cutcraft.clique_width import (
    build_decomposition_tree,
    cross_edges,
    emit_cw,
    evaluate_cw,
    is_twin_set,
    linear_expression,
    load_cw,
    parse_cw,
    random_cograph_expression,
    solve_cliquewidth,
    twin_classes,
)
from cutcraft.errors import BudgetExceeded, InputError
from cutcraft.graph import Graph, complete_graph, path_graph, verify_report
from cutcraft.models import Algorithm, Problem
from cutcraft.oracle import oracle

from .conftest import small_graphs

K2 = "(join 1 2 (union (intro 1 1) (intro 2 2)))"


def test_parse_and_evaluate_edge():
    expr, g = evaluate_cw(K2)
    assert expr.width == 2 and expr.n == 2
    assert g == complete_graph(2)
    assert emit_cw(expr) == K2 + "\n"


def test_relabel_then_join_builds_a_triangle():
    text = "(join 1 2 (union (relabel 2 1 (join 1 2 (union (intro 1 1) (intro 2 2)))) (intro 3 2)))"
    _, g = evaluate_cw(text)
    assert g == complete_graph(3)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "(intro 1 1))",
        "(union (intro 1 1) (intro 2 1)",
        "(intro 1 1) (intro 2 1)",
        "(intro 1 x)",
        "(union (intro 1 1))",
        "(join 1 1 (intro 1 1))",
        "(union (intro 1 1) (intro 1 2))",
        "(intro 1 0)",
        "(union (intro 1 1) (intro 3 1))",
        "(blend 1 2)",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_cw(text)


def test_width_bound_is_enforced():
    with pytest.raises(InputError):
        parse_cw(K2, width=1)


def test_load_checks_the_graph(p3):
    with pytest.raises(InputError):
        load_cw(K2, p3)
    assert load_cw(K2, complete_graph(2)).n == 2


def test_linear_expression_evaluates_back():
    for g in small_graphs(sample_five=20):
        _, built = evaluate_cw(linear_expression(g))
        assert built == g
    with pytest.raises(InputError):
        linear_expression(Graph(0, ()))


def test_cograph_expression_uses_two_labels():
    for seed in range(5):
        expr = random_cograph_expression(7, seed)
        _, g = evaluate_cw(expr)
        assert expr.width == 2
        assert g.n == 7
        assert g.component_count() == 1


def test_twin_classes(p3):
    assert twin_classes(p3, frozenset({0, 2})) == ((0, 2),)
    assert twin_classes(p3, frozenset({0, 1})) == ((0,), (1,))
    assert is_twin_set(p3, [0, 2], frozenset({0, 2}))
    assert not is_twin_set(p3, [0, 1], frozenset({0, 1}))


def test_decomposition_tree(p3):
    tree = build_decomposition_tree(p3, linear_expression(p3))
    root = tree.nodes[tree.root]
    assert root.vertices == frozenset({0, 1, 2})
    assert root.classes == ((0, 1, 2),)
    assert sum(1 for node in tree.nodes if node.vertex is not None) == 3
    with pytest.raises(InputError):
        build_decomposition_tree(complete_graph(3), linear_expression(p3))


def test_cap():
    g = path_graph(12)
    with pytest.raises(BudgetExceeded):
        build_decomposition_tree(g, linear_expression(g), cap=1)


def test_cross_edges():
    assert cross_edges(2, 1, 1, 3, True) == 7
    assert cross_edges(2, 1, 1, 3, False) == 0


def test_known_values(k4, c4):
    assert solve_cliquewidth(k4, Problem.CMC).optimum == 4
    assert solve_cliquewidth(c4, Problem.CMC).optimum == 2
    assert solve_cliquewidth(c4, Problem.MMC).optimum == 2
    assert solve_cliquewidth(Graph(1, ()), Problem.MMC).optimum is None


@pytest.mark.parametrize("problem", [Problem.CMC, Problem.MMC])
def test_matches_oracle_on_small_graphs(problem):
    for g in small_graphs(sample_five=25):
        report = solve_cliquewidth(g, problem, cap=8)
        assert report.algorithm is Algorithm.CLIQUEWIDTH
        assert report.optimum == oracle(g, problem).optimum
        if report.optimum is not None:
            assert verify_report(g, report)


@pytest.mark.parametrize("problem", [Problem.CMC, Problem.MMC])
def test_cographs_match_oracle(problem):
    for seed in range(6):
        expr = random_cograph_expression(8, seed)
        _, g = evaluate_cw(expr)
        assert solve_cliquewidth(g, problem, expr).optimum == oracle(g, problem).optimum


def test_anchored(paw):
    for problem in (Problem.CMC_ST, Problem.MMC_ST):
        report = solve_cliquewidth(paw, problem, anchors=(0, 3), cap=8)
        assert report.optimum == oracle(paw, problem, (0, 3)).optimum
        assert report.anchors == [0, 3]


@pytest.mark.slow
@pytest.mark.parametrize("problem", [Problem.CMC, Problem.MMC])
def test_large_cograph_sweep(problem):
    for seed in range(30):
        expr = random_cograph_expression(14, seed)
        _, g = evaluate_cw(expr)
        assert solve_cliquewidth(g, problem, expr).optimum == oracle(g, problem).optimum
