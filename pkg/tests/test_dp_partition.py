import itertools

import pytest

from cutcraft.dp_partition import PartitionDP, solve_cmc, solve_cmc_st, solve_mmc, solve_mmc_st
from cutcraft.errors import DisconnectedGraphError, InputError
from cutcraft.graph import Graph, grid_graph, verify_report
from cutcraft.models import Problem
from cutcraft.oracle import oracle
from cutcraft.treedec import TreeDecomposition, heuristic_decompose, path_decompose, to_nice

from .conftest import exhaustive_graphs, random_graphs, random_sweep_graphs, small_graphs


def test_known_values(k4, c4, p3, star5):
    assert solve_cmc(k4).optimum == 4
    assert solve_cmc(c4).optimum == 2
    assert solve_cmc(star5).optimum == 5
    assert solve_mmc(p3).optimum == 1
    assert solve_mmc(k4).optimum == 4
    assert solve_mmc(c4).optimum == 2


def test_single_vertex():
    g = Graph(1, ())
    assert solve_cmc(g).optimum == 0
    assert solve_mmc(g).optimum is None


@pytest.mark.parametrize("solver, problem", [(solve_cmc, Problem.CMC), (solve_mmc, Problem.MMC)])
def test_matches_oracle_on_small_graphs(solver, problem):
    for g in small_graphs(sample_five=25):
        report = solver(g)
        assert report.optimum == oracle(g, problem).optimum
        if report.optimum is not None:
            assert verify_report(g, report)


@pytest.mark.parametrize("solver, problem", [(solve_cmc, Problem.CMC), (solve_mmc, Problem.MMC)])
def test_path_decomposition_gives_same_optimum(solver, problem):
    g = grid_graph(2, 4)
    assert solver(g, path_decompose(g)).optimum == oracle(g, problem).optimum


def test_anchored(p3, paw):
    report = solve_cmc_st(p3, to_nice(p3, heuristic_decompose(p3), (0, 2)))
    assert report.optimum == 1
    assert report.anchors == [0, 2]
    for g in random_graphs(count=6):
        s, t = 0, g.n - 1
        ntd = to_nice(g, heuristic_decompose(g), (s, t))
        assert solve_cmc_st(g, ntd).optimum == oracle(g, Problem.CMC_ST, (s, t)).optimum
        assert solve_mmc_st(g, ntd).optimum == oracle(g, Problem.MMC_ST, (s, t)).optimum
    ntd = to_nice(paw, heuristic_decompose(paw), (0, 1))
    report = solve_mmc_st(paw, ntd)
    assert report.optimum == oracle(paw, Problem.MMC_ST, (0, 1)).optimum
    assert verify_report(paw, report)


def test_anchors_required(p3):
    single = to_nice(p3, heuristic_decompose(p3), (0,))
    with pytest.raises(InputError):
        solve_mmc_st(p3, single)
    with pytest.raises(InputError):
        PartitionDP(p3, to_nice(p3, heuristic_decompose(p3)), minimal=False)


def test_rejects_invalid_input(p3):
    with pytest.raises(InputError):
        solve_cmc(p3, TreeDecomposition(3, (frozenset({0, 1}),), ()))
    with pytest.raises(DisconnectedGraphError):
        solve_mmc(Graph(3, ((0, 1),)))


def test_peak_cells_reported(c4):
    assert solve_mmc(c4).peak_cells > 0


@pytest.mark.slow
def test_exhaustive_and_random_sweep():
    for g in itertools.chain(exhaustive_graphs(), random_sweep_graphs()):
        assert solve_cmc(g).optimum == oracle(g, Problem.CMC).optimum
        assert solve_mmc(g).optimum == oracle(g, Problem.MMC).optimum
