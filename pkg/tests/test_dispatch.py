import pytest

from cutcraft.dispatch import auto_select, solve
from cutcraft.errors import InputError
from cutcraft.graph import complete_graph, grid_graph, path_graph
from cutcraft.models import Algorithm, Problem
from cutcraft.oracle import oracle


def test_auto_picks_oracle_for_small_graphs(k4):
    assert auto_select(k4, Problem.CMC) is Algorithm.ORACLE


def test_auto_falls_through_the_ladder():
    assert auto_select(complete_graph(20), Problem.MMC) is Algorithm.TWINCOVER
    assert auto_select(grid_graph(4, 5), Problem.CMC) is Algorithm.TWDP
    assert auto_select(path_graph(20), Problem.CMC_ST) is Algorithm.TWDP
    assert auto_select(grid_graph(9, 9), Problem.CMC) is Algorithm.RANK
    assert auto_select(grid_graph(16, 16), Problem.MMC) is Algorithm.CUTCOUNT


@pytest.mark.parametrize(
    "algorithm",
    [Algorithm.ORACLE, Algorithm.TWDP, Algorithm.RANK, Algorithm.CUTCOUNT, Algorithm.TWINCOVER, Algorithm.CLIQUEWIDTH],
)
@pytest.mark.parametrize("problem", [Problem.CMC, Problem.MMC])
def test_every_algorithm_agrees_with_the_oracle(paw, algorithm, problem):
    report = solve(paw, problem, algorithm, repeats=20, seed=2)
    assert report.algorithm is algorithm
    assert report.optimum == oracle(paw, problem).optimum


@pytest.mark.parametrize("algorithm", [Algorithm.TWDP, Algorithm.RANK, Algorithm.CLIQUEWIDTH, Algorithm.AUTO])
def test_anchored(paw, algorithm):
    report = solve(paw, Problem.CMC_ST, algorithm, anchors=(0, 3))
    assert report.optimum == oracle(paw, Problem.CMC_ST, (0, 3)).optimum


def test_rejections(paw):
    with pytest.raises(InputError):
        solve(paw, Problem.MMC_ST, Algorithm.TWINCOVER, anchors=(0, 3))
    with pytest.raises(InputError):
        solve(paw, Problem.CMC, Algorithm.WINWIN)
    with pytest.raises(InputError):
        solve(paw, Problem.CMC_ST, Algorithm.TWDP)
