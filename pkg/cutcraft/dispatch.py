"""Route a solve request to one algorithm, choosing one when asked for auto."""
from __future__ import annotations

import logging
from typing import Optional, Sequence

from . import dp_partition, rank_based
from .clique_width import CwExpression, solve_cliquewidth
from .config import settings
from .cut_count import solve_cutcount
from .errors import BudgetExceeded, InputError
from .graph import Graph
from .models import Algorithm, Problem, SolveReport
from .oracle import check_anchors, oracle
from .treedec import TreeDecomposition, heuristic_decompose, to_nice
from .twin_cover import SOLVERS as TWINCOVER_SOLVERS, compute_twin_cover

logger = logging.getLogger("cutcraft.solve")

_TREE_SOLVERS = {
    Algorithm.TWDP: {
        Problem.CMC: dp_partition.solve_cmc,
        Problem.MMC: dp_partition.solve_mmc,
        Problem.CMC_ST: dp_partition.solve_cmc_st,
        Problem.MMC_ST: dp_partition.solve_mmc_st,
    },
    Algorithm.RANK: {
        Problem.CMC: rank_based.solve_cmc_rank,
        Problem.MMC: rank_based.solve_mmc_rank,
        Problem.CMC_ST: rank_based.solve_cmc_st_rank,
        Problem.MMC_ST: rank_based.solve_mmc_st_rank,
    },
}


def auto_select(g: Graph, problem: Problem, td: Optional[TreeDecomposition] = None) -> Algorithm:
    if g.n <= settings.AUTO_ORACLE_MAX_N:
        return Algorithm.ORACLE
    if not problem.anchored:
        try:
            compute_twin_cover(g, settings.AUTO_TWINCOVER_MAX)
            return Algorithm.TWINCOVER
        except BudgetExceeded:
            pass
    width = (td or heuristic_decompose(g)).width
    if width <= settings.AUTO_TWDP_MAX_WIDTH:
        return Algorithm.TWDP
    if width <= settings.AUTO_RANK_MAX_WIDTH:
        return Algorithm.RANK
    return Algorithm.CUTCOUNT


def solve(
    g: Graph,
    problem: Problem,
    algorithm: Algorithm = Algorithm.AUTO,
    *,
    anchors: Optional[Sequence[int]] = None,
    td: Optional[TreeDecomposition] = None,
    cw_expr: Optional[CwExpression] = None,
    repeats: Optional[int] = None,
    seed: Optional[int] = None,
) -> SolveReport:
    g.require_connected()
    anchors = check_anchors(g, problem, anchors)
    if algorithm is Algorithm.AUTO:
        algorithm = auto_select(g, problem, td)
        logger.info("auto selected %s for %s on n=%d", algorithm.value, problem.value, g.n)

    if algorithm is Algorithm.ORACLE:
        return oracle(g, problem, anchors)
    if algorithm in _TREE_SOLVERS:
        solver = _TREE_SOLVERS[algorithm][problem]
        if problem.anchored:
            return solver(g, to_nice(g, td or heuristic_decompose(g), anchors))
        return solver(g, td)
    if algorithm is Algorithm.CUTCOUNT:
        return solve_cutcount(g, problem, anchors=anchors or None, repeats=repeats, seed=seed, td=td)
    if algorithm is Algorithm.TWINCOVER:
        if problem.anchored:
            raise InputError(f"twin-cover solver does not take anchored problems ({problem.value})")
        return TWINCOVER_SOLVERS[problem](g)
    if algorithm is Algorithm.CLIQUEWIDTH:
        return solve_cliquewidth(g, problem, cw_expr, anchors=anchors or None)
    raise InputError(f"algorithm {algorithm.value} answers decision queries only; pass k")
