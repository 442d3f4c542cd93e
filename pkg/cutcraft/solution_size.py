"""Parameterized by the solution size k: a leafy spanning tree answers yes outright, else an exact DP decides."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .cut_count import find_cutcount_witness
from .errors import InputError
from .graph import Graph
from .models import Algorithm, DecisionReport, Problem
from .oracle import check_anchors
from .rank_based import solve_cmc_rank, solve_cmc_st_rank, solve_mmc_rank, solve_mmc_st_rank
from .treedec import TreeDecomposition, heuristic_decompose, path_decompose, to_nice, validate

logger = logging.getLogger("cutcraft.solve")


@dataclass(frozen=True)
class WinWin:
    """Either a connected side with at least k cut edges, or a path decomposition for the exact fallback."""

    leaves: int
    witness: Optional[list[int]] = None
    td: Optional[TreeDecomposition] = None

    @property
    def yes(self) -> bool:
        return self.witness is not None


def leafy_spanning_tree(g: Graph) -> tuple[list[int], list[int]]:
    """Grow from a maximum-degree vertex, always expanding the leaf with the most vertices still outside.

    Returns (internal vertices, leaves).
    """
    if g.n == 0:
        return [], []
    root = max(g.vertices, key=lambda v: (g.degree(v), -v))
    in_tree = {root} | set(g.neighbors(root))
    internal = [root]
    leaves = set(g.neighbors(root))
    while len(in_tree) < g.n:
        best = max(sorted(leaves), key=lambda v: sum(u not in in_tree for u in g.neighbors(v)))
        fresh = [u for u in g.neighbors(best) if u not in in_tree]
        if not fresh:
            raise InputError("graph is not connected")
        leaves.discard(best)
        internal.append(best)
        leaves.update(fresh)
        in_tree.update(fresh)
    return sorted(internal), sorted(leaves)


def win_win(g: Graph, k: int) -> WinWin:
    if k < 1:
        raise InputError(f"solution size k={k} must be at least 1")
    g.require_connected()
    internal, leaves = leafy_spanning_tree(g)
    if len(leaves) >= k:
        logger.debug("spanning tree with %d leaves answers k=%d", len(leaves), k)
        return WinWin(len(leaves), witness=internal)
    return WinWin(len(leaves), td=path_decompose(g))


def solve_k(
    g: Graph,
    k: int,
    problem: Problem,
    *,
    seed: Optional[int] = None,
    anchors: Optional[Sequence[int]] = None,
    algorithm: Algorithm = Algorithm.RANK,
    repeats: Optional[int] = None,
    td: Optional[TreeDecomposition] = None,
) -> DecisionReport:
    """Is there a feasible cut of size at least k? A yes always carries a verified witness.

    A supplied td replaces both the path decomposition of the spanning-tree fallback and the heuristic one.
    """
    g.require_connected()
    anchors = check_anchors(g, problem, anchors)
    if algorithm not in (Algorithm.RANK, Algorithm.CUTCOUNT):
        raise InputError(f"solution-size driver runs rank or cutcount, not {algorithm.value}")
    if td is not None:
        violation = validate(g, td)
        if violation is not None:
            raise InputError(f"invalid tree decomposition: {violation}")

    fallback = None
    if problem is Problem.CMC and k >= 1:
        outcome = win_win(g, k)
        if outcome.yes:
            return DecisionReport(problem=problem, k=k, answer=True, route="spanning-tree", witness=outcome.witness)
        fallback = outcome.td
    if td is None:
        td = heuristic_decompose(g) if fallback is None else fallback
    route = f"{algorithm.value} (width {td.width})"

    if algorithm is Algorithm.CUTCOUNT:
        witness = find_cutcount_witness(g, problem, k, anchors=anchors or None, repeats=repeats, seed=seed, td=td)
        return DecisionReport(problem=problem, k=k, answer=witness is not None, route=route, witness=witness, seed=seed)

    if problem.anchored:
        solver = solve_mmc_st_rank if problem.minimal else solve_cmc_st_rank
        report = solver(g, to_nice(g, td, anchors))
    else:
        report = (solve_mmc_rank if problem.minimal else solve_cmc_rank)(g, td)
    answer = report.optimum is not None and report.optimum >= k
    logger.info("%s with k=%d via %s: %s", problem.value, k, route, "yes" if answer else "no")
    return DecisionReport(problem=problem, k=k, answer=answer, route=route, witness=report.witness if answer else None)
