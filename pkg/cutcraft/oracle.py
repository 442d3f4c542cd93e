"""Exhaustive ground truth: every subset, in increasing bitmask order."""
import logging
import time
from typing import Optional, Sequence

from .config import settings
from .errors import BudgetExceeded, InputError
from .graph import Graph, mask_connected, mask_cut_size, members
from .models import Algorithm, Problem, SolveReport

logger = logging.getLogger("cutcraft.oracle")


def check_anchors(g: Graph, problem: Problem, anchors: Optional[Sequence[int]]) -> tuple[int, ...]:
    if not problem.anchored:
        if anchors:
            raise InputError(f"problem {problem.value} takes no anchors")
        return ()
    if anchors is None or len(anchors) != 2:
        raise InputError(f"problem {problem.value} needs anchors s,t")
    s, t = anchors
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise InputError("anchor is not a vertex of the graph")
    if s == t:
        raise InputError("anchors s and t must differ")
    return (s, t)


def oracle(
    g: Graph,
    problem: Problem,
    anchors: Optional[Sequence[int]] = None,
    *,
    limit: Optional[int] = None,
) -> SolveReport:
    start = time.perf_counter()
    limit = settings.ORACLE_LIMIT if limit is None else limit
    if g.n > limit:
        raise BudgetExceeded(f"oracle limited to n <= {limit}, graph has n={g.n}")
    g.require_connected()
    anchors = check_anchors(g, problem, anchors)
    full = g.full_mask
    need = 1 << anchors[0] if anchors else 0
    avoid = 1 << anchors[1] if anchors else 0

    best, best_sub = -1, None
    for sub in range(full + 1):
        if sub & need != need or sub & avoid:
            continue
        if problem.minimal and (sub == 0 or sub == full):
            continue
        size = mask_cut_size(g, sub)
        if size <= best:
            continue
        if not mask_connected(g, sub):
            continue
        if problem.minimal and not mask_connected(g, full & ~sub):
            continue
        best, best_sub = size, sub

    elapsed = (time.perf_counter() - start) * 1000
    logger.debug("oracle %s on n=%d: %s", problem.value, g.n, best if best_sub is not None else "none")
    return SolveReport(
        problem=problem,
        algorithm=Algorithm.ORACLE,
        n=g.n,
        m=g.m,
        optimum=None if best_sub is None else best,
        witness=None if best_sub is None else members(best_sub),
        anchors=list(anchors) or None,
        elapsed_ms=round(elapsed, 3),
    )
