"""Connectivity-aware partition DP over anchored nice tree decompositions.

A table entry is keyed by (S-partition, T-partition) of the bag; the S side
of the bag is the ground set of the S-partition and everything else in the bag
is on the T side. Connected-cut runs do not track T (its key part is None).
Entries below zero never exist: infeasible keys are simply absent.
"""
from __future__ import annotations

import logging
import time
from typing import Callable, Collection, Optional

from .errors import InputError
from .graph import Graph
from .models import Algorithm, Problem, SolveReport
from .partition import Partition
from .treedec import NiceNode, NiceTreeDecomposition, NodeKind, TreeDecomposition, heuristic_decompose, to_nice, validate

logger = logging.getLogger("cutcraft.dp")

Key = tuple[Partition, Optional[Partition]]
Table = dict[Key, tuple[int, tuple]]
Compress = Callable[[Table], Table]


def _put(table: Table, key: Key, value: int, back: tuple) -> None:
    old = table.get(key)
    if old is None or value > old[0]:
        table[key] = (value, back)


class PartitionDP:
    def __init__(
        self,
        g: Graph,
        ntd: NiceTreeDecomposition,
        *,
        minimal: bool,
        forbid_s: Collection[int] = (),
        forbid_t: Collection[int] = (),
        compress: Optional[Compress] = None,
    ):
        if minimal and len(ntd.anchors) != 2:
            raise InputError("the minimal-cut DP needs a decomposition anchored at (s, t)")
        if not minimal and not ntd.anchors:
            raise InputError("the connected-cut DP needs a decomposition anchored at s")
        self.g = g
        self.ntd = ntd
        self.minimal = minimal
        self.forbid_s = frozenset(forbid_s)
        self.forbid_t = frozenset(forbid_t)
        self.compress = compress
        self.tables: list[Table] = []
        self.peak_cells = 0
        self.root_key: Optional[Key] = None

    def run(self) -> Optional[int]:
        for node in self.ntd.nodes:
            table = self._transition(node)
            if self.compress is not None:
                table = self.compress(table)
            self.tables.append(table)
            self.peak_cells = max(self.peak_cells, len(table))
        root = self.tables[-1]
        if not root:
            return None
        best = max(value for value, _ in root.values())
        self.root_key = next(key for key, (value, _) in root.items() if value == best)
        return best

    def witness(self) -> list[int]:
        if self.root_key is None:
            raise ValueError("no feasible root entry to reconstruct")
        side: set[int] = set()
        stack = [(self.ntd.root, self.root_key)]
        while stack:
            index, key = stack.pop()
            side.update(key[0].ground)
            back = self.tables[index][key][1]
            stack.extend(zip(self.ntd.nodes[index].children, back))
        return sorted(side)

    # -- transitions ---------------------------------------------------------

    def _transition(self, node: NiceNode) -> Table:
        if node.kind is NodeKind.LEAF:
            return self._leaf()
        child = self.tables[node.children[0]]
        if node.kind is NodeKind.INTRODUCE_VERTEX:
            return self._introduce_vertex(child, node.vertex)
        if node.kind is NodeKind.INTRODUCE_EDGE:
            return self._introduce_edge(child, *node.edge)
        if node.kind is NodeKind.FORGET:
            return self._forget(child, node.vertex)
        return self._join(child, self.tables[node.children[1]])

    def _leaf(self) -> Table:
        anchors = self.ntd.anchors
        s = anchors[0]
        t = anchors[1] if len(anchors) > 1 else None
        if s in self.forbid_s or (t is not None and t in self.forbid_t):
            return {}
        s_part = Partition.singletons([s])
        t_part = Partition.singletons([t]) if self.minimal else None
        return {(s_part, t_part): (0, ())}

    def _introduce_vertex(self, child: Table, v: int) -> Table:
        table: Table = {}
        for key, (value, _) in child.items():
            s_part, t_part = key
            if v not in self.forbid_s:
                _put(table, (s_part.add_singleton(v), t_part), value, (key,))
            if v not in self.forbid_t:
                _put(table, (s_part, t_part.add_singleton(v) if self.minimal else None), value, (key,))
        return table

    def _introduce_edge(self, child: Table, u: int, v: int) -> Table:
        table: Table = {}
        for key, (value, _) in child.items():
            s_part, t_part = key
            u_in_s, v_in_s = u in s_part, v in s_part
            if u_in_s and v_in_s:
                _put(table, (s_part.merge(u, v), t_part), value, (key,))
            elif not u_in_s and not v_in_s:
                _put(table, (s_part, t_part.merge(u, v) if self.minimal else None), value, (key,))
            else:
                _put(table, key, value + 1, (key,))
        return table

    def _forget(self, child: Table, v: int) -> Table:
        # a singleton block that leaves the bag can never reach the anchor of its side
        table: Table = {}
        for key, (value, _) in child.items():
            s_part, t_part = key
            if v in s_part:
                if s_part.is_singleton(v):
                    continue
                _put(table, (s_part.remove(v), t_part), value, (key,))
            elif self.minimal:
                if t_part.is_singleton(v):
                    continue
                _put(table, (s_part, t_part.remove(v)), value, (key,))
            else:
                _put(table, key, value, (key,))
        return table

    def _join(self, left: Table, right: Table) -> Table:
        by_side: dict[frozenset[int], list] = {}
        for key, (value, _) in right.items():
            by_side.setdefault(key[0].ground, []).append((key, value))
        table: Table = {}
        for lkey, (lvalue, _) in left.items():
            for rkey, rvalue in by_side.get(lkey[0].ground, ()):
                s_part = lkey[0].join(rkey[0])
                t_part = lkey[1].join(rkey[1]) if self.minimal else None
                _put(table, (s_part, t_part), lvalue + rvalue, (lkey, rkey))
        return table


# -- solvers -----------------------------------------------------------------


def _report(g, problem, algorithm, optimum, witness, anchors, start, peak) -> SolveReport:
    return SolveReport(
        problem=problem,
        algorithm=algorithm,
        n=g.n,
        m=g.m,
        optimum=optimum,
        witness=witness,
        anchors=list(anchors) if problem.anchored else None,
        elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
        peak_cells=peak,
    )


def _solve_st(
    g: Graph,
    ntd: NiceTreeDecomposition,
    problem: Problem,
    *,
    forbid_s: Collection[int] = (),
    forbid_t: Collection[int] = (),
    compress: Optional[Compress] = None,
    algorithm: Algorithm = Algorithm.TWDP,
) -> SolveReport:
    start = time.perf_counter()
    if len(ntd.anchors) != 2:
        raise InputError(f"{problem.value} needs a decomposition anchored at (s, t)")
    g.require_connected()
    dp = PartitionDP(g, ntd, minimal=problem.minimal, forbid_s=forbid_s, forbid_t=forbid_t, compress=compress)
    optimum = dp.run()
    witness = dp.witness() if optimum is not None else None
    return _report(g, problem, algorithm, optimum, witness, ntd.anchors, start, dp.peak_cells)


def solve_mmc_st(g: Graph, ntd: NiceTreeDecomposition, **options) -> SolveReport:
    """Maximum minimal s-t cut; s and t are the anchors of ntd."""
    return _solve_st(g, ntd, Problem.MMC_ST, **options)


def solve_cmc_st(g: Graph, ntd: NiceTreeDecomposition, **options) -> SolveReport:
    """Connected maximum s-t cut: s in S, t outside, G[S] connected."""
    return _solve_st(g, ntd, Problem.CMC_ST, **options)


def _prepare(g: Graph, td: Optional[TreeDecomposition]) -> TreeDecomposition:
    g.require_connected()
    if td is None:
        return heuristic_decompose(g)
    violation = validate(g, td)
    if violation is not None:
        raise InputError(f"invalid tree decomposition: {violation}")
    return td


def solve_mmc(
    g: Graph,
    td: Optional[TreeDecomposition] = None,
    *,
    compress: Optional[Compress] = None,
    algorithm: Algorithm = Algorithm.TWDP,
) -> SolveReport:
    """Vertex 0 stays in S (sides are interchangeable); run t over min(V - S) with 1..t-1 forced into S."""
    start = time.perf_counter()
    td = _prepare(g, td)
    best, best_witness, peak = None, None, 0
    for t in range(1, g.n):
        dp = PartitionDP(
            g, to_nice(g, td, (0, t), validated=True), minimal=True, forbid_t=range(1, t), compress=compress
        )
        value = dp.run()
        peak = max(peak, dp.peak_cells)
        if value is not None and (best is None or value > best):
            best, best_witness = value, dp.witness()
    logger.info("mmc via %s on n=%d: %s", algorithm.value, g.n, best)
    return _report(g, Problem.MMC, algorithm, best, best_witness, (), start, peak)


def solve_cmc(
    g: Graph,
    td: Optional[TreeDecomposition] = None,
    *,
    compress: Optional[Compress] = None,
    algorithm: Algorithm = Algorithm.TWDP,
) -> SolveReport:
    """One run per anchor s = min(S); the empty cut scores 0 and is dominated by S = {s}."""
    start = time.perf_counter()
    td = _prepare(g, td)
    best, best_witness, peak = None, None, 0
    for s in range(g.n):
        dp = PartitionDP(g, to_nice(g, td, (s,), validated=True), minimal=False, forbid_s=range(s), compress=compress)
        value = dp.run()
        peak = max(peak, dp.peak_cells)
        if value is not None and (best is None or value > best):
            best, best_witness = value, dp.witness()
    if best is None:
        best, best_witness = 0, []
    logger.info("cmc via %s on n=%d: %s", algorithm.value, g.n, best)
    return _report(g, Problem.CMC, algorithm, best, best_witness, (), start, peak)
