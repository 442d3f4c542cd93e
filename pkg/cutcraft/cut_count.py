"""Cut & Count: parity of consistent-cut counts under random isolation weights.

Every vertex of a bag carries a class. S is split into a left and a right
part (a consistent cut of S); for minimal cuts T is split the same way, for
connected cuts T is a single class. Anchors are pinned to the left parts, so a
solution whose sides have c_S and c_T components is counted 2^(c_S-1+c_T-1)
times and survives modulo 2 only when both sides are connected.

Cells are (cut size, weight of S) pairs; a table maps a class assignment to
the set of cells whose count is odd.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Collection, Iterator, Optional, Sequence

import numpy as np

from .config import default_repeats
from .errors import InputError
from .graph import Graph, mask_cut_size, mask_feasible, mask_of, members
from .models import Algorithm, Problem, SolveReport
from .oracle import check_anchors
from .treedec import NiceNode, NiceTreeDecomposition, NodeKind, TreeDecomposition, heuristic_decompose, to_nice

logger = logging.getLogger("cutcraft.cutcount")

S_LEFT, S_RIGHT, T_LEFT, T_RIGHT = 0, 1, 2, 3
T_ANY = T_LEFT

Assignment = tuple[tuple[int, int], ...]
CountTable = dict[Assignment, set[tuple[int, int]]]


def _with(key: Assignment, v: int, cls: int) -> Assignment:
    return tuple(sorted(key + ((v, cls),)))


def _without(key: Assignment, v: int) -> Assignment:
    return tuple(item for item in key if item[0] != v)


def _class_of(key: Assignment, v: int) -> int:
    for u, cls in key:
        if u == v:
            return cls
    raise KeyError(v)


def _toggle(table: CountTable, key: Assignment, cells) -> None:
    bucket = table.setdefault(key, set())
    bucket.symmetric_difference_update(cells)


def _prune(table: CountTable) -> CountTable:
    return {key: cells for key, cells in table.items() if cells}


class CutCountDP:
    def __init__(
        self,
        g: Graph,
        ntd: NiceTreeDecomposition,
        weights: Sequence[int],
        *,
        minimal: bool,
        forbid_s: Collection[int] = (),
        forbid_t: Collection[int] = (),
    ):
        if minimal and len(ntd.anchors) != 2:
            raise InputError("the minimal-cut count needs a decomposition anchored at (s, t)")
        if not minimal and not ntd.anchors:
            raise InputError("the connected-cut count needs a decomposition anchored at s")
        self.g = g
        self.ntd = ntd
        self.weights = [int(w) for w in weights]
        self.minimal = minimal
        self.forbid_s = frozenset(forbid_s)
        self.forbid_t = frozenset(forbid_t)
        self.anchor_set = frozenset(ntd.anchors)
        self.tables: list[CountTable] = []
        self.peak_cells = 0

    def run(self) -> set[tuple[int, int]]:
        """Odd cells of the root."""
        self.tables = []
        for node in self.ntd.nodes:
            table = self.transition(node)
            self.tables.append(table)
            self.peak_cells = max(self.peak_cells, sum(len(cells) for cells in table.values()))
        root = self.tables[-1]
        return set().union(*root.values()) if root else set()

    def transition(self, node: NiceNode) -> CountTable:
        if node.kind is NodeKind.LEAF:
            return self._leaf()
        child = self.tables[node.children[0]]
        if node.kind is NodeKind.INTRODUCE_VERTEX:
            return self._introduce_vertex(child, node.vertex)
        if node.kind is NodeKind.INTRODUCE_EDGE:
            return self._introduce_edge(child, *node.edge)
        if node.kind is NodeKind.FORGET:
            return self._forget(child, node.vertex)
        return self._join(child, self.tables[node.children[1]], node.bag)

    def _leaf(self) -> CountTable:
        anchors = self.ntd.anchors
        if anchors[0] in self.forbid_s:
            return {}
        key: Assignment = ((anchors[0], S_LEFT),)
        if len(anchors) > 1:
            if anchors[1] in self.forbid_t:
                return {}
            key = _with(key, anchors[1], T_LEFT)
        return {key: {(0, 0)}}

    def _introduce_vertex(self, child: CountTable, v: int) -> CountTable:
        s_classes = () if v in self.forbid_s else (S_LEFT, S_RIGHT)
        t_classes = () if v in self.forbid_t else ((T_LEFT, T_RIGHT) if self.minimal else (T_ANY,))
        weight = self.weights[v]
        table: CountTable = {}
        for key, cells in child.items():
            for cls in s_classes:
                _toggle(table, _with(key, v, cls), {(size, w + weight) for size, w in cells})
            for cls in t_classes:
                _toggle(table, _with(key, v, cls), cells)
        return _prune(table)

    def _introduce_edge(self, child: CountTable, u: int, v: int) -> CountTable:
        table: CountTable = {}
        for key, cells in child.items():
            cu, cv = _class_of(key, u), _class_of(key, v)
            u_in_s, v_in_s = cu in (S_LEFT, S_RIGHT), cv in (S_LEFT, S_RIGHT)
            if u_in_s != v_in_s:
                _toggle(table, key, {(size + 1, w) for size, w in cells})
            elif cu == cv:
                _toggle(table, key, cells)
            # an edge across a consistent cut of one side counts nothing
        return _prune(table)

    def _forget(self, child: CountTable, v: int) -> CountTable:
        table: CountTable = {}
        for key, cells in child.items():
            _toggle(table, _without(key, v), cells)
        return _prune(table)

    def _join(self, left: CountTable, right: CountTable, bag: frozenset[int]) -> CountTable:
        table: CountTable = {}
        for key, lcells in left.items():
            rcells = right.get(key)
            if not rcells:
                continue
            # bag vertices of S were weighted in both branches
            shared = sum(
                self.weights[v] for v, cls in key if cls in (S_LEFT, S_RIGHT) and v not in self.anchor_set
            )
            out: set[tuple[int, int]] = set()
            for size1, w1 in lcells:
                for size2, w2 in rcells:
                    cell = (size1 + size2, w1 + w2 - shared)
                    if cell in out:
                        out.remove(cell)
                    else:
                        out.add(cell)
            _toggle(table, key, out)
        return _prune(table)


def count_consistent_cuts(g: Graph, vertices: Collection[int], pinned: int) -> int:
    """Consistent cuts (V1, V2) of G[vertices] with pinned in V1, by enumeration."""
    vertices = sorted(set(vertices))
    if pinned not in vertices:
        raise InputError(f"pinned vertex {pinned + 1} is not in the vertex set")
    free = [v for v in vertices if v != pinned]
    domain = mask_of(vertices)
    count = 0
    for code in range(1 << len(free)):
        second = mask_of(v for i, v in enumerate(free) if code >> i & 1)
        first = domain & ~second
        if all(g.masks[v] & second == 0 for v in members(first)):
            count += 1
    return count


# -- drivers -----------------------------------------------------------------


@dataclass(frozen=True)
class _Run:
    ntd: NiceTreeDecomposition
    forbid_s: frozenset[int]
    forbid_t: frozenset[int]


def _runs(g: Graph, problem: Problem, anchors: tuple[int, ...], td: TreeDecomposition) -> Iterator[_Run]:
    if problem.anchored:
        yield _Run(to_nice(g, td, anchors, validated=True), frozenset(), frozenset())
    elif problem.minimal:
        for t in range(1, g.n):
            yield _Run(to_nice(g, td, (0, t), validated=True), frozenset(), frozenset(range(1, t)))
    else:
        for s in range(g.n):
            yield _Run(to_nice(g, td, (s,), validated=True), frozenset(range(s)), frozenset())


def sample_weights(n: int, repeats: int, seed: int) -> list[np.ndarray]:
    """One independent weight vector in 1..2n per repetition, from a split seed sequence."""
    streams = np.random.SeedSequence(seed).spawn(repeats)
    return [np.random.default_rng(stream).integers(1, 2 * n + 1, size=n) for stream in streams]


def _resolve(g: Graph, repeats: Optional[int], seed: Optional[int]) -> tuple[int, int]:
    if repeats is None:
        repeats = default_repeats(g.n)
    if repeats < 1:
        raise InputError("repeats must be at least 1")
    if seed is None:
        seed = int(np.random.SeedSequence().entropy)
    return repeats, seed


class _Search:
    def __init__(self, g: Graph, problem: Problem, weights: list[np.ndarray]):
        self.g = g
        self.problem = problem
        self.weights = weights
        self.peak_cells = 0

    def cells(self, run: _Run, weights, forbid_s=None, forbid_t=None) -> set[tuple[int, int]]:
        dp = CutCountDP(
            self.g,
            run.ntd,
            weights,
            minimal=self.problem.minimal,
            forbid_s=run.forbid_s if forbid_s is None else forbid_s,
            forbid_t=run.forbid_t if forbid_t is None else forbid_t,
        )
        cells = dp.run()
        self.peak_cells = max(self.peak_cells, dp.peak_cells)
        return cells

    def best_size(self, run: _Run, forbid_s=None, forbid_t=None) -> Optional[int]:
        best = None
        for weights in self.weights:
            sizes = [size for size, _ in self.cells(run, weights, forbid_s, forbid_t)]
            if sizes and (best is None or max(sizes) > best):
                best = max(sizes)
        return best

    def reaches(self, run: _Run, k: int, forbid_s=None, forbid_t=None) -> bool:
        for weights in self.weights:
            if any(size >= k for size, _ in self.cells(run, weights, forbid_s, forbid_t)):
                return True
        return False

    def self_reduce(self, run: _Run, k: int) -> Optional[list[int]]:
        """Fix vertices one at a time while some repetition still reaches k."""
        forbid_s, forbid_t = set(run.forbid_s), set(run.forbid_t)
        for v in self.g.vertices:
            if v in run.ntd.anchors or v in forbid_s or v in forbid_t:
                continue
            if self.reaches(run, k, forbid_s, forbid_t | {v}):
                forbid_t.add(v)
            elif self.reaches(run, k, forbid_s | {v}, forbid_t):
                forbid_s.add(v)
            else:
                logger.warning("self-reduction lost the solution at vertex %d", v + 1)
                return None
        side = mask_of(forbid_t) | (1 << run.ntd.anchors[0])
        if len(run.ntd.anchors) > 1:
            side &= ~(1 << run.ntd.anchors[1])
        if not mask_feasible(self.g, self.problem, side, run.ntd.anchors if self.problem.anchored else ()):
            return None
        if mask_cut_size(self.g, side) < k:
            return None
        return members(side)


def _prepare(g: Graph, problem: Problem, anchors, td) -> tuple[tuple[int, ...], TreeDecomposition]:
    g.require_connected()
    anchors = check_anchors(g, problem, anchors)
    return anchors, td if td is not None else heuristic_decompose(g)


def decide_cutcount(
    g: Graph,
    problem: Problem,
    k: int,
    *,
    anchors: Optional[Sequence[int]] = None,
    repeats: Optional[int] = None,
    seed: Optional[int] = None,
    td: Optional[TreeDecomposition] = None,
) -> bool:
    """Monte-Carlo decision: a yes is always right, a no may be a miss."""
    anchors, td = _prepare(g, problem, anchors, td)
    repeats, seed = _resolve(g, repeats, seed)
    if k <= 0 and not problem.minimal and not problem.anchored:
        return True
    search = _Search(g, problem, sample_weights(g.n, repeats, seed))
    return any(search.reaches(run, k) for run in _runs(g, problem, anchors, td))


def decide_mmc_cutcount(g: Graph, k: int, repeats: Optional[int] = None, seed: Optional[int] = None) -> bool:
    return decide_cutcount(g, Problem.MMC, k, repeats=repeats, seed=seed)


def decide_cmc_cutcount(g: Graph, k: int, repeats: Optional[int] = None, seed: Optional[int] = None) -> bool:
    return decide_cutcount(g, Problem.CMC, k, repeats=repeats, seed=seed)


def find_cutcount_witness(
    g: Graph,
    problem: Problem,
    k: int,
    *,
    anchors: Optional[Sequence[int]] = None,
    repeats: Optional[int] = None,
    seed: Optional[int] = None,
    td: Optional[TreeDecomposition] = None,
) -> Optional[list[int]]:
    """A verified feasible side of size at least k, or None when the search misses."""
    anchors, td = _prepare(g, problem, anchors, td)
    repeats, seed = _resolve(g, repeats, seed)
    search = _Search(g, problem, sample_weights(g.n, repeats, seed))
    for run in _runs(g, problem, anchors, td):
        if search.reaches(run, k):
            return search.self_reduce(run, k)
    return None


def solve_cutcount(
    g: Graph,
    problem: Problem,
    *,
    anchors: Optional[Sequence[int]] = None,
    repeats: Optional[int] = None,
    seed: Optional[int] = None,
    td: Optional[TreeDecomposition] = None,
    witness: bool = True,
) -> SolveReport:
    """Largest size with an odd cell over all repetitions: a certified lower bound, exact with high probability."""
    start = time.perf_counter()
    anchors, td = _prepare(g, problem, anchors, td)
    repeats, seed = _resolve(g, repeats, seed)
    search = _Search(g, problem, sample_weights(g.n, repeats, seed))
    best, best_run = None, None
    for run in _runs(g, problem, anchors, td):
        size = search.best_size(run)
        if size is not None and (best is None or size > best):
            best, best_run = size, run
    found = None
    if best is not None and witness:
        found = search.self_reduce(best_run, best)
        if found is not None:
            best = max(best, mask_cut_size(g, mask_of(found)))
    if best is None and not problem.minimal and not problem.anchored:
        best, found = 0, []
    logger.info("%s via cutcount on n=%d (repeats=%d, seed=%d): %s", problem.value, g.n, repeats, seed, best)
    return SolveReport(
        problem=problem,
        algorithm=Algorithm.CUTCOUNT,
        n=g.n,
        m=g.m,
        optimum=best,
        witness=found,
        anchors=list(anchors) or None,
        seed=seed,
        repeats=repeats,
        elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
        peak_cells=search.peak_cells,
    )
