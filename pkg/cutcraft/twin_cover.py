"""Twin-cover: minimum cover by branching and the cover/clique-type enumerations."""
from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .config import settings
from .errors import BudgetExceeded, CutcraftError, InputError
from .graph import Edge, Graph, mask_cut_size, mask_feasible, mask_of, members
from .models import Algorithm, Problem, SolveReport
from .partition import UnionFind

logger = logging.getLogger("cutcraft.twincover")


@dataclass(frozen=True)
class TwinCoverStructure:
    cover: frozenset[int]
    cliques: tuple[tuple[int, ...], ...]
    types: tuple[frozenset[int], ...]


def true_twins(g: Graph, u: int, v: int) -> bool:
    return g.has_edge(u, v) and g.masks[u] | 1 << u == g.masks[v] | 1 << v


def is_twin_cover(g: Graph, cover) -> bool:
    cover = set(cover)
    return all(u in cover or v in cover or true_twins(g, u, v) for u, v in g.edges)


def _branch_cover(edges: list[Edge], budget: int, what: str) -> frozenset[int]:
    """Smallest vertex set touching every listed edge, by iterative deepening."""

    def search(chosen: frozenset[int], room: int) -> Optional[frozenset[int]]:
        edge = next((e for e in edges if e[0] not in chosen and e[1] not in chosen), None)
        if edge is None:
            return chosen
        if room == 0:
            return None
        for v in edge:
            found = search(chosen | {v}, room - 1)
            if found is not None:
                return found
        return None

    for size in range(budget + 1):
        found = search(frozenset(), size)
        if found is not None:
            return found
    raise BudgetExceeded(f"{what} exceeds the budget of {budget}")


def compute_twin_cover(g: Graph, budget: Optional[int] = None) -> TwinCoverStructure:
    g.require_connected()
    budget = settings.TWINCOVER_BUDGET if budget is None else budget
    non_twin = [e for e in g.edges if not true_twins(g, *e)]
    cover = _branch_cover(non_twin, budget, "twin-cover")

    rest = g.full_mask & ~mask_of(cover)
    cliques = []
    while rest:
        seed = rest & -rest
        seen, stack = seed, seed
        while stack:
            low = stack & -stack
            stack ^= low
            fresh = g.masks[low.bit_length() - 1] & rest & ~seen
            seen |= fresh
            stack |= fresh
        cliques.append(tuple(members(seen)))
        rest &= ~seen
    types = tuple(frozenset(v for v in g.neighbors(z[0]) if v in cover) for z in cliques)
    logger.debug("twin-cover of size %d, %d cliques, %d types", len(cover), len(cliques), len(set(types)))
    return TwinCoverStructure(frozenset(cover), tuple(cliques), types)


def vertex_cover_number(g: Graph, budget: Optional[int] = None) -> int:
    budget = g.n if budget is None else budget
    return len(_branch_cover(list(g.edges), budget, "vertex cover"))


def clique_cut_contribution(z: int, p: int, a: int, b: int) -> int:
    """Cut edges at a clique of size z with p vertices in S; a and b count its type inside X - X' and X'."""
    if not 0 <= p <= z:
        raise ValueError(f"p={p} outside 0..{z}")
    return p * (z - p) + p * a + (z - p) * b


# -- shared machinery --------------------------------------------------------


class _Context:
    def __init__(self, g: Graph, structure: TwinCoverStructure):
        self.g = g
        self.structure = structure
        self.cover = sorted(structure.cover)
        self.cover_edges = [(u, v) for u, v in g.edges if u in structure.cover and v in structure.cover]
        groups: dict[frozenset[int], list[int]] = {}
        for j, t in enumerate(structure.types):
            groups.setdefault(t, []).append(j)
        self.type_list = sorted(groups, key=lambda t: sorted(t))
        self.type_cliques = [groups[t] for t in self.type_list]
        self.guesses = 0

    def subsets(self):
        for code in range(1 << len(self.cover)):
            yield frozenset(v for i, v in enumerate(self.cover) if code >> i & 1)

    def inner_cut(self, chosen: frozenset[int]) -> int:
        return sum(1 for u, v in self.cover_edges if (u in chosen) != (v in chosen))

    def values(self, j: int, chosen: frozenset[int]) -> list[int]:
        z = len(self.structure.cliques[j])
        t = self.structure.types[j]
        inside = len(t & chosen)
        return [clique_cut_contribution(z, p, len(t) - inside, inside) for p in range(z + 1)]

    def quotient_connected(self, side: frozenset[int], type_indices) -> bool:
        if not side:
            return False
        uf = UnionFind(sorted(side))
        for u, v in self.cover_edges:
            if u in side and v in side:
                uf.union(u, v)
        for i in type_indices:
            node = ("type", i)
            uf.add(node)
            for v in self.type_list[i] & side:
                uf.union(node, v)
        return len(uf.groups()) == 1

    def assemble(self, chosen: frozenset[int], counts: dict[int, int], expected: int, problem: Problem) -> list[int]:
        side = set(chosen)
        for j, p in counts.items():
            side.update(self.structure.cliques[j][:p])
        mask = mask_of(side)
        if mask_cut_size(self.g, mask) != expected or not mask_feasible(self.g, problem, mask):
            raise CutcraftError("twin-cover witness does not reproduce its cut size")
        return sorted(side)


def _argmax(values: list[int], low: int = 0, high: Optional[int] = None) -> int:
    high = len(values) - 1 if high is None else high
    return max(range(low, high + 1), key=lambda p: (values[p], -p))


def _single_clique(ctx: _Context, problem: Problem, side_is_clique_part: bool) -> tuple[Optional[int], Optional[list[int]]]:
    """Boundary guesses: one side lives inside a single clique, checked directly."""
    g = ctx.g
    best, best_side = None, None
    for j, clique in enumerate(ctx.structure.cliques):
        for q in range(1, len(clique) + 1):
            part = mask_of(clique[:q])
            side = part if side_is_clique_part else g.full_mask & ~part
            ctx.guesses += 1
            if not mask_feasible(g, problem, side):
                continue
            size = mask_cut_size(g, side)
            if best is None or size > best:
                best, best_side = size, members(side)
    return best, best_side


def _report(g, problem, start, optimum, witness, ctx) -> SolveReport:
    return SolveReport(
        problem=problem,
        algorithm=Algorithm.TWINCOVER,
        n=g.n,
        m=g.m,
        optimum=optimum,
        witness=witness,
        elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
        peak_cells=ctx.guesses,
    )


def _structure(g: Graph, structure: Optional[TwinCoverStructure], budget: Optional[int]) -> TwinCoverStructure:
    if structure is None:
        return compute_twin_cover(g, budget)
    if not is_twin_cover(g, structure.cover):
        raise InputError("supplied vertex set is not a twin-cover")
    return structure


# -- connected maximum cut ---------------------------------------------------


def solve_cmc_twincover(
    g: Graph, structure: Optional[TwinCoverStructure] = None, *, budget: Optional[int] = None
) -> SolveReport:
    start = time.perf_counter()
    g.require_connected()
    ctx = _Context(g, _structure(g, structure, budget))
    best, best_witness = 0, []

    # S avoids the cover: it sits inside one clique
    size, side = _single_clique(ctx, Problem.CMC, True)
    if size is not None and size > best:
        best, best_witness = size, side

    for chosen in ctx.subsets():
        if not chosen:
            continue
        relevant = [i for i, t in enumerate(ctx.type_list) if t & chosen]
        if not ctx.quotient_connected(chosen, relevant):
            continue
        base = ctx.inner_cut(chosen)
        off_value, on_value, on_counts, off_counts = {}, {}, {}, {}
        for i, cliques in enumerate(ctx.type_cliques):
            table = {j: ctx.values(j, chosen) for j in cliques}
            off_value[i] = sum(v[0] for v in table.values())
            off_counts[i] = {j: 0 for j in cliques}
            if i not in relevant:
                continue
            counts = {j: _argmax(v) for j, v in table.items()}
            total = sum(table[j][counts[j]] for j in cliques)
            if all(p == 0 for p in counts.values()):
                forced = max(cliques, key=lambda j: (table[j][_argmax(table[j], 1)] - table[j][0], -j))
                counts[forced] = _argmax(table[forced], 1)
                total += table[forced][counts[forced]] - table[forced][0]
            on_value[i], on_counts[i] = total, counts
        always = [i for i in relevant if on_value[i] >= off_value[i]]
        costly = [i for i in relevant if on_value[i] < off_value[i]]
        for pick in itertools.product((False, True), repeat=len(costly)):
            ctx.guesses += 1
            selected = always + [i for i, on in zip(costly, pick) if on]
            if not ctx.quotient_connected(chosen, selected):
                continue
            value = base + sum(
                on_value[i] if i in selected else off_value[i] for i in range(len(ctx.type_list))
            )
            if value > best:
                counts = {}
                for i in range(len(ctx.type_list)):
                    counts.update(on_counts[i] if i in selected else off_counts[i])
                best, best_witness = value, ctx.assemble(chosen, counts, value, Problem.CMC)
    logger.info("cmc via twin-cover (|X|=%d) on n=%d: %s", len(ctx.cover), g.n, best)
    return _report(g, Problem.CMC, start, best, best_witness, ctx)


# -- maximum minimal cut -----------------------------------------------------

S_ONLY, T_ONLY, BOTH = "s", "t", "both"


def _both_sides(tables: dict[int, list[int]]) -> tuple[Optional[int], dict[int, int]]:
    """Best counts with some clique vertex in S and some in T; flags DP over the cliques of one type."""
    states: dict[tuple[bool, bool], tuple[int, dict[int, int]]] = {(False, False): (0, {})}
    for j, values in tables.items():
        z = len(values) - 1
        grown: dict[tuple[bool, bool], tuple[int, dict[int, int]]] = {}
        for (has_s, has_t), (value, counts) in states.items():
            for p in range(z + 1):
                flags = (has_s or p >= 1, has_t or p <= z - 1)
                candidate = value + values[p]
                if flags not in grown or candidate > grown[flags][0]:
                    grown[flags] = (candidate, {**counts, j: p})
        states = grown
    if (True, True) not in states:
        return None, {}
    return states[(True, True)]


def solve_mmc_twincover(
    g: Graph, structure: Optional[TwinCoverStructure] = None, *, budget: Optional[int] = None
) -> SolveReport:
    start = time.perf_counter()
    g.require_connected()
    ctx = _Context(g, _structure(g, structure, budget))
    best, best_witness = None, None

    def consider(size, side):
        nonlocal best, best_witness
        if size is not None and (best is None or size > best):
            best, best_witness = size, side

    # S avoids the cover, or T does: that side sits inside one clique
    consider(*_single_clique(ctx, Problem.MMC, True))
    if ctx.cover:
        consider(*_single_clique(ctx, Problem.MMC, False))

    everything = frozenset(ctx.cover)
    for chosen in ctx.subsets():
        if not chosen or chosen == everything:
            continue
        other = everything - chosen
        base = ctx.inner_cut(chosen)
        options: list[list[tuple[str, int, dict[int, int]]]] = []
        for i, cliques in enumerate(ctx.type_cliques):
            t = ctx.type_list[i]
            tables = {j: ctx.values(j, chosen) for j in cliques}
            allowed = []
            if t & chosen:
                allowed.append((S_ONLY, sum(v[-1] for v in tables.values()), {j: len(v) - 1 for j, v in tables.items()}))
            if t & other:
                allowed.append((T_ONLY, sum(v[0] for v in tables.values()), {j: 0 for j in tables}))
            both = None
            if t & chosen and t & other:
                value, counts = _both_sides(tables)
                if value is not None:
                    both = (BOTH, value, counts)
            if both is not None:
                allowed = [both] + [o for o in allowed if o[1] > both[1]]
            options.append(allowed)
        if any(not o for o in options):
            continue
        for pick in itertools.product(*options):
            ctx.guesses += 1
            s_types = [i for i, o in enumerate(pick) if o[0] != T_ONLY]
            t_types = [i for i, o in enumerate(pick) if o[0] != S_ONLY]
            if not ctx.quotient_connected(chosen, s_types) or not ctx.quotient_connected(other, t_types):
                continue
            value = base + sum(o[1] for o in pick)
            if best is None or value > best:
                counts = {}
                for o in pick:
                    counts.update(o[2])
                best, best_witness = value, ctx.assemble(chosen, counts, value, Problem.MMC)
    logger.info("mmc via twin-cover (|X|=%d) on n=%d: %s", len(ctx.cover), g.n, best)
    return _report(g, Problem.MMC, start, best, best_witness, ctx)


SOLVERS: dict[Problem, Callable[..., SolveReport]] = {
    Problem.CMC: solve_cmc_twincover,
    Problem.MMC: solve_mmc_twincover,
}
