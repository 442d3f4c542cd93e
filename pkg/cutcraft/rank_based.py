"""Representative sets of weighted partitions and the rank-based solvers built on them."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial
from typing import Optional, Sequence

import numpy as np

from . import dp_partition
from .dp_partition import Key, Table
from .graph import Graph
from .gf2 import greedy_row_basis, pack_rows
from .models import Algorithm, SolveReport
from .partition import Partition, all_partitions, join_partitions
from .treedec import NiceTreeDecomposition, TreeDecomposition

logger = logging.getLogger("cutcraft.rank")


@dataclass(frozen=True)
class WeightedPartition:
    partition: Partition
    weight: int


def _common_ground(*families: Sequence[WeightedPartition]) -> Optional[frozenset[int]]:
    grounds = {wp.partition.ground for family in families for wp in family}
    if len(grounds) > 1:
        raise ValueError("weighted partitions over different ground sets")
    return next(iter(grounds), None)


def cut_matrix(partitions: Sequence[Partition], ground: frozenset[int]) -> np.ndarray:
    """Row p, column c is True iff p refines bipartition c; the smallest element is pinned to side 0."""
    elements = sorted(ground)
    index = {v: i for i, v in enumerate(elements)}
    columns = np.arange(1 << (len(elements) - 1), dtype=np.int64) << 1
    matrix = np.ones((len(partitions), columns.size), dtype=bool)
    for row, p in enumerate(partitions):
        for block in p.blocks:
            mask = sum(1 << index[v] for v in block)
            hit = columns & mask
            matrix[row] &= (hit == 0) | (hit == mask)
    return matrix


def reduce(family: Sequence[WeightedPartition]) -> list[WeightedPartition]:
    """A subset of family that represents it, at most 2^(|U|-1) strong."""
    if not family:
        return []
    ground = _common_ground(family)
    ordered = sorted(family, key=lambda wp: (-wp.weight, wp.partition))
    if not ground:
        return [ordered[0]]
    matrix = cut_matrix([wp.partition for wp in ordered], ground)
    return [ordered[i] for i in greedy_row_basis(pack_rows(matrix))]


def represents(candidate: Sequence[WeightedPartition], family: Sequence[WeightedPartition]) -> bool:
    """Exhaustive check over every completion q; only for small ground sets."""
    ground = _common_ground(candidate, family)
    if ground is None:
        return True
    whole = Partition.whole(ground)

    def best(items, q):
        values = [wp.weight for wp in items if join_partitions(wp.partition, q) == whole]
        return max(values, default=None)

    return all(best(candidate, q) == best(family, q) for q in all_partitions(sorted(ground)))


def _surviving_keys(table: Table, side: int) -> set[Key]:
    groups: dict[tuple, list[Key]] = {}
    for key in table:
        fixed = (key[0].ground, key[1]) if side == 0 else (key[0], key[1].ground)
        groups.setdefault(fixed, []).append(key)
    keep: set[Key] = set()
    for keys in groups.values():
        if len(keys) == 1:
            keep.update(keys)
            continue
        by_partition = {key[side]: key for key in keys}
        survivors = reduce([WeightedPartition(key[side], table[key][0]) for key in keys])
        keep.update(by_partition[wp.partition] for wp in survivors)
    return keep


def compress_table(table: Table, *, minimal: bool) -> Table:
    """Reduce the S-partitions of every (S, T-partition) group, then the T-partitions of every S-partition."""
    keep = _surviving_keys(table, 0)
    table = {key: entry for key, entry in table.items() if key in keep}
    if minimal:
        keep = _surviving_keys(table, 1)
        table = {key: entry for key, entry in table.items() if key in keep}
    return table


def solve_cmc_rank(g: Graph, td: Optional[TreeDecomposition] = None) -> SolveReport:
    return dp_partition.solve_cmc(g, td, compress=partial(compress_table, minimal=False), algorithm=Algorithm.RANK)


def solve_mmc_rank(g: Graph, td: Optional[TreeDecomposition] = None) -> SolveReport:
    return dp_partition.solve_mmc(g, td, compress=partial(compress_table, minimal=True), algorithm=Algorithm.RANK)


def solve_cmc_st_rank(g: Graph, ntd: NiceTreeDecomposition) -> SolveReport:
    return dp_partition.solve_cmc_st(
        g, ntd, compress=partial(compress_table, minimal=False), algorithm=Algorithm.RANK
    )


def solve_mmc_st_rank(g: Graph, ntd: NiceTreeDecomposition) -> SolveReport:
    return dp_partition.solve_mmc_st(
        g, ntd, compress=partial(compress_table, minimal=True), algorithm=Algorithm.RANK
    )
