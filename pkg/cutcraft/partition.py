"""Canonical set partitions and their lattice join."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence


class UnionFind:
    """Disjoint sets over arbitrary hashable items, path halving plus union by size."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent = {}
        self.size = {}
        for item in items:
            self.add(item)

    def add(self, item: Hashable) -> None:
        if item not in self.parent:
            self.parent[item] = item
            self.size[item] = 1

    def find(self, item: Hashable) -> Hashable:
        parent = self.parent
        while parent[item] != item:
            parent[item] = parent[parent[item]]
            item = parent[item]
        return item

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def groups(self) -> list[list[Hashable]]:
        """Groups in order of their first item, items in insertion order."""
        out: dict[Hashable, list[Hashable]] = {}
        for item in self.parent:
            out.setdefault(self.find(item), []).append(item)
        return list(out.values())


@dataclass(frozen=True, order=True)
class Partition:
    """Blocks are sorted tuples, ordered by their smallest element; that is the canonical form."""

    blocks: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        canon = [tuple(sorted(b)) for b in blocks]
        if any(not b for b in canon):
            raise ValueError("partition blocks must be non-empty")
        seen = set()
        for b in canon:
            if seen.intersection(b):
                raise ValueError("partition blocks must be disjoint")
            seen.update(b)
        return cls(tuple(sorted(canon)))

    @classmethod
    def singletons(cls, ground: Iterable[int]) -> "Partition":
        return cls(tuple((v,) for v in sorted(ground)))

    @classmethod
    def whole(cls, ground: Iterable[int]) -> "Partition":
        ground = tuple(sorted(ground))
        return cls((ground,) if ground else ())

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(v for b in self.blocks for v in b)

    def __len__(self) -> int:
        return len(self.blocks)

    def __contains__(self, v: int) -> bool:
        return any(v in b for b in self.blocks)

    def labels(self) -> dict[int, int]:
        """Element to the smallest element of its block."""
        return {v: b[0] for b in self.blocks for v in b}

    def block_of(self, v: int) -> tuple[int, ...]:
        for b in self.blocks:
            if v in b:
                return b
        raise KeyError(v)

    def is_singleton(self, v: int) -> bool:
        return self.block_of(v) == (v,)

    def add_singleton(self, v: int) -> "Partition":
        return Partition(tuple(sorted(self.blocks + ((v,),))))

    def remove(self, v: int) -> "Partition":
        blocks = []
        for b in self.blocks:
            if v in b:
                b = tuple(u for u in b if u != v)
                if not b:
                    continue
            blocks.append(b)
        return Partition(tuple(sorted(blocks)))

    def merge(self, u: int, v: int) -> "Partition":
        bu, bv = self.block_of(u), self.block_of(v)
        if bu == bv:
            return self
        rest = [b for b in self.blocks if b != bu and b != bv]
        rest.append(tuple(sorted(bu + bv)))
        return Partition(tuple(sorted(rest)))

    def join(self, other: "Partition") -> "Partition":
        return join_partitions(self, other)

    def refines(self, side: frozenset[int]) -> bool:
        """True iff every block lies entirely inside or entirely outside side."""
        for b in self.blocks:
            inside = b[0] in side
            if any((v in side) != inside for v in b[1:]):
                return False
        return True

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(str(v + 1) for v in b) + "}" for b in self.blocks) + "}"


def join_partitions(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening of two partitions of one ground set."""
    if p.ground != q.ground:
        raise ValueError("cannot join partitions of different ground sets")
    if p == q:
        return p
    uf = UnionFind(sorted(p.ground))
    for b in p.blocks + q.blocks:
        for v in b[1:]:
            uf.union(b[0], v)
    return Partition.from_blocks(uf.groups())


def all_partitions(ground: Sequence[int]) -> Iterator[Partition]:
    """Every partition of ground (Bell-number many); for tests and small oracles."""
    ground = sorted(ground)

    def extend(index: int, blocks: list[list[int]]) -> Iterator[list[list[int]]]:
        if index == len(ground):
            yield blocks
            return
        v = ground[index]
        for b in blocks:
            b.append(v)
            yield from extend(index + 1, blocks)
            b.pop()
        blocks.append([v])
        yield from extend(index + 1, blocks)
        blocks.pop()

    for blocks in extend(0, []):
        yield Partition.from_blocks(blocks)
