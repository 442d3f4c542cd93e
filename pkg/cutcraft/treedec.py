"""Tree decompositions: heuristic construction, validation, PACE .td I/O and nice form."""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import networkx as nx

from .errors import InputError
from .graph import Edge, Graph

logger = logging.getLogger("cutcraft.treedec")


@dataclass(frozen=True)
class TreeDecomposition:
    n: int
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(
            self, "tree_edges", tuple(sorted((min(a, b), max(a, b)) for a, b in self.tree_edges))
        )

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbours(self) -> list[list[int]]:
        out = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            out[a].append(b)
            out[b].append(a)
        return out


@dataclass(frozen=True)
class Violation:
    condition: str
    vertices: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.vertices:
            return f"{self.condition} violated"
        return f"{self.condition} violated: {' '.join(str(v + 1) for v in self.vertices)}"


def _contract_subset_bags(bags: list[set[int]], edges: set[Edge]) -> TreeDecomposition:
    """Merge every bag into a tree neighbour that contains it, then renumber."""
    alive = set(range(len(bags)))
    adjacent = defaultdict(set)
    for a, b in edges:
        adjacent[a].add(b)
        adjacent[b].add(a)
    changed = True
    while changed:
        changed = False
        for i in sorted(alive):
            target = next((j for j in sorted(adjacent[i]) if bags[i] <= bags[j]), None)
            if target is None:
                continue
            for k in adjacent[i] - {target}:
                adjacent[k].discard(i)
                adjacent[k].add(target)
                adjacent[target].add(k)
            adjacent[target].discard(i)
            del adjacent[i]
            alive.discard(i)
            changed = True
    order = sorted(alive)
    index = {old: new for new, old in enumerate(order)}
    tree_edges = {(index[a], index[b]) for a in order for b in adjacent[a] if a < b}
    n = max((max(b) for b in bags if b), default=-1) + 1
    return TreeDecomposition(n, tuple(frozenset(bags[i]) for i in order), tuple(tree_edges))


def heuristic_decompose(g: Graph) -> TreeDecomposition:
    """Min-fill elimination ordering, ties broken by the smallest vertex id."""
    adjacency = [set(a) for a in g.adjacency]
    remaining = set(g.vertices)
    position: dict[int, int] = {}
    bags: list[set[int]] = []
    higher: list[set[int]] = []

    def fill(v: int) -> int:
        nbrs = sorted(adjacency[v])
        return sum(1 for i, a in enumerate(nbrs) for b in nbrs[i + 1:] if b not in adjacency[a])

    while remaining:
        v = min(remaining, key=lambda u: (fill(u), u))
        nbrs = set(adjacency[v])
        for a in nbrs:
            adjacency[a] |= nbrs - {a}
            adjacency[a].discard(v)
        remaining.discard(v)
        position[v] = len(bags)
        bags.append({v} | nbrs)
        higher.append(nbrs)

    edges: set[Edge] = set()
    roots = []
    for i, nbrs in enumerate(higher):
        if nbrs:
            parent = min(position[u] for u in nbrs)
            edges.add((i, parent))
        else:
            roots.append(i)
    # disconnected inputs leave a forest; chain its roots
    for a, b in zip(roots, roots[1:]):
        edges.add((a, b))
    if not bags:
        return TreeDecomposition(0, (frozenset(),), ())
    td = _contract_subset_bags(bags, edges)
    td = TreeDecomposition(g.n, td.bags, td.tree_edges)
    logger.debug("min-fill decomposition of n=%d: %d bags, width %d", g.n, len(td.bags), td.width)
    return td


def path_decompose(g: Graph) -> TreeDecomposition:
    """Vertex-separation bags of a greedy ordering that keeps the frontier small."""
    placed: list[int] = []
    position: dict[int, int] = {}
    unplaced = set(g.vertices)
    frontier: set[int] = set()
    while unplaced:
        best = None
        for v in sorted(unplaced):
            grown = {u for u in frontier | {v} if any(w in unplaced and w != v for w in g.neighbors(u))}
            key = (len(grown), 0 if frontier & set(g.neighbors(v)) or not frontier else 1, v)
            if best is None or key < best[0]:
                best = (key, v, grown)
        _, v, frontier = best
        position[v] = len(placed)
        placed.append(v)
        unplaced.discard(v)
    last_neighbour = {v: max((position[u] for u in g.neighbors(v)), default=position[v]) for v in g.vertices}
    bags = []
    for i, v in enumerate(placed):
        bags.append({v} | {u for u in placed[:i] if last_neighbour[u] >= i})
    edges = {(i, i + 1) for i in range(len(bags) - 1)}
    if not bags:
        return TreeDecomposition(0, (frozenset(),), ())
    td = _contract_subset_bags(bags, edges)
    return TreeDecomposition(g.n, td.bags, td.tree_edges)


def validate(g: Graph, td: TreeDecomposition) -> Optional[Violation]:
    """First violated decomposition condition, or None when td is valid for g."""
    count = len(td.bags)
    if count == 0:
        return Violation("tree structure")
    for a, b in td.tree_edges:
        if not (0 <= a < count and 0 <= b < count) or a == b:
            return Violation("tree structure")
    tree = nx.Graph()
    tree.add_nodes_from(range(count))
    tree.add_edges_from(td.tree_edges)
    if tree.number_of_edges() != count - 1 or not nx.is_connected(tree):
        return Violation("tree structure")
    for bag in td.bags:
        for v in sorted(bag):
            if not 0 <= v < g.n:
                return Violation("vertex range", (v,))
    holders = defaultdict(list)
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders[v].append(i)
    for v in g.vertices:
        if v not in holders:
            return Violation("vertex coverage", (v,))
    for u, v in g.edges:
        if not any(v in td.bags[i] for i in holders[u]):
            return Violation("edge coverage", (u, v))
    for v in g.vertices:
        if not nx.is_connected(tree.subgraph(holders[v])):
            return Violation("subtree connectivity", (v,))
    return None


# -- PACE .td codec ----------------------------------------------------------


def parse_td(data: str | bytes, n: Optional[int] = None) -> TreeDecomposition:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[Edge] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "s":
            if header is not None or len(tokens) != 5 or tokens[1] != "td":
                raise InputError(f"line {lineno}: malformed header {line.strip()!r}")
            try:
                header = tuple(int(t) for t in tokens[2:])
            except ValueError:
                raise InputError(f"line {lineno}: malformed header {line.strip()!r}") from None
            if n is not None and header[2] != n:
                raise InputError(f"line {lineno}: decomposition is for n={header[2]}, graph has n={n}")
            continue
        try:
            numbers = [int(t) for t in (tokens[1:] if tokens[0] == "b" else tokens)]
        except ValueError:
            raise InputError(f"line {lineno}: malformed line {line.strip()!r}") from None
        if header is None:
            raise InputError(f"line {lineno}: content before the 's td' header")
        count, _, vertices = header
        if tokens[0] == "b":
            if not numbers:
                raise InputError(f"line {lineno}: bag line without an id")
            bag_id, content = numbers[0], numbers[1:]
            if not 1 <= bag_id <= count or bag_id in bags:
                raise InputError(f"line {lineno}: bad or repeated bag id {bag_id}")
            for v in content:
                if not 1 <= v <= vertices:
                    raise InputError(f"line {lineno}: bag {bag_id} references vertex {v} (n={vertices})")
            bags[bag_id] = frozenset(v - 1 for v in content)
            continue
        if len(numbers) != 2:
            raise InputError(f"line {lineno}: expected a tree edge, got {line.strip()!r}")
        a, b = numbers
        if not (1 <= a <= count and 1 <= b <= count):
            raise InputError(f"line {lineno}: tree edge references unknown bag ({a}, {b})")
        edges.append((a - 1, b - 1))
    if header is None:
        raise InputError("missing 's td' header")
    count, declared_width, vertices = header
    if len(bags) != count:
        raise InputError(f"header declares {count} bags, file defines {len(bags)}")
    td = TreeDecomposition(vertices, tuple(bags[i] for i in range(1, count + 1)), tuple(edges))
    if td.width + 1 != declared_width:
        logger.warning("Header declares max bag size %d, bags have %d", declared_width, td.width + 1)
    return td


def emit_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append(" ".join(["b", str(i), *(str(v + 1) for v in sorted(bag))]))
    lines.extend(f"{a + 1} {b + 1}" for a, b in td.tree_edges)
    return "\n".join(lines) + "\n"


# -- nice form ---------------------------------------------------------------


class NodeKind(str, Enum):
    LEAF = "leaf"
    INTRODUCE_VERTEX = "introduce-vertex"
    INTRODUCE_EDGE = "introduce-edge"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: NodeKind
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: Optional[int] = None
    edge: Optional[Edge] = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes in post-order: every child precedes its parent and the root is last."""

    n: int
    nodes: tuple[NiceNode, ...]
    anchors: tuple[int, ...] = ()

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(node.bag) for node in self.nodes) - 1

    def introduced_edges(self) -> list[Edge]:
        return [node.edge for node in self.nodes if node.kind is NodeKind.INTRODUCE_EDGE]

    def flatten(self) -> TreeDecomposition:
        edges = [(child, i) for i, node in enumerate(self.nodes) for child in node.children]
        return TreeDecomposition(self.n, tuple(node.bag for node in self.nodes), tuple(edges))

    def describe(self) -> str:
        lines = []
        for i, node in enumerate(self.nodes, start=1):
            parts = [str(i), node.kind.value]
            if node.vertex is not None:
                parts.append(f"v={node.vertex + 1}")
            if node.edge is not None:
                parts.append(f"e={node.edge[0] + 1},{node.edge[1] + 1}")
            parts.append("bag=" + ",".join(str(v + 1) for v in sorted(node.bag)))
            parts.append("children=" + ",".join(str(c + 1) for c in node.children))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


class _NiceBuilder:
    def __init__(self, g: Graph, anchors: tuple[int, ...]):
        self.g = g
        self.anchors = frozenset(anchors)
        self.nodes: list[NiceNode] = []
        self.introduced: set[Edge] = set()

    def add(self, node: NiceNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def forget(self, top: int, v: int) -> int:
        bag = self.nodes[top].bag
        for u in self.g.neighbors(v):
            edge = (min(u, v), max(u, v))
            if u in bag and edge not in self.introduced:
                self.introduced.add(edge)
                top = self.add(NiceNode(NodeKind.INTRODUCE_EDGE, bag, (top,), edge=edge))
        return self.add(NiceNode(NodeKind.FORGET, bag - {v}, (top,), vertex=v))

    def introduce(self, top: int, v: int) -> int:
        return self.add(NiceNode(NodeKind.INTRODUCE_VERTEX, self.nodes[top].bag | {v}, (top,), vertex=v))

    def transit(self, top: int, target: frozenset[int]) -> int:
        bag = self.nodes[top].bag
        for v in sorted(bag - target):
            top = self.forget(top, v)
        for v in sorted(target - bag):
            top = self.introduce(top, v)
        return top


def to_nice(
    g: Graph, td: TreeDecomposition, anchors: Sequence[int] = (), *, validated: bool = False
) -> NiceTreeDecomposition:
    """Anchored nice form: anchors sit in every bag and each edge is introduced exactly once."""
    anchors = tuple(anchors)
    if len(anchors) > 2 or len(set(anchors)) != len(anchors):
        raise InputError("at most two distinct anchors are supported")
    for a in anchors:
        if not 0 <= a < g.n:
            raise InputError(f"anchor {a + 1} is not a vertex")
    if not validated:
        violation = validate(g, td)
        if violation is not None:
            raise InputError(f"invalid tree decomposition: {violation}")

    builder = _NiceBuilder(g, anchors)
    extra = frozenset(anchors)
    neighbours = td.neighbours()
    parent = {0: None}
    order = []
    queue = deque([0])
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in sorted(neighbours[x]):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    children = defaultdict(list)
    for x in order[1:]:
        children[parent[x]].append(x)

    top_of: dict[int, int] = {}
    for x in reversed(order):
        target = td.bags[x] | extra
        if not children[x]:
            top = builder.add(NiceNode(NodeKind.LEAF, extra))
            top = builder.transit(top, target)
        else:
            top = None
            for c in sorted(children[x]):
                branch = builder.transit(top_of.pop(c), target)
                if top is None:
                    top = branch
                else:
                    top = builder.add(NiceNode(NodeKind.JOIN, target, (top, branch)))
        top_of[x] = top

    top = builder.transit(top_of[0], extra)
    if len(anchors) == 2 and g.has_edge(*anchors):
        edge = (min(anchors), max(anchors))
        builder.introduced.add(edge)
        top = builder.add(NiceNode(NodeKind.INTRODUCE_EDGE, extra, (top,), edge=edge))
    ntd = NiceTreeDecomposition(g.n, tuple(builder.nodes), anchors)
    logger.debug("nice decomposition: %d nodes, width %d, anchors %s", len(ntd.nodes), ntd.width, anchors)
    return ntd
