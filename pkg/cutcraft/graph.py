"""Graph type, cut predicates, the PACE .gr codec and small graph generators.

Vertex identities are dense 0-based integers; everything written to or read
from disk is 1-based.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

import networkx as nx
import numpy as np

from .errors import DisconnectedGraphError, InputError

if TYPE_CHECKING:
    from .models import Problem, SolveReport

logger = logging.getLogger("cutcraft.graph")

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InputError(f"vertex count must be non-negative, got {self.n}")
        normalised = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"vertex index out of range in edge {u + 1} {v + 1}")
            if u == v:
                raise InputError(f"self-loop on vertex {u + 1}")
            normalised.add((min(u, v), max(u, v)))
        edges = tuple(sorted(normalised))
        adjacency = [[] for _ in range(self.n)]
        masks = [0] * self.n
        for u, v in edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adjacency))
        object.__setattr__(self, "masks", tuple(masks))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def to_networkx(self) -> nx.Graph:
        nxg = nx.Graph()
        nxg.add_nodes_from(range(self.n))
        nxg.add_edges_from(self.edges)
        return nxg

    def component_count(self) -> int:
        if self.n == 0:
            return 0
        return nx.number_connected_components(self.to_networkx())

    def require_connected(self) -> None:
        components = self.component_count()
        if components > 1:
            raise DisconnectedGraphError(components)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 0..k-1, with the original id of each new vertex."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = tuple((index[u], index[v]) for u, v in self.edges if u in index and v in index)
        return Graph(len(keep), edges), keep


@dataclass(frozen=True)
class Cut:
    side: frozenset[int]
    cutset_size: int

    @classmethod
    def of(cls, g: Graph, side: Iterable[int]) -> "Cut":
        side = frozenset(side)
        return cls(side, cut_size(g, side))

    def __contains__(self, v: int) -> bool:
        return v in self.side

    def complement(self, g: Graph) -> "Cut":
        return Cut(frozenset(g.vertices) - self.side, self.cutset_size)


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_cut_size(g: Graph, sub: int) -> int:
    outside = ~sub
    total = 0
    rest = sub
    while rest:
        low = rest & -rest
        rest ^= low
        total += (g.masks[low.bit_length() - 1] & outside).bit_count()
    return total


def mask_connected(g: Graph, sub: int) -> bool:
    if sub == 0:
        return True
    seen = sub & -sub
    stack = seen
    while stack:
        low = stack & -stack
        stack ^= low
        fresh = g.masks[low.bit_length() - 1] & sub & ~seen
        seen |= fresh
        stack |= fresh
    return seen == sub


def _check_subset(g: Graph, s: Iterable[int]) -> int:
    sub = 0
    for v in s:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v + 1} is not in the graph")
        sub |= 1 << v
    return sub


def cut_size(g: Graph, s: Iterable[int]) -> int:
    return mask_cut_size(g, _check_subset(g, s))


def is_connected_subset(g: Graph, s: Iterable[int]) -> bool:
    """True iff G[s] is connected; the empty set counts as connected."""
    return mask_connected(g, _check_subset(g, s))


def is_minimal_cut(g: Graph, s: Iterable[int]) -> bool:
    g.require_connected()
    sub = _check_subset(g, s)
    if sub == 0 or sub == g.full_mask:
        raise InputError("a minimal cut needs both sides non-empty")
    return mask_connected(g, sub) and mask_connected(g, g.full_mask & ~sub)


def mask_feasible(g: Graph, problem: "Problem", sub: int, anchors: Sequence[int] = ()) -> bool:
    if anchors:
        if not sub >> anchors[0] & 1:
            return False
        if len(anchors) > 1 and sub >> anchors[1] & 1:
            return False
    if not problem.minimal:
        return mask_connected(g, sub)
    rest = g.full_mask & ~sub
    if sub == 0 or rest == 0:
        return False
    return mask_connected(g, sub) and mask_connected(g, rest)


def is_feasible(g: Graph, problem: "Problem", s: Iterable[int], anchors: Sequence[int] = ()) -> bool:
    """Feasibility predicate of a problem tag; -st tags need (s, t) anchors."""
    if problem.anchored and len(anchors) != 2:
        raise InputError(f"problem {problem.value} needs two anchors")
    return mask_feasible(g, problem, _check_subset(g, s), anchors)


def verify_report(g: Graph, report: "SolveReport") -> bool:
    if report.witness is None or report.optimum is None:
        return False
    if report.n != g.n or report.m != g.m:
        return False
    anchors = report.anchors or ()
    if report.problem.anchored and len(anchors) != 2:
        return False
    try:
        sub = _check_subset(g, report.witness)
    except InputError:
        return False
    return mask_feasible(g, report.problem, sub, anchors) and mask_cut_size(g, sub) == report.optimum


# -- .gr codec ---------------------------------------------------------------


def _text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"graph file is not valid UTF-8: {exc}") from exc
    return data


def parse_graph(data: str | bytes) -> Graph:
    header: Optional[tuple[int, int]] = None
    raw_edges: list[Edge] = []
    for lineno, line in enumerate(_text(data).splitlines(), start=1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p":
            if header is not None:
                raise InputError(f"line {lineno}: second header line")
            if len(tokens) != 4 or tokens[1] != "tw":
                raise InputError(f"line {lineno}: malformed header {line.strip()!r}")
            try:
                header = (int(tokens[2]), int(tokens[3]))
            except ValueError:
                raise InputError(f"line {lineno}: malformed header {line.strip()!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise InputError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise InputError(f"line {lineno}: edge before the 'p tw' header")
        if len(tokens) != 2:
            raise InputError(f"line {lineno}: expected two vertex ids, got {line.strip()!r}")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer vertex id in {line.strip()!r}") from None
        n = header[0]
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(f"line {lineno}: vertex index out of range in {u} {v} (n={n})")
        if u == v:
            raise InputError(f"line {lineno}: self-loop on vertex {u}")
        raw_edges.append((u - 1, v - 1))
    if header is None:
        raise InputError("missing 'p tw <n> <m>' header")
    n, declared = header
    unique = {(min(u, v), max(u, v)) for u, v in raw_edges}
    if len(unique) != len(raw_edges):
        logger.warning("Dropped %d duplicate edge line(s)", len(raw_edges) - len(unique))
    if declared != len(raw_edges):
        logger.warning("Header declares %d edges, file lists %d", declared, len(raw_edges))
    return Graph(n, tuple(unique))


def emit_graph(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


# -- generators --------------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def star_graph(leaves: int) -> Graph:
    """Vertex 0 is the centre."""
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, tuple(edges))


def connected_graphs(n: int, cap: int = 5000) -> Iterator[Graph]:
    """Connected graphs on n labelled vertices by increasing edge-subset code, at most cap of them."""
    pairs = list(itertools.combinations(range(n), 2))
    produced = 0
    for code in range(1 << len(pairs)):
        if produced >= cap:
            return
        if code.bit_count() < n - 1:
            continue
        g = Graph(n, tuple(p for i, p in enumerate(pairs) if code >> i & 1))
        if n <= 1 or mask_connected(g, g.full_mask):
            produced += 1
            yield g


def random_connected_graph(n: int, p: float, seed: int) -> Graph:
    """A random spanning tree plus every other pair independently with probability p."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return Graph(n, tuple(edges))


def is_bipartite(g: Graph) -> bool:
    return nx.is_bipartite(g.to_networkx())


def is_split(g: Graph) -> bool:
    """Degree-sequence characterisation of split graphs."""
    degrees = sorted((g.degree(v) for v in g.vertices), reverse=True)
    if not degrees:
        return True
    k = max(i for i, d in enumerate(degrees, start=1) if d >= i - 1)
    return sum(degrees[:k]) == k * (k - 1) + sum(degrees[k:])


def is_subcubic(g: Graph) -> bool:
    return all(g.degree(v) <= 3 for v in g.vertices)
