"""Clique-width expressions, decomposition trees with twin-classes, and the class-count DP over them."""
from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .config import settings
from .errors import BudgetExceeded, CutcraftError, InputError
from .graph import Graph, mask_of
from .models import Algorithm, Problem, SolveReport
from .oracle import check_anchors
from .partition import UnionFind

logger = logging.getLogger("cutcraft.cliquewidth")

OPERATIONS = ("intro", "union", "join", "relabel")
_TOKEN = re.compile(r"\(|\)|[^\s()]+")


@dataclass(frozen=True, eq=False)
class CwNode:
    """One operation; intro carries (vertex, label), join and relabel carry (i, j). Vertices are 0-based."""

    op: str
    args: tuple[int, ...] = ()
    children: tuple["CwNode", ...] = ()


@dataclass(frozen=True)
class CwExpression:
    root: CwNode
    width: int
    n: int


def _postorder(root: CwNode) -> Iterator[CwNode]:
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(node.children):
            stack.append((child, False))


# -- text ---------------------------------------------------------------------


def parse_cw(text: str, width: Optional[int] = None) -> CwExpression:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise InputError("empty clique-width expression")
    frames: list[tuple[str, list[int], list[CwNode]]] = []
    result: Optional[CwNode] = None
    position = 0
    while position < len(tokens):
        token = tokens[position]
        position += 1
        if token == "(":
            if result is not None and not frames:
                raise InputError("more than one top-level expression")
            if position >= len(tokens) or tokens[position] not in OPERATIONS:
                raise InputError(f"expected one of {', '.join(OPERATIONS)} after '('")
            frames.append((tokens[position], [], []))
            position += 1
        elif token == ")":
            if not frames:
                raise InputError("unbalanced ')'")
            node = _build(*frames.pop())
            if frames:
                frames[-1][2].append(node)
            else:
                result = node
        else:
            if not frames:
                raise InputError(f"unexpected token {token!r} outside an operation")
            try:
                frames[-1][1].append(int(token))
            except ValueError:
                raise InputError(f"expected an integer, got {token!r}") from None
    if frames or result is None:
        raise InputError("unbalanced '(' in clique-width expression")
    return _check(result, width)


def _build(op: str, numbers: list[int], children: list[CwNode]) -> CwNode:
    if op == "intro":
        if len(numbers) != 2 or children:
            raise InputError("intro takes a vertex and a label")
        vertex, label = numbers
        if vertex < 1:
            raise InputError(f"vertex id {vertex} is not positive")
        return CwNode("intro", (vertex - 1, label))
    if op == "union":
        if numbers or len(children) < 2:
            raise InputError("union takes at least two expressions")
        return CwNode("union", (), tuple(children))
    if len(numbers) != 2 or len(children) != 1:
        raise InputError(f"{op} takes two labels and one expression")
    if op == "join" and numbers[0] == numbers[1]:
        raise InputError(f"join of label {numbers[0]} with itself")
    return CwNode(op, tuple(numbers), tuple(children))


def _check(root: CwNode, width: Optional[int]) -> CwExpression:
    seen: set[int] = set()
    top = 0
    for node in _postorder(root):
        if node.op == "intro":
            vertex = node.args[0]
            if vertex in seen:
                raise InputError(f"vertex {vertex + 1} introduced twice")
            seen.add(vertex)
            labels = node.args[1:]
        else:
            labels = node.args
        for label in labels:
            if label < 1 or (width is not None and label > width):
                raise InputError(f"label {label} out of range")
            top = max(top, label)
    if seen != set(range(len(seen))):
        raise InputError("vertex ids must be exactly 1..n")
    return CwExpression(root, top if width is None else width, len(seen))


def emit_cw(expr: CwExpression) -> str:
    text: dict[int, str] = {}
    for node in _postorder(expr.root):
        if node.op == "intro":
            parts = [str(node.args[0] + 1), str(node.args[1])]
        else:
            parts = [str(a) for a in node.args] + [text.pop(id(child)) for child in node.children]
        text[id(node)] = f"({node.op} {' '.join(parts)})"
    return text[id(expr.root)] + "\n"


def _labelled(expr: CwExpression) -> Iterator[tuple[CwNode, dict[int, int], set[tuple[int, int]]]]:
    """Post-order walk carrying each subexpression's labelling; the edge set is shared and grows."""
    labels: dict[int, dict[int, int]] = {}
    edges: set[tuple[int, int]] = set()
    for node in _postorder(expr.root):
        if node.op == "intro":
            current = {node.args[0]: node.args[1]}
        elif node.op == "union":
            current = {}
            for child in node.children:
                current.update(labels.pop(id(child)))
        else:
            current = labels.pop(id(node.children[0]))
            i, j = node.args
            if node.op == "join":
                left = [v for v, label in current.items() if label == i]
                right = [v for v, label in current.items() if label == j]
                edges.update((min(u, v), max(u, v)) for u in left for v in right)
            else:
                current = {v: j if label == i else label for v, label in current.items()}
        labels[id(node)] = current
        yield node, current, edges


def evaluate_cw(text: str | CwExpression) -> tuple[CwExpression, Graph]:
    expr = parse_cw(text) if isinstance(text, str) else text
    edges: set[tuple[int, int]] = set()
    for _, _, edges in _labelled(expr):
        pass
    return expr, Graph(expr.n, tuple(sorted(edges)))


def load_cw(text: str, g: Graph) -> CwExpression:
    expr, built = evaluate_cw(text)
    if built.n != g.n or built.edges != g.edges:
        raise InputError("clique-width expression does not evaluate to the input graph")
    return expr


# -- expression builders --------------------------------------------------------


def linear_expression(g: Graph) -> CwExpression:
    """Introduce vertices in id order; active vertices with equal future neighbourhoods share a label.

    Label 1 collects vertices with no neighbour left to introduce.
    """
    if g.n == 0:
        raise InputError("empty graph has no clique-width expression")
    root: Optional[CwNode] = None
    groups: dict[frozenset[int], int] = {}
    for v in range(g.n):
        used = set(groups.values()) | {1}
        fresh = next(label for label in range(2, g.n + 3) if label not in used)
        leaf = CwNode("intro", (v, fresh))
        root = leaf if root is None else CwNode("union", (), (root, leaf))
        for future, label in sorted(groups.items(), key=lambda item: item[1]):
            if v in future:
                root = CwNode("join", (fresh, label), (root,))

        regrouped: dict[frozenset[int], list[int]] = {}
        for future, label in groups.items():
            regrouped.setdefault(future - {v}, []).append(label)
        regrouped.setdefault(frozenset(u for u in g.neighbors(v) if u > v), []).append(fresh)
        groups = {}
        for future, labels in sorted(regrouped.items(), key=lambda item: min(item[1])):
            target = 1 if not future else min(labels)
            for label in sorted(labels):
                if label != target:
                    root = CwNode("relabel", (label, target), (root,))
            if future:
                groups[future] = target
    return _check(root, None)


def random_cograph_expression(n: int, seed: int) -> CwExpression:
    """Two-label expression of a random connected cograph on n vertices."""
    if n < 1:
        raise InputError("a cograph needs at least one vertex")
    rng = np.random.default_rng(seed)
    # every finished subexpression has all of its vertices on label 1
    pending = [(0, n, True)]
    order: list[tuple[int, int, bool, int]] = []
    while pending:
        start, size, top = pending.pop()
        cut = int(rng.integers(1, size)) if size > 1 else 0
        order.append((start, size, top, cut))
        if size > 1:
            pending.append((start + cut, size - cut, False))
            pending.append((start, cut, False))
    built: dict[tuple[int, int], CwNode] = {}
    for start, size, top, cut in reversed(order):
        if size == 1:
            built[(start, size)] = CwNode("intro", (start, 1))
            continue
        left = built.pop((start, cut))
        right = built.pop((start + cut, size - cut))
        if top or rng.random() < 0.5:
            shifted = CwNode("relabel", (1, 2), (right,))
            joined = CwNode("join", (1, 2), (CwNode("union", (), (left, shifted)),))
            built[(start, size)] = CwNode("relabel", (2, 1), (joined,))
        else:
            built[(start, size)] = CwNode("union", (), (left, right))
    return _check(built[(0, n)], 2)


# -- decomposition trees ---------------------------------------------------------


@dataclass(frozen=True)
class DtNode:
    vertices: frozenset[int]
    classes: tuple[tuple[int, ...], ...]
    children: tuple[int, ...] = ()
    vertex: Optional[int] = None


@dataclass
class DecompositionTree:
    """Binary tree over the vertices, nodes in post-order with the root last."""

    nodes: list[DtNode] = field(default_factory=list)

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(node.classes) for node in self.nodes), default=0)


def twin_classes(g: Graph, vertices: frozenset[int]) -> tuple[tuple[int, ...], ...]:
    outside = ~mask_of(vertices)
    groups: dict[int, list[int]] = {}
    for v in sorted(vertices):
        groups.setdefault(g.masks[v] & outside, []).append(v)
    return tuple(sorted(tuple(members) for members in groups.values()))


def is_twin_set(g: Graph, group: Sequence[int], vertices: frozenset[int]) -> bool:
    outside = ~mask_of(vertices)
    return len({g.masks[v] & outside for v in group}) <= 1


def _class_map(child: DtNode, parent: DtNode) -> list[int]:
    where = {v: k for k, cls in enumerate(parent.classes) for v in cls}
    lifted = []
    for cls in child.classes:
        targets = {where[v] for v in cls}
        if len(targets) != 1:
            raise CutcraftError("twin-classes of a node do not coarsen its children's")
        lifted.append(targets.pop())
    return lifted


def build_decomposition_tree(g: Graph, expr: CwExpression, *, cap: Optional[int] = None) -> DecompositionTree:
    cap = settings.CLIQUEWIDTH_CAP if cap is None else cap
    _, built = evaluate_cw(expr)
    if built.n != g.n or built.edges != g.edges:
        raise InputError("clique-width expression does not evaluate to the input graph")
    tree = DecompositionTree()
    index: dict[int, int] = {}

    def add(node: DtNode, labels: dict[int, int]) -> int:
        if len(node.classes) > len(set(labels.values())):
            raise CutcraftError("twin-class count exceeds the expression's label count")
        tree.nodes.append(node)
        return len(tree.nodes) - 1

    kept: dict[int, dict[int, int]] = {}
    for node, labels, _ in _labelled(expr):
        if node.op == "intro":
            v = node.args[0]
            index[id(node)] = add(DtNode(frozenset({v}), ((v,),), vertex=v), labels)
            kept[id(node)] = dict(labels)
        elif node.op == "union":
            current = index.pop(id(node.children[0]))
            merged = kept.pop(id(node.children[0]))
            for child in node.children[1:]:
                right = index.pop(id(child))
                merged = {**merged, **kept.pop(id(child))}
                vertices = tree.nodes[current].vertices | tree.nodes[right].vertices
                parent = DtNode(vertices, twin_classes(g, vertices), (current, right))
                current = add(parent, merged)
            index[id(node)] = current
            kept[id(node)] = dict(labels)
        else:
            index[id(node)] = index.pop(id(node.children[0]))
            kept.pop(id(node.children[0]))
            kept[id(node)] = dict(labels)
    for node in tree.nodes:
        for child in node.children:
            _class_map(tree.nodes[child], node)
    logger.debug("decomposition tree with %d nodes, width %d", len(tree.nodes), tree.width)
    if tree.width > cap:
        raise BudgetExceeded(f"decomposition-tree width {tree.width} exceeds the cap of {cap}")
    return tree


# -- dynamic programme -------------------------------------------------------------


def cross_edges(pa: int, pa_bar: int, pb: int, pb_bar: int, adjacent: bool) -> int:
    return pa * pb_bar + pb * pa_bar if adjacent else 0


# components of one side inside L_v: (touched parent classes, several components?) sorted
Signature = tuple[tuple[tuple[int, ...], bool], ...]
StateKey = tuple[tuple[int, ...], Signature, Signature]


def _merge_side(
    sig_a: Signature,
    sig_b: Signature,
    links: Sequence[tuple[int, int]],
    lift_a: Sequence[int],
    lift_b: Sequence[int],
    dead: frozenset[int],
) -> Optional[Signature]:
    """Merge two children's components of one side; None when the side can no longer be connected."""
    offset = len(sig_a)
    uf = UnionFind(range(offset + len(sig_b)))
    for i, j in links:
        left = [k for k, (touch, _) in enumerate(sig_a) if i in touch]
        right = [offset + k for k, (touch, _) in enumerate(sig_b) if j in touch]
        for x in left:
            for y in right:
                uf.union(x, y)
    entries = [(touch, multi, lift_a) for touch, multi in sig_a] + [(touch, multi, lift_b) for touch, multi in sig_b]
    merged: dict[tuple[int, ...], bool] = {}
    for group in uf.groups():
        lifted: set[int] = set()
        for k in group:
            child_touch, _, lift = entries[k]
            lifted.update(lift[c] for c in child_touch)
        touch = tuple(sorted(lifted))
        multi = len(group) == 1 and entries[group[0]][1]
        merged[touch] = touch in merged or multi
    signature = tuple(sorted(merged.items()))
    several = len(signature) > 1 or (signature and signature[0][1])
    if several and any(all(c in dead for c in touch) for touch, _ in signature):
        return None
    return signature


class CliqueWidthDP:
    def __init__(
        self,
        g: Graph,
        tree: DecompositionTree,
        *,
        minimal: bool,
        forbid_s: frozenset[int] = frozenset(),
        forbid_t: frozenset[int] = frozenset(),
    ):
        self.g = g
        self.tree = tree
        self.minimal = minimal
        self.forbid_s = frozenset(forbid_s)
        self.forbid_t = frozenset(forbid_t)
        self.tables: list[dict[StateKey, tuple[int, Optional[tuple[StateKey, StateKey]]]]] = []
        self.peak_cells = 0

    def _leaf(self, node: DtNode):
        v = node.vertex
        table = {}
        single: Signature = (((0,), False),)
        if v not in self.forbid_s:
            table[((1,), single, ())] = (0, None)
        if v not in self.forbid_t:
            table[((0,), (), single if self.minimal else ())] = (0, None)
        return table

    def _combine(self, node: DtNode):
        g = self.g
        a, b = (self.tree.nodes[c] for c in node.children)
        table_a, table_b = (self.tables[c] for c in node.children)
        lift_a, lift_b = _class_map(a, node), _class_map(b, node)
        links = [
            (i, j)
            for i, ca in enumerate(a.classes)
            for j, cb in enumerate(b.classes)
            if g.has_edge(ca[0], cb[0])
        ]
        outside = ~mask_of(node.vertices)
        dead = frozenset(k for k, cls in enumerate(node.classes) if not g.masks[cls[0]] & outside)
        size_a = [len(c) for c in a.classes]
        size_b = [len(c) for c in b.classes]
        width = len(node.classes)

        table = {}
        for ka, (va, _) in table_a.items():
            pa = ka[0]
            for kb, (vb, _) in table_b.items():
                pb = kb[0]
                s_side = _merge_side(ka[1], kb[1], [(i, j) for i, j in links if pa[i] and pb[j]], lift_a, lift_b, dead)
                if s_side is None:
                    continue
                t_side: Signature = ()
                if self.minimal:
                    t_side = _merge_side(
                        ka[2],
                        kb[2],
                        [(i, j) for i, j in links if pa[i] < size_a[i] and pb[j] < size_b[j]],
                        lift_a,
                        lift_b,
                        dead,
                    )
                    if t_side is None:
                        continue
                counts = [0] * width
                for i, p in enumerate(pa):
                    counts[lift_a[i]] += p
                for j, p in enumerate(pb):
                    counts[lift_b[j]] += p
                value = va + vb + sum(
                    cross_edges(pa[i], size_a[i] - pa[i], pb[j], size_b[j] - pb[j], True) for i, j in links
                )
                key = (tuple(counts), s_side, t_side)
                if key not in table or value > table[key][0]:
                    table[key] = (value, (ka, kb))
        return table

    def run(self) -> Optional[tuple[int, StateKey]]:
        for node in self.tree.nodes:
            table = self._leaf(node) if node.vertex is not None else self._combine(node)
            self.tables.append(table)
            self.peak_cells = max(self.peak_cells, len(table))
        n = self.g.n
        connected: Signature = (((0,), False),)
        best = None
        for key, (value, _) in self.tables[self.tree.root].items():
            p = key[0][0]
            if key[1] != connected:
                continue
            if self.minimal and (p == n or key[2] != connected):
                continue
            if best is None or value > best[0] or (value == best[0] and key < best[1]):
                best = (value, key)
        return best

    def witness(self, key: StateKey) -> list[int]:
        side = []
        stack = [(self.tree.root, key)]
        while stack:
            index, key = stack.pop()
            node = self.tree.nodes[index]
            if node.vertex is not None:
                if key[0][0]:
                    side.append(node.vertex)
                continue
            ka, kb = self.tables[index][key][1]
            stack.append((node.children[0], ka))
            stack.append((node.children[1], kb))
        return sorted(side)


def solve_cw(
    g: Graph,
    tree: DecompositionTree,
    problem: Problem,
    anchors: Optional[Sequence[int]] = None,
) -> SolveReport:
    start = time.perf_counter()
    g.require_connected()
    anchors = check_anchors(g, problem, anchors)
    if sorted(tree.nodes[tree.root].vertices) != list(g.vertices):
        raise InputError("decomposition tree does not cover the graph")
    forbid_s = frozenset(anchors[1:])
    forbid_t = frozenset(anchors[:1])
    dp = CliqueWidthDP(g, tree, minimal=problem.minimal, forbid_s=forbid_s, forbid_t=forbid_t)
    best = dp.run()
    optimum = witness = None
    if best is not None:
        optimum, witness = best[0], dp.witness(best[1])
    logger.info("%s via clique-width (w=%d) on n=%d: %s", problem.value, tree.width, g.n, optimum)
    return SolveReport(
        problem=problem,
        algorithm=Algorithm.CLIQUEWIDTH,
        n=g.n,
        m=g.m,
        optimum=optimum,
        witness=witness,
        anchors=list(anchors) or None,
        elapsed_ms=round((time.perf_counter() - start) * 1000, 3),
        peak_cells=dp.peak_cells,
    )


def solve_cliquewidth(
    g: Graph,
    problem: Problem,
    expr: Optional[CwExpression] = None,
    *,
    anchors: Optional[Sequence[int]] = None,
    cap: Optional[int] = None,
) -> SolveReport:
    """Build the tree from expr, or from linear_expression(g) when none is given, and solve."""
    if g.n == 0:
        return SolveReport(
            problem=problem,
            algorithm=Algorithm.CLIQUEWIDTH,
            n=0,
            m=0,
            optimum=None if problem.minimal else 0,
            witness=None if problem.minimal else [],
        )
    expr = linear_expression(g) if expr is None else expr
    return solve_cw(g, build_decomposition_tree(g, expr, cap=cap), problem, anchors)
