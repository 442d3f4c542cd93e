"""Hard-instance generators from the NP-hardness constructions, with witness assembly and brute-force checks."""
from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from pydantic import BaseModel, Field

from .errors import InputError
from .graph import Graph, mask_cut_size, mask_of, members
from .models import Problem

logger = logging.getLogger("cutcraft.reductions")


# -- formulas --------------------------------------------------------------


@dataclass(frozen=True)
class Clause:
    positive: bool
    variables: tuple[int, ...]

    @property
    def span(self) -> tuple[int, int]:
        return min(self.variables), max(self.variables)


@dataclass(frozen=True)
class MonotoneFormula:
    """Monotone 3-CNF; variables are laid out on a line in index order."""

    n_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause.variables) != 3 or len(set(clause.variables)) != 3:
                raise InputError(f"clause {clause} needs three distinct variables")
            if not all(0 <= x < self.n_vars for x in clause.variables):
                raise InputError(f"clause {clause} names a variable outside 1..{self.n_vars}")
        problem = layout_violation(self)
        if problem:
            raise InputError(problem)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[x] == c.positive for x in c.variables) for c in self.clauses)


def layout_violation(formula: MonotoneFormula) -> Optional[str]:
    """Clauses of one sign must have laminar spans, each nested clause sitting between two legs of its outer one."""
    for a, b in itertools.combinations(formula.clauses, 2):
        if a.positive != b.positive:
            continue
        (a_lo, a_hi), (b_lo, b_hi) = a.span, b.span
        if a_lo < b_lo < a_hi < b_hi or b_lo < a_lo < b_hi < a_hi:
            return f"clauses {a.variables} and {b.variables} cross"
        for outer, inner in ((a, b), (b, a)):
            lo, hi = inner.span
            if outer.span[0] <= lo and hi <= outer.span[1] and any(lo < x < hi for x in outer.variables):
                return f"clause {inner.variables} encloses a leg of {outer.variables}"
    return None


def parse_formula(text: str) -> MonotoneFormula:
    """`p mono <n> <m>` header, then one clause per line: `+ a b c` or `- a b c`, 1-based."""
    header = None
    clauses = []
    for number, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1] != "mono":
                raise InputError(f"line {number}: expected 'p mono <n> <m>'")
            header = (int(tokens[2]), int(tokens[3]))
            continue
        if header is None or tokens[0] not in "+-" or len(tokens) != 4:
            raise InputError(f"line {number}: malformed clause")
        try:
            variables = tuple(int(t) - 1 for t in tokens[1:])
        except ValueError:
            raise InputError(f"line {number}: variable ids must be integers") from None
        clauses.append(Clause(tokens[0] == "+", variables))
    if header is None:
        raise InputError("missing 'p mono' header")
    if header[1] != len(clauses):
        raise InputError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return MonotoneFormula(header[0], tuple(clauses))


def satisfying_assignment(formula: MonotoneFormula) -> Optional[tuple[bool, ...]]:
    for assignment in itertools.product((False, True), repeat=formula.n_vars):
        if formula.satisfied_by(assignment):
            return assignment
    return None


# -- instances ---------------------------------------------------------------


class Sidecar(BaseModel):
    construction: str
    problem: Problem
    threshold: Optional[int] = Field(None, description="Decision threshold k of the generated instance")
    params: dict = Field(default_factory=dict)
    roles: dict[str, list[int]] = Field(default_factory=dict, description="Gadget role -> 1-based vertex ids")


@dataclass
class ReducedInstance:
    construction: str
    problem: Problem
    graph: Graph
    threshold: Optional[int]
    provenance: dict[str, list[int]] = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def sidecar(self) -> Sidecar:
        return Sidecar(
            construction=self.construction,
            problem=self.problem,
            threshold=self.threshold,
            params=self.params,
            roles={role: [v + 1 for v in vs] for role, vs in self.provenance.items()},
        )

    def to_sidecar(self) -> str:
        return json.dumps(self.sidecar().model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int]] = []
        self.roles: dict[str, list[int]] = {}

    def add(self, role: str, count: int = 1) -> list[int]:
        ids = list(range(self.n, self.n + count))
        self.n += count
        self.roles.setdefault(role, []).extend(ids)
        return ids

    def connect(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def pendants(self, role: str, anchor: int, count: int) -> None:
        for leaf in self.add(role, count):
            self.connect(anchor, leaf)

    def graph(self) -> Graph:
        return Graph(self.n, tuple(self.edges))


def _perfect_square(k: int) -> bool:
    return k >= 0 and math.isqrt(k) ** 2 == k


def pm3sat_threshold(n: int, m: int, K: int) -> int:
    return m * math.isqrt(K) + n * K * K + (2 * n - 1) * K + 2 * (n - 1)


def gen_pm3sat_cmc(formula: MonotoneFormula, K: Optional[int] = None, *, unsound_scale: bool = False) -> ReducedInstance:
    """Planar bipartite CMC instance: literal pairs with helper, clause and bridge gadgets."""
    n, m = formula.n_vars, formula.m
    if n < 1:
        raise InputError("formula needs at least one variable")
    K = (m + 1) ** 2 if K is None else K
    if not _perfect_square(K) or K < 1:
        raise InputError(f"K={K} is not a positive perfect square")
    if K <= m * m and not unsound_scale:
        raise InputError(f"K={K} must exceed m^2={m * m}; pass unsound_scale to go below")
    root = math.isqrt(K)

    b = _Builder()
    literal = b.add("literal", 2 * n)
    helpers = b.add("helper", n * K)
    for i in range(n):
        for k in range(K):
            h = helpers[i * K + k]
            b.connect(h, literal[2 * i])
            b.connect(h, literal[2 * i + 1])
    for h in helpers:
        b.pendants("helper_pendant", h, K)
    clauses = b.add("clause", m)
    for j, clause in enumerate(formula.clauses):
        for x in clause.variables:
            b.connect(clauses[j], literal[2 * x if clause.positive else 2 * x + 1])
    for c in clauses:
        b.pendants("clause_pendant", c, root)
    bridges = b.add("bridge", n - 1)
    for i, bridge in enumerate(bridges):
        for v in literal[2 * i : 2 * i + 4]:
            b.connect(bridge, v)
    for bridge in bridges:
        b.pendants("bridge_pendant", bridge, K)

    threshold = pm3sat_threshold(n, m, K)
    logger.info("pm3sat instance: n=%d m=%d K=%d -> %d vertices, threshold %d", n, m, K, b.n, threshold)
    return ReducedInstance(
        "pm3sat", Problem.CMC, b.graph(), threshold, b.roles, {"n": n, "m": m, "K": K, "unsound_scale": unsound_scale}
    )


def pm3sat_witness(instance: ReducedInstance, assignment: Sequence[bool]) -> list[int]:
    """True literals, every clause, helper and bridge vertex."""
    literal = instance.provenance["literal"]
    side = [literal[2 * i if value else 2 * i + 1] for i, value in enumerate(assignment)]
    for role in ("helper", "clause", "bridge"):
        side.extend(instance.provenance.get(role, []))
    return sorted(side)


def gen_subdivision_mmc(g: Graph, k: Optional[int] = None) -> ReducedInstance:
    """Split every edge by a new vertex; edge number i becomes vertex n + i."""
    g.require_connected()
    b = _Builder()
    b.add("original", g.n)
    for u, v in g.edges:
        (middle,) = b.add("subdivision")
        b.connect(u, middle)
        b.connect(v, middle)
    return ReducedInstance("subdivision", Problem.MMC, b.graph(), k, b.roles, {"source_n": g.n, "source_m": g.m})


# -- exact cover -------------------------------------------------------------


def parse_family(text: str) -> tuple[int, list[tuple[int, int, int]]]:
    """`p x3c <elements> <triples>` header, then one 1-based triple per line."""
    header = None
    triples = []
    for number, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        try:
            if tokens[0] == "p":
                if len(tokens) != 4 or tokens[1] != "x3c":
                    raise InputError(f"line {number}: expected 'p x3c <elements> <triples>'")
                header = (int(tokens[2]), int(tokens[3]))
                continue
            if header is None or len(tokens) != 3:
                raise InputError(f"line {number}: malformed triple")
            triples.append(tuple(int(t) - 1 for t in tokens))
        except ValueError:
            raise InputError(f"line {number}: expected integers") from None
    if header is None:
        raise InputError("missing 'p x3c' header")
    if header[1] != len(triples):
        raise InputError(f"header announces {header[1]} triples, found {len(triples)}")
    return header[0], triples


def _check_family(n_elements: int, triples: Sequence[Sequence[int]]) -> None:
    if n_elements < 3 or n_elements % 3:
        raise InputError(f"element count {n_elements} is not a positive multiple of 3")
    for t in triples:
        if len(t) != 3 or len(set(t)) != 3 or not all(0 <= x < n_elements for x in t):
            raise InputError(f"triple {tuple(x + 1 for x in t)} is not three distinct elements")


def exact_cover(n_elements: int, triples: Sequence[Sequence[int]]) -> Optional[list[int]]:
    """Indices of an exact cover, by brute force over the distinct triples."""
    _check_family(n_elements, triples)
    first: dict[frozenset[int], int] = {}
    for i, t in enumerate(triples):
        first.setdefault(frozenset(t), i)
    distinct = sorted(first.items(), key=lambda item: item[1])
    need = n_elements // 3
    for pick in itertools.combinations(distinct, need):
        covered = set().union(*(t for t, _ in pick))
        if len(covered) == n_elements:
            return [i for _, i in pick]
    return None


def x3c_threshold(n: int, m: int, M: int) -> int:
    return (m - n) ** 2 + 3 * m - 3 * n + (m - 2 * n) * M


def gen_x3c_cmc(
    n_elements: int,
    triples: Sequence[Sequence[int]],
    M: Optional[int] = None,
    *,
    unsound_scale: bool = False,
) -> ReducedInstance:
    """Split-graph CMC instance: a clique U over the triples plus padding, elements and pendant blocks independent."""
    _check_family(n_elements, triples)
    n = n_elements // 3
    occurrences = [sum(x in t for t in triples) for x in range(n_elements)]
    if min(occurrences) == 0:
        missing = occurrences.index(0) + 1
        raise InputError(f"element {missing} occurs in no triple")
    copies = math.ceil(3 * (n + 2) / min(occurrences))
    family = [tuple(t) for t in triples] * copies
    m = len(family)
    M = 3 * n + 1 if M is None else M
    if M < 3 * n + 1 and not unsound_scale:
        raise InputError(f"M={M} must be at least 3n+1={3 * n + 1}; pass unsound_scale to go below")
    if M < 0:
        raise InputError("M must be non-negative")

    b = _Builder()
    sets = b.add("set", m)
    padding = b.add("padding", m - 2 * n)
    clique = sets + padding
    for u, v in itertools.combinations(clique, 2):
        b.connect(u, v)
    elements = b.add("element", n_elements)
    for i, t in enumerate(family):
        for x in t:
            b.connect(sets[i], elements[x])
    for u in padding:
        b.pendants("block", u, M)

    threshold = x3c_threshold(n, m, M)
    logger.info("x3c instance: n=%d m=%d (x%d) M=%d -> %d vertices, threshold %d", n, m, copies, M, b.n, threshold)
    return ReducedInstance(
        "x3c",
        Problem.CMC,
        b.graph(),
        threshold,
        b.roles,
        {"elements": n_elements, "triples": len(triples), "copies": copies, "m": m, "M": M, "unsound_scale": unsound_scale},
    )


def x3c_witness(instance: ReducedInstance, cover: Sequence[int]) -> list[int]:
    """Cover sets, all padding vertices and every element."""
    sets = instance.provenance["set"]
    return sorted([sets[i] for i in cover] + instance.provenance["padding"] + instance.provenance["element"])


# -- max cut -------------------------------------------------------------------


def max_cut(g: Graph) -> tuple[int, list[int]]:
    """Brute-force maximum cut with vertex 0 on the returned side."""
    best, best_sub = 0, 1 if g.n else 0
    for sub in range(1, 1 << g.n, 2):
        size = mask_cut_size(g, sub)
        if size > best:
            best, best_sub = size, sub
    return best, members(best_sub)


def gen_maxcut_mmc_split(g: Graph, ell: Optional[int] = None, k: Optional[int] = None) -> ReducedInstance:
    """Clique on V plus ell independent copies of every edge, each adjacent to the edge's endpoints."""
    ell = g.n**3 if ell is None else ell
    if ell < 1:
        raise InputError(f"multiplier ell={ell} must be at least 1")
    b = _Builder()
    clique = b.add("vertex", g.n)
    for u, v in itertools.combinations(clique, 2):
        b.connect(u, v)
    for u, v in g.edges:
        for copy in b.add("edge_copy", ell):
            b.connect(u, copy)
            b.connect(v, copy)
    threshold = None if k is None else k * ell
    return ReducedInstance(
        "maxcut-split", Problem.MMC, b.graph(), threshold, b.roles, {"source_n": g.n, "source_m": g.m, "ell": ell, "k": k}
    )


def maxcut_split_witness(source: Graph, instance: ReducedInstance, side: Sequence[int]) -> list[int]:
    """Copies of edges with both ends outside side go with the complement; every other copy joins side."""
    ell = instance.params["ell"]
    inside = set(side)
    result = set(inside)
    for index, (u, v) in enumerate(source.edges):
        if u in inside or v in inside:
            start = source.n + index * ell
            result.update(range(start, start + ell))
    return sorted(result)


def maxcut_split_value(source: Graph, ell: int, side: Sequence[int]) -> int:
    """Cut size of the assembled witness: ell per cut edge plus the cut clique edges."""
    s = len(set(side))
    return mask_cut_size(source, mask_of(side)) * ell + s * (source.n - s)
