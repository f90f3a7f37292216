"""Core ordered structures: posets with linear extensions and two-relation ordered graphs.

A structure lives on vertex ids 0..n-1.  `order` is a permutation of the ids giving the
linear order (order[k] is the k-th smallest vertex).  Relations are sets of ordered pairs
and every relation pair must point forward along the linear order, so relation digraphs
are acyclic by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

Pair = tuple[int, int]


class StructureError(ValueError):
    """Base for structural validation failures; args carry the violating witness."""


class NotIrreflexive(StructureError):
    pass


class NotTransitive(StructureError):
    pass


class NotLinearExtension(StructureError):
    pass


class NotDisjoint(StructureError):
    pass


class NotCompatible(StructureError):
    pass


def _check_ids(n: int, rel: frozenset[Pair], name: str) -> None:
    if n < 0:
        raise StructureError(f"negative vertex count {n}")
    for x, y in rel:
        if not (0 <= x < n and 0 <= y < n):
            raise StructureError(f"{name} pair out of range", (x, y))


def _check_order(n: int, order: tuple[int, ...]) -> None:
    if sorted(order) != list(range(n)):
        raise StructureError(f"order is not a permutation of 0..{n - 1}", order)


@dataclass(frozen=True)
class OrderedPoset:
    """Strict partial order `R` (stored transitively closed) with linear extension `order`."""

    n: int
    R: frozenset[Pair]
    order: tuple[int, ...]

    @cached_property
    def rank(self) -> tuple[int, ...]:
        """rank[v] = position of vertex v in the linear order."""
        pos = [0] * self.n
        for k, v in enumerate(self.order):
            pos[v] = k
        return tuple(pos)

    def before(self, x: int, y: int) -> bool:
        return self.rank[x] < self.rank[y]

    def forward_pairs(self):
        """All pairs (x, y) with x strictly before y, ascending in the order."""
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield self.order[i], self.order[j]


@dataclass(frozen=True)
class RNGraph:
    """Linear order with two disjoint forward relations R and N."""

    n: int
    R: frozenset[Pair]
    N: frozenset[Pair]
    order: tuple[int, ...]

    @cached_property
    def rank(self) -> tuple[int, ...]:
        pos = [0] * self.n
        for k, v in enumerate(self.order):
            pos[v] = k
        return tuple(pos)

    def before(self, x: int, y: int) -> bool:
        return self.rank[x] < self.rank[y]

    def forward_pairs(self):
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield self.order[i], self.order[j]

    def status(self, x: int, y: int) -> str:
        """Relation status of the ordered pair: 'R', 'N' or ''."""
        if (x, y) in self.R:
            return "R"
        if (x, y) in self.N:
            return "N"
        return ""


@dataclass(frozen=True)
class Homomorphism:
    """Vertex map between structures; map[v] is the image of source vertex v."""

    map: tuple[int, ...]
    source: object = field(compare=False)
    target: object = field(compare=False)


def make_ordered_poset(n: int, R, order=None) -> OrderedPoset:
    """Validate and build an OrderedPoset.

    The caller supplies R already transitively closed; a missing composite pair is an
    error, not something to repair.  `order` defaults to the identity.
    """
    R = frozenset((int(x), int(y)) for x, y in R)
    order = tuple(range(n)) if order is None else tuple(order)
    _check_ids(n, R, "R")
    _check_order(n, order)
    for x, y in R:
        if x == y:
            raise NotIrreflexive("reflexive pair", (x, x))
    succ: dict[int, list[int]] = {}
    for x, y in R:
        succ.setdefault(x, []).append(y)
    for x, y in R:
        for z in succ.get(y, ()):
            if (x, z) not in R:
                raise NotTransitive("missing composite pair", (x, z))
    poset = OrderedPoset(n, R, order)
    for x, y in R:
        if not poset.before(x, y):
            raise NotLinearExtension("relation pair runs against the order", (x, y))
    return poset


def make_rn_graph(n: int, R, N, order=None) -> RNGraph:
    """Validate and build an RNGraph: R and N disjoint, both forward along the order."""
    R = frozenset((int(x), int(y)) for x, y in R)
    N = frozenset((int(x), int(y)) for x, y in N)
    order = tuple(range(n)) if order is None else tuple(order)
    _check_ids(n, R, "R")
    _check_ids(n, N, "N")
    _check_order(n, order)
    common = R & N
    if common:
        raise NotDisjoint("pair in both R and N", min(common))
    graph = RNGraph(n, R, N, order)
    for name, rel in (("R", R), ("N", N)):
        for x, y in rel:
            if not graph.before(x, y):
                raise NotCompatible(f"{name} pair runs against the order", (x, y))
    return graph


def poset_to_complete_rn(poset: OrderedPoset) -> RNGraph:
    """Complete the poset: N collects every forward pair not already related by R."""
    N = frozenset(p for p in poset.forward_pairs() if p not in poset.R)
    return RNGraph(poset.n, poset.R, N, poset.order)


def rn_to_poset(graph: RNGraph) -> OrderedPoset:
    """Recover the poset from a complete RN graph whose R is transitive."""
    if not is_complete(graph):
        raise StructureError("only complete RN graphs convert back to posets")
    return make_ordered_poset(graph.n, graph.R, graph.order)


def is_complete(graph: RNGraph) -> bool:
    """True when every forward pair is related by exactly one of R, N."""
    return all(p in graph.R or p in graph.N for p in graph.forward_pairs())


def fuse(graph: RNGraph) -> RNGraph:
    """Collapse both relations into R; the result has empty N."""
    return RNGraph(graph.n, graph.R | graph.N, frozenset(), graph.order)


def chain(k: int) -> OrderedPoset:
    """Total order on k vertices (identity order, R = all forward pairs)."""
    if k < 1:
        raise StructureError(f"chain size must be positive, got {k}")
    R = frozenset((i, j) for i in range(k) for j in range(i + 1, k))
    return OrderedPoset(k, R, tuple(range(k)))


def antichain(k: int) -> OrderedPoset:
    """Empty order on k vertices (identity order, R empty)."""
    if k < 1:
        raise StructureError(f"antichain size must be positive, got {k}")
    return OrderedPoset(k, frozenset(), tuple(range(k)))
