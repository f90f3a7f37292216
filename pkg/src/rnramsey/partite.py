"""Part-structured RN graphs over a good complete template, and the product step.

A graph is partite over a template A (one part per template vertex, parts consecutive
in the linear order) when every R-edge projects to an R-pair of A and every N-edge to
an N-pair.  Intra-part pairs are forced empty by irreflexivity, cross edges ascend with
the parts, and every copy of A meets each part exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .analysis import is_good
from .arrow import ArrowVerdict, BaseOracle, SearchLimits, _proper_coloring_search
from .arrow import make_coloring, oracle_ramsey
from .embeddings import Copy, enumerate_copies, is_embedding
from .structures import Homomorphism, RNGraph, StructureError, fuse, is_complete, make_rn_graph


class PartProjectionViolation(StructureError):
    pass


class PartOrderViolation(StructureError):
    pass


class IntraPartEdge(StructureError):
    pass


@dataclass(frozen=True)
class APartiteRNGraph:
    """RN graph with a part per template vertex; part t belongs to the t-th smallest."""

    A: RNGraph
    base: RNGraph
    parts: tuple[tuple[int, ...], ...]

    @cached_property
    def part_of(self) -> tuple[int, ...]:
        owner = [-1] * self.base.n
        for t, members in enumerate(self.parts):
            for v in members:
                owner[v] = t
        return tuple(owner)

    def template_vertex(self, t: int) -> int:
        """Template vertex owning part t (the t-th smallest in A's order)."""
        return self.A.order[t]


def check_partition(base: RNGraph, parts, template: RNGraph) -> None:
    """Shared partite-condition checker: cover, consecutive blocks, edge projection."""
    if len(parts) != template.n:
        raise StructureError(f"expected {template.n} parts, got {len(parts)}")
    seen: set[int] = set()
    for members in parts:
        for v in members:
            if v in seen or not (0 <= v < base.n):
                raise StructureError("parts do not partition the vertex set", v)
            seen.add(v)
    if len(seen) != base.n:
        missing = min(set(range(base.n)) - seen)
        raise StructureError("parts do not cover the vertex set", missing)
    offset = 0
    for t, members in enumerate(parts):
        block = set(range(offset, offset + len(members)))
        for v in members:
            if base.rank[v] not in block:
                raise PartOrderViolation(
                    f"part {t} is not a consecutive block of the order", v
                )
        offset += len(members)
    owner = [-1] * base.n
    for t, members in enumerate(parts):
        for v in members:
            owner[v] = t
    for name, rel, template_rel in (("R", base.R, template.R), ("N", base.N, template.N)):
        for x, y in sorted(rel):
            s, t = owner[x], owner[y]
            if s == t:
                raise IntraPartEdge(f"{name} edge inside part {s}", (x, y))
            if (template.order[s], template.order[t]) not in template_rel:
                raise PartProjectionViolation(
                    f"{name} edge does not project into the template", (x, y)
                )


def make_apartite(A: RNGraph, base: RNGraph, parts) -> APartiteRNGraph:
    """Validate and build a partite graph over a good complete template."""
    if not is_complete(A):
        raise StructureError("template must be complete")
    if not is_good(A):
        raise StructureError("template must be good")
    parts = tuple(tuple(members) for members in parts)
    check_partition(base, parts, A)
    return APartiteRNGraph(A, base, parts)


def projection(graph: APartiteRNGraph) -> Homomorphism:
    """Collapse each part onto its template vertex."""
    mapping = tuple(graph.template_vertex(graph.part_of[v]) for v in range(graph.base.n))
    return Homomorphism(mapping, graph.base, graph.A)


def crossing_copies(graph: APartiteRNGraph) -> list[Copy]:
    """All copies of the template in the underlying graph; each must be crossing."""
    copies = enumerate_copies(graph.A, graph.base)
    for copy in copies:
        touched = sorted(graph.part_of[v] for v in copy.image)
        assert touched == list(range(graph.A.n)), "template copy is not crossing"
    return copies


def partite_embeddings(pattern: APartiteRNGraph, host: APartiteRNGraph) -> list[Copy]:
    """Part-preserving copies of pattern in host (both over the same template)."""
    if pattern.A != host.A:
        raise StructureError("pattern and host are over different templates")
    src = pattern.base.order
    out: list[Copy] = []
    image: list[int] = []

    def extend(i: int) -> None:
        if i == pattern.base.n:
            vmap = [0] * pattern.base.n
            for k, v in enumerate(image):
                vmap[src[k]] = v
            out.append(Copy(tuple(image), tuple(vmap), pattern.base, host.base))
            return
        v = src[i]
        part = host.parts[pattern.part_of[v]]
        floor = host.base.rank[image[-1]] if image else -1
        for w in part:
            if host.base.rank[w] <= floor:
                continue
            ok = True
            for k in range(i):
                if pattern.base.status(src[k], v) != host.base.status(image[k], w):
                    ok = False
                    break
            if ok:
                image.append(w)
                extend(i + 1)
                image.pop()

    extend(0)
    return out


@dataclass(frozen=True)
class ProductResult:
    """Partite product of a template with a base witness, plus its lift bookkeeping.

    lifts[i] is the part-respecting copy of the pattern obtained from base E-copy i;
    diagonals pairs each template-clique copy in the base witness with the template
    copy it induces in the product.
    """

    apartite: APartiteRNGraph
    base_witness: RNGraph
    certified: bool
    source: str
    lifts: tuple[Copy, ...]
    base_e_copies: tuple[Copy, ...] = field(compare=False, default=())
    diagonals: tuple[tuple[Copy, Copy], ...] = field(compare=False, default=())


def product_relations(A: RNGraph, witness: RNGraph):
    """The product's relation sets over vertex ids t * witness.n + rank(u).

    Both product relations consume the witness's R: an R-pair needs a template R-pair
    above an R-pair of the witness, and an N-pair needs a template N-pair above an
    R-pair of the witness.  The witness's N never enters the product.
    """
    wn = witness.n
    ids = {}
    for t in range(A.n):
        for k, u in enumerate(witness.order):
            ids[(t, u)] = t * wn + k
    R = set()
    N = set()
    for a, a2 in A.R:
        s, t = A.rank[a], A.rank[a2]
        for u, w in witness.R:
            R.add((ids[(s, u)], ids[(t, w)]))
    for a, a2 in A.N:
        s, t = A.rank[a], A.rank[a2]
        for u, w in witness.R:
            N.add((ids[(s, u)], ids[(t, w)]))
    return frozenset(R), frozenset(N), ids


def product_construction(A: RNGraph, pattern: APartiteRNGraph, oracle: BaseOracle) -> ProductResult:
    """Partite product step: find a base witness, build the product, lift the copies.

    The base oracle is queried on the relation-fused template and pattern: a lifted
    pair lands in either product relation only through an R-pair of the witness, so
    the witness must arrow the fused pattern over fused-template cliques for the lifts
    to be genuine copies.
    """
    if pattern.A != A:
        raise StructureError("pattern is over a different template")
    fused_a = fuse(A)
    fused_e = fuse(pattern.base)
    wit = oracle_ramsey(oracle, fused_a, fused_e)
    witness = wit.graph
    wn = witness.n
    R, N, ids = product_relations(A, witness)
    n = A.n * wn
    base = make_rn_graph(n, R, N)
    parts = tuple(tuple(range(t * wn, (t + 1) * wn)) for t in range(A.n))
    apartite = make_apartite(A, base, parts)

    base_e_copies = tuple(enumerate_copies(fused_e, witness))
    lifts = []
    for e_copy in base_e_copies:
        vmap = tuple(
            ids[(pattern.part_of[v], e_copy.map[v])] for v in range(pattern.base.n)
        )
        image = tuple(sorted(vmap, key=lambda x: base.rank[x]))
        lift = Copy(image, vmap, pattern.base, base)
        assert is_embedding(vmap, pattern.base, base), "lift is not an embedding"
        for v in range(pattern.base.n):
            assert apartite.part_of[vmap[v]] == pattern.part_of[v], "lift moved a part"
        lifts.append(lift)

    diagonals = []
    for a_copy in enumerate_copies(fused_a, witness):
        vmap = tuple(ids[(A.rank[a], a_copy.map[a])] for a in range(A.n))
        image = tuple(sorted(vmap, key=lambda x: base.rank[x]))
        diag = Copy(image, vmap, A, base)
        assert is_embedding(vmap, A, base), "diagonal is not a copy of the template"
        diagonals.append((a_copy, diag))

    return ProductResult(
        apartite, witness, wit.certified, wit.source, tuple(lifts),
        base_e_copies, tuple(diagonals),
    )


def check_partite_arrow(
    host: APartiteRNGraph,
    pattern: APartiteRNGraph,
    r: int,
    family: tuple[Copy, ...] | None = None,
    limits: SearchLimits | None = None,
) -> ArrowVerdict:
    """Exact partite arrow: every r-coloring of the template copies in the host admits
    a monochromatic member of the copy family (default: all part-respecting copies)."""
    limits = limits or SearchLimits()
    a_copies = crossing_copies(host)
    members = list(family) if family is not None else partite_embeddings(pattern, host)
    if not members:
        coloring = make_coloring(a_copies, [0] * len(a_copies), r)
        return ArrowVerdict(False, coloring, host.base, pattern.base, host.A, r)
    index = {c.image: i for i, c in enumerate(a_copies)}
    edges = []
    for copy in members:
        inside = frozenset(copy.image)
        edges.append(
            frozenset(i for i, ac in enumerate(a_copies) if frozenset(ac.image) <= inside)
        )
    if any(not e for e in edges):
        return ArrowVerdict(True, None, host.base, pattern.base, host.A, r)
    assignment, nodes = _proper_coloring_search(len(a_copies), edges, r, limits)
    if assignment is None:
        return ArrowVerdict(True, None, host.base, pattern.base, host.A, r, nodes_explored=nodes)
    return ArrowVerdict(
        False,
        make_coloring(a_copies, assignment, r),
        host.base,
        pattern.base,
        host.A,
        r,
        nodes_explored=nodes,
    )
