"""Partition-arrow verification and the pluggable base witness oracle.

`check_arrow(target, Q, P, r)` decides whether every r-coloring of the copies of P in
the target admits a copy of Q all of whose P-copies share one color.  The verdict comes
from an exact backtracking search for a counterexample coloring (one with no
monochromatic Q-copy); exhaustion proves the arrow.  A seeded random pre-pass hunts for
counterexamples early on larger instances but never decides the positive side.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import cached_property

from .embeddings import Copy, enumerate_copies
from .structures import RNGraph, make_rn_graph

_PREPASS_SEED = 0x5EED
_PREPASS_SAMPLES = 64


class ResourceExceeded(RuntimeError):
    """A configured node, copy, size or time budget ran out; the verdict is unknown."""


class NotFoundWithinBounds(RuntimeError):
    """The bounded witness search space is exhausted without a witness."""


class CertificationFailed(RuntimeError):
    """A supplied witness was refuted by check_arrow."""


@dataclass(frozen=True)
class SearchLimits:
    """Budgets for one exact arrow decision."""

    max_nodes: int = 2_000_000
    max_copies: int = 200_000
    time_budget: float = 120.0


@dataclass(frozen=True)
class Coloring:
    """Total assignment copy-image -> color index, stored sorted for determinism."""

    assignment: tuple[tuple[tuple[int, ...], int], ...]
    r: int

    @cached_property
    def _table(self) -> dict[tuple[int, ...], int]:
        return dict(self.assignment)

    def of(self, copy_or_image) -> int:
        image = copy_or_image.image if isinstance(copy_or_image, Copy) else tuple(copy_or_image)
        return self._table[image]

    def __len__(self) -> int:
        return len(self.assignment)


def make_coloring(copies, colors, r: int) -> Coloring:
    pairs = sorted((c.image, colors[i]) for i, c in enumerate(copies))
    return Coloring(tuple(pairs), r)


@dataclass(frozen=True)
class ArrowVerdict:
    holds: bool
    counterexample: Coloring | None
    target: object = field(compare=False)
    Q: object = field(compare=False)
    P: object = field(compare=False)
    r: int = 2
    nodes_explored: int = field(compare=False, default=0)

    def monochromatic_copy(self, coloring: Coloring) -> Copy:
        """For a holding arrow, produce the promised copy under any total coloring."""
        if not self.holds:
            raise ValueError("verdict does not hold; no monochromatic copy is promised")
        found = find_monochromatic(self.target, coloring, self.Q, self.P)
        if found is None:
            raise AssertionError("arrow verdict holds but a coloring defeats it")
        return found


def _induced(target, image: tuple[int, ...]):
    """Induced substructure on an image set; local id i stands for image[i]."""
    idx = {v: i for i, v in enumerate(image)}
    keep = set(image)
    order = tuple(idx[v] for v in target.order if v in keep)
    R = frozenset((idx[x], idx[y]) for x, y in target.R if x in keep and y in keep)
    if isinstance(target, RNGraph):
        N = frozenset((idx[x], idx[y]) for x, y in target.N if x in keep and y in keep)
        return RNGraph(len(image), R, N, order)
    from .structures import OrderedPoset

    return OrderedPoset(len(image), R, order)


def _hyperedges(target, Q, P, limits: SearchLimits):
    """Copies of P, copies of Q, and per Q-copy the indices of the P-copies inside it.

    Membership is decided by image inclusion; the count per Q-copy must equal the
    number of P-copies in Q itself, which cross-checks the two routes.
    """
    p_copies = enumerate_copies(P, target, limit=limits.max_copies)
    q_copies = enumerate_copies(Q, target, limit=limits.max_copies)
    inner = len(enumerate_copies(P, Q))
    p_sets = [frozenset(c.image) for c in p_copies]
    edges = []
    for q in q_copies:
        q_set = frozenset(q.image)
        members = frozenset(i for i, s in enumerate(p_sets) if s <= q_set)
        assert len(members) == inner, "copy composition mismatch"
        edges.append(members)
    return p_copies, q_copies, edges


def _proper_coloring_search(m: int, edges, r: int, limits: SearchLimits):
    """Assignment with no monochromatic edge, or None when none exists.

    Backtracks over slots 0..m-1 with incremental edge state; a slot's color is capped
    at one past the maximum color already in use, which loses no generality for
    existence.  Branches die as soon as some edge is complete and single-colored; the
    search ends early as soon as every edge carries two colors.
    """
    containing: list[list[int]] = [[] for _ in range(m)]
    for e_idx, members in enumerate(edges):
        for i in members:
            containing[i].append(e_idx)
    edge_size = [len(e) for e in edges]
    seen = [-1] * len(edges)  # -1 untouched, -2 spoiled, else its single color
    remaining = edge_size[:]
    live = len(edges)
    colors = [-1] * m
    trail: list[tuple[int, int]] = []
    nodes = 0
    deadline = time.monotonic() + limits.time_budget

    def assign(i: int, c: int) -> tuple[bool, int]:
        nonlocal live
        mark = len(trail)
        ok = True
        for e in containing[i]:
            remaining[e] -= 1
            if seen[e] == -1:
                trail.append((e, -1))
                seen[e] = c
            elif seen[e] >= 0 and seen[e] != c:
                trail.append((e, seen[e]))
                seen[e] = -2
                live -= 1
            if remaining[e] == 0 and seen[e] != -2:
                ok = False
        return ok, mark

    def undo(i: int, mark: int) -> None:
        nonlocal live
        for e in containing[i]:
            remaining[e] += 1
        while len(trail) > mark:
            e, prev = trail.pop()
            if seen[e] == -2 and prev >= 0:
                live += 1
            seen[e] = prev

    choice = [0] * (m + 1)
    marks = [0] * m
    used_before = [0] * m
    max_used = -1
    i = 0
    while True:
        nodes += 1
        if nodes > limits.max_nodes:
            raise ResourceExceeded(f"arrow search node budget ({limits.max_nodes})")
        if nodes % 4096 == 0 and time.monotonic() > deadline:
            raise ResourceExceeded(f"arrow search time budget after {nodes} nodes")
        if i == m:
            return colors[:], nodes
        if live == 0:
            for j in range(i, m):
                colors[j] = 0
            return colors[:], nodes
        cap = min(r - 1, max_used + 1)
        c = choice[i]
        advanced = False
        while c <= cap:
            ok, mark = assign(i, c)
            if ok:
                colors[i] = c
                marks[i] = mark
                used_before[i] = max_used
                max_used = max(max_used, c)
                choice[i] = c
                i += 1
                choice[i] = 0
                advanced = True
                break
            undo(i, mark)
            c += 1
        if advanced:
            continue
        if i == 0:
            return None, nodes
        i -= 1
        undo(i, marks[i])
        max_used = used_before[i]
        colors[i] = -1
        choice[i] += 1


def check_arrow(target, Q, P, r: int, limits: SearchLimits | None = None) -> ArrowVerdict:
    """Exact decision of target -> (Q)^P_r.

    FAILS verdicts carry a counterexample coloring admitting no monochromatic Q-copy,
    replayable through find_monochromatic.  HOLDS verdicts are proofs by exhaustion of
    the counterexample search.
    """
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    limits = limits or SearchLimits()
    p_copies, q_copies, edges = _hyperedges(target, Q, P, limits)
    if not q_copies:
        coloring = make_coloring(p_copies, [0] * len(p_copies), r)
        return ArrowVerdict(False, coloring, target, Q, P, r)
    if any(not e for e in edges):
        # a Q-copy without P-copies is monochromatic under every coloring
        return ArrowVerdict(True, None, target, Q, P, r)
    m = len(p_copies)
    if m > 2000:
        raise ResourceExceeded(f"{m} P-copies is beyond the exact search ceiling")

    if m > 16 and r >= 2:
        rng = random.Random(_PREPASS_SEED)
        for _ in range(_PREPASS_SAMPLES):
            sample = [rng.randrange(r) for _ in range(m)]
            if all(len({sample[i] for i in e}) > 1 for e in edges):
                return ArrowVerdict(False, make_coloring(p_copies, sample, r), target, Q, P, r)

    assignment, nodes = _proper_coloring_search(m, edges, r, limits)
    if assignment is None:
        return ArrowVerdict(True, None, target, Q, P, r, nodes_explored=nodes)
    return ArrowVerdict(
        False, make_coloring(p_copies, assignment, r), target, Q, P, r, nodes_explored=nodes
    )


def find_monochromatic(target, coloring: Coloring, Q, P) -> Copy | None:
    """First Q-copy (enumeration order) whose P-copies all share a color, else None.

    P-copies are enumerated inside each Q-copy's induced substructure and mapped back,
    a deliberately different route from the checker's image-inclusion scan.
    """
    p_in_q = len(enumerate_copies(P, Q))
    for q in enumerate_copies(Q, target):
        members = enumerate_copies(P, _induced(target, q.image))
        images = [tuple(q.image[local] for local in c.image) for c in members]
        assert len(images) == p_in_q, "copy composition mismatch"
        try:
            colors = {coloring.of(img) for img in images}
        except KeyError as miss:
            raise ValueError(f"coloring is not total: missing copy {miss}") from None
        if len(colors) <= 1:
            return q
    return None


def random_coloring(target, P, r: int, rng: random.Random) -> Coloring:
    copies = enumerate_copies(P, target)
    return make_coloring(copies, [rng.randrange(r) for _ in copies], r)


def greedy_adversarial_coloring(target, Q, P, r: int) -> Coloring:
    """Greedy anti-monochromatic assignment, processing P-copies in enumeration order.

    Each copy takes the color that keeps the fewest Q-copies on track to be
    monochromatic; ties break to the smaller color.
    """
    limits = SearchLimits()
    p_copies, _, edges = _hyperedges(target, Q, P, limits)
    containing: list[list[int]] = [[] for _ in p_copies]
    for e_idx, members in enumerate(edges):
        for i in members:
            containing[i].append(e_idx)
    seen: list[int] = [-1] * len(edges)
    colors = []
    for i in range(len(p_copies)):
        threat = [0] * r
        for e in containing[i]:
            if seen[e] >= 0:
                threat[seen[e]] += 1
        c = min(range(r), key=lambda col: (threat[col], col))
        colors.append(c)
        for e in containing[i]:
            if seen[e] == -1:
                seen[e] = c
            elif seen[e] >= 0 and seen[e] != c:
                seen[e] = -2
    return make_coloring(p_copies, colors, r)


# ---------------------------------------------------------------------------
# Base witness oracle


@dataclass
class BaseOracle:
    """Source of Ramsey witnesses F with F -> (E)^A_2.

    mode 'search' enumerates certified candidates; 'file' loads and certifies a
    supplied witness; 'assume' passes a supplied witness through uncertified.
    """

    mode: str = "search"
    size_bound: int = 16
    time_bound: float = 60.0
    candidate_budget: int = 60_000
    witness: RNGraph | None = None
    witness_path: str | None = None
    arrow_limits: SearchLimits = field(default_factory=SearchLimits)


@dataclass(frozen=True)
class OracleWitness:
    graph: RNGraph
    certified: bool
    source: str


def _is_complete_chain(g: RNGraph) -> bool:
    return not g.N and g.R == frozenset(g.forward_pairs())


def _edgeless(n: int) -> RNGraph:
    return make_rn_graph(n, (), ())


def _chain_rn(n: int) -> RNGraph:
    return make_rn_graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)), ())


def _seed_candidates(A: RNGraph, E: RNGraph, size_bound: int):
    """Closed-form candidate families; every yield is still certified before use."""
    yield E, "search:identity"
    if A.n == 1 and not E.R and not E.N:
        n = 2 * (E.n - 1) + 1
        if n <= size_bound:
            yield _edgeless(n), "search:pigeonhole"
    if _is_complete_chain(A) and _is_complete_chain(E):
        for n in range(E.n + 1, size_bound + 1):
            yield _chain_rn(n), "search:chain"


def _enumerated_candidates(size_bound: int):
    """Every (R, N) assignment over forward pairs of the identity order, by size.

    With the order fixed to the identity, distinct relation sets are distinct up to
    order-preserving isomorphism, so the enumeration is canonical.  Pair states run
    R, then N, then absent, earliest pair most significant.
    """
    for n in range(1, size_bound + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for states in itertools.product((0, 1, 2), repeat=len(pairs)):
            R = frozenset(p for p, s in zip(pairs, states) if s == 0)
            N = frozenset(p for p, s in zip(pairs, states) if s == 1)
            yield RNGraph(n, R, N, tuple(range(n))), "search:enumeration"


def oracle_ramsey(oracle: BaseOracle, A: RNGraph, E: RNGraph) -> OracleWitness:
    """Produce F with F -> (E)^A_2 according to the oracle's mode.

    Search mode returns only witnesses certified by check_arrow.  File mode certifies
    the loaded witness, downgrading to an uncertified pass-through only when the
    certification itself exceeds its budgets.  Assume mode never certifies.
    """
    if oracle.mode == "assume":
        if oracle.witness is None:
            raise ValueError("assume mode requires a witness")
        return OracleWitness(oracle.witness, False, "assume")
    if oracle.mode == "file":
        graph = oracle.witness
        if graph is None:
            if oracle.witness_path is None:
                raise ValueError("file mode requires a witness or witness_path")
            from .io import load_structure

            graph = load_structure(oracle.witness_path)
        try:
            verdict = check_arrow(graph, E, A, 2, oracle.arrow_limits)
        except ResourceExceeded:
            return OracleWitness(graph, False, "file:conditionally-correct")
        if not verdict.holds:
            raise CertificationFailed("supplied witness is refuted by check_arrow")
        return OracleWitness(graph, True, "file")
    if oracle.mode != "search":
        raise ValueError(f"unknown oracle mode {oracle.mode!r}")

    if E.n > oracle.size_bound:
        raise NotFoundWithinBounds(
            f"every witness contains a copy of the {E.n}-vertex pattern, "
            f"beyond the size bound {oracle.size_bound}"
        )
    deadline = time.monotonic() + oracle.time_bound
    tried: set[tuple[int, frozenset, frozenset]] = set()
    budget = oracle.candidate_budget
    for graph, source in itertools.chain(
        _seed_candidates(A, E, oracle.size_bound), _enumerated_candidates(oracle.size_bound)
    ):
        key = (graph.n, graph.R, graph.N)
        if key in tried:
            continue
        tried.add(key)
        budget -= 1
        if budget < 0:
            raise ResourceExceeded(f"candidate budget ({oracle.candidate_budget}) exhausted")
        if time.monotonic() > deadline:
            raise ResourceExceeded(f"search time budget ({oracle.time_bound}s) exhausted")
        verdict = check_arrow(graph, E, A, 2, oracle.arrow_limits)
        if verdict.holds:
            return OracleWitness(graph, True, source)
    raise NotFoundWithinBounds(f"no witness among candidates up to {oracle.size_bound} vertices")
