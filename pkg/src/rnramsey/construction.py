"""Partite recursion: picture zero, amalgamation rounds, the stage tower, finishing.

The recursion state is a picture: an RN graph split into one part per vertex of a host
graph D, together with the part-collapsing homomorphism onto D.  Each round picks one
copy of the pattern A inside D, takes the sub-picture living on that copy's parts,
replaces it by a partite product, and re-glues a fresh copy of the old picture over
every lifted sub-picture copy.  Towers stack completed rounds, raising the guaranteed
quasicycle-freedom bound by one per level; the finisher transitively closes the last
stage into a partial order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import (
    check_homomorphism,
    compose_homomorphisms,
    identity_homomorphism,
    is_ell_rn,
    is_good,
    longest_r_path_vertices,
    transitive_closure,
)
from .arrow import (
    BaseOracle,
    Coloring,
    NotFoundWithinBounds,
    ResourceExceeded,
    find_monochromatic,
    oracle_ramsey,
)
from .embeddings import Copy, enumerate_copies, is_embedding, iter_copies
from .partite import APartiteRNGraph, ProductResult, check_partition, make_apartite
from .partite import product_construction
from .structures import (
    Homomorphism,
    OrderedPoset,
    RNGraph,
    StructureError,
    is_complete,
    make_ordered_poset,
    make_rn_graph,
    poset_to_complete_rn,
    rn_to_poset,
)


class ConstructionError(RuntimeError):
    pass


class NoCopiesOfB(ConstructionError):
    pass


class GlueConflict(ConstructionError):
    pass


class TowerTooShort(ConstructionError):
    pass


class ClosureIntersectsN(ConstructionError):
    pass


class NoneFound(ConstructionError):
    pass


@dataclass(frozen=True)
class BuildLimits:
    """Resource ceiling for one construction run."""

    max_picture_vertices: int = 20_000


@dataclass(frozen=True)
class Picture:
    """Part-structured snapshot of the recursion, one part per vertex of D.

    Part t holds the preimage of the t-th smallest D-vertex under f; parts are stored
    ascending in the base order and occupy consecutive rank blocks.  provenance[v] is
    the (copy index, source vertex) pair the creating step used to mint v, when known.
    """

    base: RNGraph
    D: RNGraph = field(compare=False)
    parts: tuple[tuple[int, ...], ...]
    f: Homomorphism = field(compare=False)
    provenance: tuple[tuple[int, int], ...] | None = field(compare=False, default=None)

    def validate(self) -> None:
        check_partition(self.base, self.parts, self.D)
        if not check_homomorphism(self.f):
            raise StructureError("part collapse is not a homomorphism")
        for t, members in enumerate(self.parts):
            want = self.D.order[t]
            for v in members:
                if self.f.map[v] != want:
                    raise StructureError("collapse map disagrees with the parts", v)


def build_picture_zero(D: RNGraph, B: RNGraph) -> Picture:
    """Disjoint union of all copies of B in D, spread over the parts they touch."""
    copies = enumerate_copies(B, D)
    if not copies:
        raise NoCopiesOfB(f"host on {D.n} vertices carries no copy of the pattern")
    ids: dict[tuple[int, int], int] = {}
    parts: list[tuple[int, ...]] = []
    provenance: list[tuple[int, int]] = []
    fmap: list[int] = []
    counter = 0
    for t in range(D.n):
        dv = D.order[t]
        members = []
        for h, copy in enumerate(copies):
            if dv in copy.image:
                ids[(h, dv)] = counter
                members.append(counter)
                src = copy.map.index(dv)
                provenance.append((h, src))
                fmap.append(dv)
                counter += 1
        parts.append(tuple(members))
    R = set()
    N = set()
    for h, copy in enumerate(copies):
        for x, y in B.R:
            R.add((ids[(h, copy.map[x])], ids[(h, copy.map[y])]))
        for x, y in B.N:
            N.add((ids[(h, copy.map[x])], ids[(h, copy.map[y])]))
    base = make_rn_graph(counter, R, N)
    f = Homomorphism(tuple(fmap), base, D)
    picture = Picture(base, D, tuple(parts), f, tuple(provenance))
    picture.validate()
    assert is_good(base), "disjoint copies of a good pattern must form a good graph"
    return picture


def _selected_positions(P: Picture, a_copy: Copy) -> list[int]:
    """Part positions of P touched by a copy of A in D, ascending."""
    return sorted(P.D.rank[v] for v in a_copy.image)


def _subsystem_vertices(P: Picture, a_copy: Copy) -> list[int]:
    """Picture vertices inside the selected parts, in base order; this fixed listing
    is the local-id correspondence shared by induced_subsystem and amalgamate."""
    out: list[int] = []
    for t in _selected_positions(P, a_copy):
        out.extend(sorted(P.parts[t], key=lambda v: P.base.rank[v]))
    return out


def induced_subsystem(P: Picture, a_copy: Copy) -> APartiteRNGraph:
    """Sub-picture on the parts under one copy of A, re-typed over A itself.

    Local vertex k is the k-th entry of the part concatenation in base order, so the
    relabeling is recoverable from (P, a_copy) alone.
    """
    A = a_copy.pattern
    chosen = _subsystem_vertices(P, a_copy)
    local = {v: k for k, v in enumerate(chosen)}
    inside = set(chosen)
    R = frozenset(
        (local[x], local[y]) for x, y in P.base.R if x in inside and y in inside
    )
    N = frozenset(
        (local[x], local[y]) for x, y in P.base.N if x in inside and y in inside
    )
    base = make_rn_graph(len(chosen), R, N)
    parts = []
    k = 0
    for t in _selected_positions(P, a_copy):
        size = len(P.parts[t])
        parts.append(tuple(range(k, k + size)))
        k += size
    return make_apartite(A, base, tuple(parts))


def _amalgamate_full(
    P: Picture,
    a_copy: Copy,
    F: APartiteRNGraph,
    lifts: tuple[Copy, ...],
    limits: BuildLimits,
) -> tuple[Picture, tuple[tuple[int, ...], ...]]:
    """Glue one fresh copy of P over each lifted sub-picture copy; also return the
    per-copy vertex maps into the new picture."""
    if not lifts:
        raise ConstructionError("product carries no lifted copies of the sub-picture")
    spos = _selected_positions(P, a_copy)
    s_index = {t: i for i, t in enumerate(spos)}
    chosen = _subsystem_vertices(P, a_copy)
    local = {v: k for k, v in enumerate(chosen)}
    K = len(lifts)

    # A lift maps local sub-picture vertices into F; collect the image of each
    # sub-picture part across all lifts.  F vertices outside every lift are dropped.
    part_of_local: list[int] = []
    for i, t in enumerate(spos):
        part_of_local.extend([i] * len(P.parts[t]))
    used_sets: list[set[int]] = [set() for _ in spos]
    for lift in lifts:
        for k, fv in enumerate(lift.map):
            used_sets[part_of_local[k]].add(fv)
    used_per_part = [sorted(s, key=lambda u: F.base.rank[u]) for s in used_sets]

    shared_total = sum(len(u) for u in used_per_part)
    projected = shared_total + K * (P.base.n - len(chosen))
    if projected > limits.max_picture_vertices:
        raise ResourceExceeded(
            f"amalgamation would need {projected} vertices "
            f"(ceiling {limits.max_picture_vertices}, {K} lifted copies)"
        )

    fid: dict[int, int] = {}
    fresh: dict[tuple[int, int], int] = {}
    parts_new: list[tuple[int, ...]] = []
    provenance: list[tuple[int, int]] = []
    fmap: list[int] = []
    counter = 0
    locals_of_part = [
        [local[v] for v in sorted(P.parts[t], key=lambda v: P.base.rank[v])]
        for t in spos
    ]
    for t in range(P.D.n):
        members = []
        if t in s_index:
            i = s_index[t]
            for fv in used_per_part[i]:
                fid[fv] = counter
                minted = None
                for k, lift in enumerate(lifts):
                    for loc in locals_of_part[i]:
                        if lift.map[loc] == fv:
                            minted = (k, chosen[loc])
                            break
                    if minted:
                        break
                assert minted is not None
                provenance.append(minted)
                members.append(counter)
                fmap.append(P.D.order[t])
                counter += 1
        else:
            for x in sorted(P.parts[t], key=lambda v: P.base.rank[v]):
                for k in range(K):
                    fresh[(k, x)] = counter
                    provenance.append((k, x))
                    members.append(counter)
                    fmap.append(P.D.order[t])
                    counter += 1
        parts_new.append(tuple(members))
    assert counter == projected

    part_pos = [0] * P.base.n
    for t, members in enumerate(P.parts):
        for v in members:
            part_pos[v] = t
    copy_maps = []
    for k in range(K):
        vmap = [0] * P.base.n
        for x in range(P.base.n):
            t = part_pos[x]
            if t in s_index:
                vmap[x] = fid[lifts[k].map[local[x]]]
            else:
                vmap[x] = fresh[(k, x)]
        copy_maps.append(tuple(vmap))

    R = set()
    N = set()
    for vmap in copy_maps:
        for x, y in P.base.R:
            R.add((vmap[x], vmap[y]))
        for x, y in P.base.N:
            N.add((vmap[x], vmap[y]))
    both = R & N
    if both:
        raise GlueConflict(f"copies disagree on pair {min(both)}")
    base = make_rn_graph(counter, R, N)
    for k, vmap in enumerate(copy_maps):
        if not is_embedding(vmap, P.base, base):
            raise GlueConflict(f"gluing damaged copy {k} of the old picture")
    f = Homomorphism(tuple(fmap), base, P.D)
    picture = Picture(base, P.D, tuple(parts_new), f, tuple(provenance))
    picture.validate()
    return picture, tuple(copy_maps)


def amalgamate(P: Picture, a_copy: Copy, F: APartiteRNGraph, lifts) -> Picture:
    """One gluing round; see _amalgamate_full for the vertex maps as well."""
    picture, _ = _amalgamate_full(P, a_copy, F, tuple(lifts), BuildLimits())
    return picture


@dataclass(frozen=True)
class AmalgamationStep:
    index: int
    a_copy: Copy
    subsystem: APartiteRNGraph
    product: ProductResult
    picture: Picture
    copy_maps: tuple[tuple[int, ...], ...]
    certified: bool


@dataclass(frozen=True)
class ConstructionRun:
    D: RNGraph
    A: RNGraph
    B: RNGraph
    initial: Picture
    steps: tuple[AmalgamationStep, ...]
    picture: Picture
    certified: bool
    truncated: str | None = None


def _require_pattern(graph: RNGraph, name: str) -> None:
    if not is_complete(graph):
        raise StructureError(f"{name} must be a complete RN graph")
    if not is_good(graph):
        raise StructureError(f"{name} must be good")


def run_partite_construction(
    D: RNGraph,
    A: RNGraph,
    B: RNGraph,
    oracle: BaseOracle,
    *,
    ell: int | None = None,
    limits: BuildLimits | None = None,
    allow_truncated: bool = False,
    max_steps: int | None = None,
) -> ConstructionRun:
    """Run every gluing round over the copies of A in D, in enumeration order.

    When ell is given, each round is required to preserve ell-freedom; a violation is
    an internal invariant failure, not an input error.  Oracle and resource failures
    propagate unless allow_truncated is set, in which case the completed prefix comes
    back with the reason recorded.
    """
    _require_pattern(A, "A")
    _require_pattern(B, "B")
    limits = limits or BuildLimits()
    initial = build_picture_zero(D, B)
    if ell is not None:
        assert is_ell_rn(initial.base, ell), "a good starting picture cannot fail this"
    picture = initial
    steps: list[AmalgamationStep] = []
    certified = True
    a_copies = enumerate_copies(A, D)
    if max_steps is not None:
        a_copies = a_copies[:max_steps]
    for j, a_copy in enumerate(a_copies):
        try:
            subsystem = induced_subsystem(picture, a_copy)
            product = product_construction(A, subsystem, oracle)
            picture, copy_maps = _amalgamate_full(
                picture, a_copy, product.apartite, product.lifts, limits
            )
        except (NotFoundWithinBounds, ResourceExceeded) as exc:
            if allow_truncated:
                return ConstructionRun(
                    D, A, B, initial, tuple(steps), picture, certified,
                    truncated=f"round {j}: {exc}",
                )
            raise
        if ell is not None and not is_ell_rn(picture.base, ell):
            raise AssertionError(
                f"round {j} lost {ell}-freedom; the gluing argument is violated"
            )
        certified = certified and product.certified
        steps.append(
            AmalgamationStep(
                j, a_copy, subsystem, product, picture, copy_maps, product.certified
            )
        )
    return ConstructionRun(D, A, B, initial, tuple(steps), picture, certified)


@dataclass(frozen=True)
class TowerStage:
    ell: int
    C: RNGraph
    h_down: Homomorphism | None
    certified: bool
    stabilized: bool = False
    source: str = ""


@dataclass(frozen=True)
class Tower:
    stages: tuple[TowerStage, ...]
    A: RNGraph
    B: RNGraph
    truncated: str | None = None

    def __iter__(self):
        return iter(self.stages)

    def __len__(self) -> int:
        return len(self.stages)

    def __getitem__(self, i):
        return self.stages[i]

    def stage_for(self, ell: int) -> TowerStage | None:
        for stage in self.stages:
            if stage.ell == ell:
                return stage
        return None

    def composed_map(self, ell: int) -> Homomorphism:
        """Composition of the downward maps from stage ell onto the first stage."""
        stage = self.stage_for(ell)
        if stage is None:
            raise TowerTooShort(f"tower has no stage {ell}")
        h = identity_homomorphism(stage.C)
        for cur in range(ell, 2, -1):
            h = compose_homomorphisms(self.stage_for(cur).h_down, h)
        return h


def _as_complete_rn(obj, name: str) -> RNGraph:
    if isinstance(obj, OrderedPoset):
        return poset_to_complete_rn(obj)
    if isinstance(obj, RNGraph):
        _require_pattern(obj, name)
        return obj
    raise TypeError(f"{name} must be an OrderedPoset or a complete RNGraph")


def build_tower(
    A,
    B,
    ell_max: int,
    oracle: BaseOracle,
    *,
    stabilize: bool = True,
    limits: BuildLimits | None = None,
) -> Tower:
    """Stages 2..ell_max, each one certified quasicycle-free up to its own index.

    Stage 2 is the oracle's witness for the pair (A, B) taken verbatim.  Each later
    stage reruns the gluing recursion over the previous stage, except that when the
    previous stage already passes the next freedom check, stabilize (default on) keeps
    it and records an identity step; without it the recursion runs regardless, which
    is quickly infeasible for patterns whose sub-pictures grow across rounds.
    """
    if ell_max < 2:
        raise ValueError("towers start at stage 2")
    a_rn = _as_complete_rn(A, "A")
    b_rn = _as_complete_rn(B, "B")
    wit = oracle_ramsey(oracle, a_rn, b_rn)
    stages = [TowerStage(2, wit.graph, None, wit.certified, False, wit.source)]
    for ell in range(3, ell_max + 1):
        prev = stages[-1]
        if stabilize and is_ell_rn(prev.C, ell):
            stage = TowerStage(
                ell, prev.C, identity_homomorphism(prev.C), prev.certified, True,
                "stabilized",
            )
        else:
            try:
                run = run_partite_construction(
                    prev.C, a_rn, b_rn, oracle, ell=ell, limits=limits
                )
            except (NotFoundWithinBounds, ResourceExceeded) as exc:
                return Tower(
                    tuple(stages), a_rn, b_rn, truncated=f"stage {ell}: {exc}"
                )
            graph = run.picture.base
            assert is_ell_rn(graph, ell), "completed stage failed its freedom check"
            if next(iter_copies(b_rn, graph), None) is None:
                raise AssertionError("completed stage lost every copy of the pattern")
            stage = TowerStage(
                ell, graph, run.picture.f, run.certified and prev.certified, False,
                "construction",
            )
        assert stage.h_down is None or check_homomorphism(stage.h_down)
        stages.append(stage)
    return Tower(tuple(stages), a_rn, b_rn)


@dataclass(frozen=True)
class FinishResult:
    poset: OrderedPoset
    stage_ell: int
    lam: int
    b_copies_before: int
    b_copies_intact: int
    b_copies_after: int


def finish_stage(graph: RNGraph, lam: int, B: RNGraph) -> FinishResult:
    """Close one stage's R transitively into a poset and audit the pattern copies."""
    longest = longest_r_path_vertices(graph)
    assert longest <= lam, (
        f"an R-path on {longest} vertices contradicts the collapse onto stage 2"
    )
    closure = transitive_closure(graph.R, graph.n)
    overlap = closure & graph.N
    if overlap:
        raise ClosureIntersectsN(f"closure meets N at {min(overlap)}")
    poset = make_ordered_poset(graph.n, closure, graph.order)
    before = enumerate_copies(B, graph)
    intact = 0
    for copy in before:
        ok = True
        for i in range(B.n):
            for j in range(B.n):
                if i == j:
                    continue
                pair_closed = (copy.map[i], copy.map[j]) in closure
                if pair_closed != ((i, j) in B.R):
                    ok = False
        if ok:
            intact += 1
    assert intact == len(before), "closure added a pair inside a pattern copy"
    after = len(enumerate_copies(rn_to_poset(B), poset))
    return FinishResult(poset, lam, lam, len(before), intact, after)


def finish(tower: Tower) -> FinishResult:
    """Close the stage whose index matches the first stage's vertex count."""
    lam = max(2, tower.stages[0].C.n)
    stage = tower.stage_for(lam)
    if stage is None:
        last = tower.stages[-1].ell
        raise TowerTooShort(f"needs stage {lam}, tower ends at stage {last}")
    result = finish_stage(stage.C, lam, tower.B)
    return FinishResult(
        result.poset, stage.ell, lam,
        result.b_copies_before, result.b_copies_intact, result.b_copies_after,
    )


def extract_monochromatic_B(target, coloring: Coloring, B: RNGraph, A: RNGraph) -> Copy:
    """A copy of B all of whose A-copies share one color; scans enumeration order.

    target may be a Picture or a plain RN graph.
    """
    base = getattr(target, "base", target)
    copy = find_monochromatic(base, coloring, B, A)
    if copy is None:
        raise NoneFound("no pattern copy is monochromatic under this coloring")
    return copy
