"""Ordered RN graphs: structures, arrow verification, partite products, towers."""

from .analysis import (
    CycleDetected,
    QuasicyclePath,
    check_homomorphism,
    compose_homomorphisms,
    find_bad_quasicycle,
    identity_homomorphism,
    is_ell_rn,
    is_good,
    is_weakly_monotone,
    longest_r_path_vertices,
    transitive_closure,
)
from .arrow import (
    ArrowVerdict,
    BaseOracle,
    CertificationFailed,
    Coloring,
    NotFoundWithinBounds,
    OracleWitness,
    ResourceExceeded,
    SearchLimits,
    check_arrow,
    find_monochromatic,
    greedy_adversarial_coloring,
    make_coloring,
    oracle_ramsey,
    random_coloring,
)
from .construction import (
    AmalgamationStep,
    BuildLimits,
    ClosureIntersectsN,
    ConstructionError,
    ConstructionRun,
    FinishResult,
    GlueConflict,
    NoCopiesOfB,
    NoneFound,
    Picture,
    Tower,
    TowerStage,
    TowerTooShort,
    amalgamate,
    build_picture_zero,
    build_tower,
    extract_monochromatic_B,
    finish,
    finish_stage,
    induced_subsystem,
    run_partite_construction,
)
from .embeddings import Copy, enumerate_copies, is_embedding, iter_copies
from .io import (
    HomomorphismDoc,
    ParseError,
    digest,
    dumps_canonical,
    export_dot,
    format_manifest,
    from_doc,
    load_structure,
    parse_manifest,
    save_structure,
    to_doc,
)
from .partite import (
    APartiteRNGraph,
    IntraPartEdge,
    PartOrderViolation,
    PartProjectionViolation,
    ProductResult,
    check_partite_arrow,
    crossing_copies,
    make_apartite,
    partite_embeddings,
    product_construction,
    projection,
)
from .structures import (
    Homomorphism,
    NotCompatible,
    NotDisjoint,
    NotIrreflexive,
    NotLinearExtension,
    NotTransitive,
    OrderedPoset,
    RNGraph,
    StructureError,
    antichain,
    chain,
    fuse,
    is_complete,
    make_ordered_poset,
    make_rn_graph,
    poset_to_complete_rn,
    rn_to_poset,
)

__version__ = "0.1.0"
