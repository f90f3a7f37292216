"""Command-line front end.

Exit codes: 0 success or HOLDS, 1 invalid input or FAILS, 2 a resource ceiling or
bounded search ran out, 3 an internal invariant was violated (a bug, not bad input).
Environment variables supply default resource ceilings only; every randomized helper
takes an explicit seed flag.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .analysis import find_bad_quasicycle, is_good
from .arrow import (
    BaseOracle,
    CertificationFailed,
    Coloring,
    NotFoundWithinBounds,
    ResourceExceeded,
    SearchLimits,
    check_arrow,
)
from .construction import (
    BuildLimits,
    ClosureIntersectsN,
    ConstructionError,
    GlueConflict,
    NoneFound,
    Picture,
    TowerTooShort,
    build_tower,
    finish_stage,
)
from .io import (
    HomomorphismDoc,
    ParseError,
    digest,
    export_dot,
    format_manifest,
    load_structure,
    parse_manifest,
    save_structure,
)
from .partite import APartiteRNGraph
from .structures import (
    OrderedPoset,
    RNGraph,
    StructureError,
    antichain,
    chain,
    make_ordered_poset,
    poset_to_complete_rn,
)


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else fallback


def _env_float(name: str, fallback: float) -> float:
    raw = os.environ.get(name)
    return float(raw) if raw else fallback


def _search_limits(args) -> SearchLimits:
    return SearchLimits(
        max_nodes=args.max_nodes, max_copies=args.max_copies, time_budget=args.time_budget
    )


def _add_arrow_limit_flags(sub) -> None:
    sub.add_argument(
        "--max-nodes", type=int, default=_env_int("RNRAMSEY_MAX_NODES", 2_000_000)
    )
    sub.add_argument(
        "--max-copies", type=int, default=_env_int("RNRAMSEY_MAX_COPIES", 200_000)
    )
    sub.add_argument(
        "--time-budget", type=float, default=_env_float("RNRAMSEY_TIME_BUDGET", 120.0)
    )


def _ell_rn_max(graph: RNGraph) -> str:
    cycle = find_bad_quasicycle(graph)
    return "inf" if cycle is None else str(cycle.length - 1)


def cmd_validate(args) -> int:
    try:
        obj = load_structure(args.path)
    except (ParseError, StructureError) as exc:
        print(f"INVALID {Path(args.path).name}: {exc}")
        return 1
    if isinstance(obj, OrderedPoset):
        print(f"OK poset n={obj.n} |R|={len(obj.R)}")
    elif isinstance(obj, RNGraph):
        print(
            f"OK rn n={obj.n} |R|={len(obj.R)} |N|={len(obj.N)} "
            f"good={str(is_good(obj)).lower()} ell_rn_max={_ell_rn_max(obj)}"
        )
    elif isinstance(obj, APartiteRNGraph):
        g = obj.base
        print(
            f"OK apartite n={g.n} parts={len(obj.parts)} |R|={len(g.R)} "
            f"|N|={len(g.N)} good={str(is_good(g)).lower()}"
        )
    elif isinstance(obj, Picture):
        g = obj.base
        print(
            f"OK picture n={g.n} parts={len(obj.parts)} |R|={len(g.R)} "
            f"|N|={len(g.N)} good={str(is_good(g)).lower()}"
        )
    elif isinstance(obj, HomomorphismDoc):
        print(f"OK homomorphism |map|={len(obj.map)}")
    elif isinstance(obj, Coloring):
        print(f"OK coloring entries={len(obj)} r={obj.r}")
    else:
        print(f"INVALID {Path(args.path).name}: unsupported kind")
        return 1
    return 0


def cmd_arrow(args) -> int:
    target = load_structure(args.target)
    Q = load_structure(args.Q)
    P = load_structure(args.P)
    verdict = check_arrow(target, Q, P, args.r, _search_limits(args))
    if verdict.holds:
        print(f"HOLDS r={args.r} nodes={verdict.nodes_explored}")
        return 0
    out = args.counterexample_out
    save_structure(out, verdict.counterexample)
    print(f"FAILS r={args.r} counterexample={out}")
    return 1


def _oracle_from_args(args) -> BaseOracle:
    witness = None
    if args.oracle in ("file", "assume") and not args.witness:
        raise StructureError(f"--witness is required for oracle mode {args.oracle!r}")
    if args.oracle == "assume":
        witness = load_structure(args.witness)
    return BaseOracle(
        mode=args.oracle,
        size_bound=args.size_bound,
        time_bound=args.oracle_time_bound,
        candidate_budget=args.candidate_budget,
        witness=witness,
        witness_path=args.witness if args.oracle == "file" else None,
    )


def cmd_tower(args) -> int:
    A = load_structure(args.A)
    B = load_structure(args.B)
    oracle = _oracle_from_args(args)
    limits = BuildLimits(max_picture_vertices=args.max_picture_vertices)
    tower = build_tower(
        A, B, args.ell_max, oracle, stabilize=not args.no_stabilize, limits=limits
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, str] = {
        "a.file": "A.json",
        "a.digest": save_structure(out / "A.json", tower.A),
        "b.file": "B.json",
        "b.digest": save_structure(out / "B.json", tower.B),
        "lambda": str(max(2, tower.stages[0].C.n)),
        "oracle.mode": args.oracle,
        "stabilize": str(not args.no_stabilize).lower(),
    }
    for stage in tower.stages:
        key = f"stage.{stage.ell}"
        name = f"C{stage.ell}.json"
        manifest[f"{key}.file"] = name
        manifest[f"{key}.digest"] = save_structure(out / name, stage.C)
        manifest[f"{key}.n"] = str(stage.C.n)
        manifest[f"{key}.certified"] = str(stage.certified).lower()
        manifest[f"{key}.stabilized"] = str(stage.stabilized).lower()
        manifest[f"{key}.source"] = stage.source
        if stage.h_down is not None:
            hname = f"h{stage.ell}.json"
            manifest[f"{key}.h_file"] = hname
            manifest[f"{key}.h_digest"] = save_structure(out / hname, stage.h_down)
        certified = "certified" if stage.certified else "conditionally correct"
        print(f"stage {stage.ell}: n={stage.C.n} {certified} source={stage.source}")
    if tower.truncated:
        manifest["truncated"] = tower.truncated
    (out / "manifest.txt").write_text(format_manifest(manifest))
    if tower.truncated:
        print(f"TRUNCATED: {tower.truncated}")
        return 2
    return 0


def cmd_finish(args) -> int:
    tower_dir = Path(args.tower_dir)
    manifest = parse_manifest((tower_dir / "manifest.txt").read_text())
    lam = int(manifest["lambda"])
    key = f"stage.{lam}.file"
    if key not in manifest:
        raise TowerTooShort(f"tower directory has no stage {lam} (lambda = {lam})")
    graph = load_structure(tower_dir / manifest[key])
    B = load_structure(tower_dir / manifest["b.file"])
    result = finish_stage(graph, lam, B)
    out = Path(args.out) if args.out else tower_dir / "C.json"
    poset_digest = save_structure(out, result.poset)
    intact = (
        "all"
        if result.b_copies_intact == result.b_copies_before
        else f"{result.b_copies_intact}"
    )
    lines = [
        f"lambda: {lam}",
        f"stage file: {manifest[key]}",
        f"poset file: {out.name}",
        f"poset digest: {poset_digest}",
        f"copies of B before closure: {result.b_copies_before}",
        f"copies of B intact: {intact} ({result.b_copies_intact} of {result.b_copies_before})",
        f"copies of B after closure: {result.b_copies_after}",
    ]
    report = "\n".join(lines) + "\n"
    (tower_dir / "finish_report.txt").write_text(report)
    print(report, end="")
    return 0


def cmd_export_dot(args) -> int:
    obj = load_structure(args.path)
    if isinstance(obj, (HomomorphismDoc, Coloring)):
        raise StructureError("only graph-like structures render to DOT")
    text = export_dot(obj, name=Path(args.path).stem.replace("-", "_") or "g")
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_make(args) -> int:
    if args.kind == "chain":
        poset = chain(args.size)
    elif args.kind == "antichain":
        poset = antichain(args.size)
    else:
        if args.size != 3:
            raise StructureError("the v shape has exactly 3 vertices")
        poset = make_ordered_poset(3, {(0, 2), (1, 2)})
    obj = poset_to_complete_rn(poset) if args.rn else poset
    save_structure(args.out, obj)
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnramsey",
        description="Ordered RN graphs: validation, arrow checks, towers, finishing.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="check a structure file and print a summary")
    sub.add_argument("path")
    sub.set_defaults(func=cmd_validate)

    sub = subs.add_parser("arrow", help="decide target -> (Q)^P_r exactly")
    sub.add_argument("target")
    sub.add_argument("Q")
    sub.add_argument("P")
    sub.add_argument("-r", type=int, default=2)
    sub.add_argument("--counterexample-out", default="counterexample.json")
    _add_arrow_limit_flags(sub)
    sub.set_defaults(func=cmd_arrow)

    sub = subs.add_parser("tower", help="build the stage tower for a pattern pair")
    sub.add_argument("A")
    sub.add_argument("B")
    sub.add_argument("--ell-max", type=int, required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--oracle", choices=("search", "file", "assume"), default="search")
    sub.add_argument("--witness", help="witness file for file/assume oracle modes")
    sub.add_argument(
        "--size-bound", type=int, default=_env_int("RNRAMSEY_SIZE_BOUND", 16)
    )
    sub.add_argument(
        "--candidate-budget",
        type=int,
        default=_env_int("RNRAMSEY_CANDIDATE_BUDGET", 60_000),
    )
    sub.add_argument(
        "--oracle-time-bound",
        type=float,
        default=_env_float("RNRAMSEY_ORACLE_TIME_BOUND", 60.0),
    )
    sub.add_argument(
        "--max-picture-vertices",
        type=int,
        default=_env_int("RNRAMSEY_MAX_PICTURE_VERTICES", 20_000),
    )
    sub.add_argument("--no-stabilize", action="store_true")
    sub.set_defaults(func=cmd_tower)

    sub = subs.add_parser("finish", help="close a tower's last needed stage into a poset")
    sub.add_argument("tower_dir")
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_finish)

    sub = subs.add_parser("export-dot", help="render a structure file as DOT")
    sub.add_argument("path")
    sub.add_argument("--out")
    sub.set_defaults(func=cmd_export_dot)

    sub = subs.add_parser("make", help="write a small example structure file")
    sub.add_argument("kind", choices=("chain", "antichain", "v"))
    sub.add_argument("size", type=int)
    sub.add_argument("--out", required=True)
    sub.add_argument("--rn", action="store_true", help="emit the complete RN form")
    sub.set_defaults(func=cmd_make)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GlueConflict, ClosureIntersectsN, NoneFound, AssertionError) as exc:
        print(f"INVARIANT VIOLATION: {exc}", file=sys.stderr)
        return 3
    except (ResourceExceeded, NotFoundWithinBounds) as exc:
        print(f"RESOURCE: {exc}", file=sys.stderr)
        return 2
    except (
        ParseError,
        StructureError,
        ConstructionError,
        CertificationFailed,
        TypeError,
        ValueError,
        OSError,
    ) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
