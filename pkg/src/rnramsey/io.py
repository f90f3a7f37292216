"""Canonical JSON files, digests, manifests, and DOT rendering.

Every writer is byte-deterministic: keys sorted, two-space indent, one trailing
newline, pair lists sorted.  Reruns of the same build therefore produce identical
files, and digests of in-memory structures match digests of their files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .arrow import Coloring
from .construction import Picture
from .partite import APartiteRNGraph, make_apartite
from .structures import (
    Homomorphism,
    OrderedPoset,
    RNGraph,
    make_ordered_poset,
    make_rn_graph,
)


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class HomomorphismDoc:
    """Stored form of a vertex map; endpoints travel as digests, not structures."""

    map: tuple[int, ...]
    source_digest: str
    target_digest: str


def _pairs(rel) -> list[list[int]]:
    return [list(p) for p in sorted(rel)]


def to_doc(obj) -> dict:
    if isinstance(obj, OrderedPoset):
        return {
            "kind": "poset",
            "n": obj.n,
            "order": list(obj.order),
            "R": _pairs(obj.R),
        }
    if isinstance(obj, RNGraph):
        return {
            "kind": "rn",
            "n": obj.n,
            "order": list(obj.order),
            "R": _pairs(obj.R),
            "N": _pairs(obj.N),
        }
    if isinstance(obj, APartiteRNGraph):
        return {
            "kind": "apartite",
            "A": to_doc(obj.A),
            "base": to_doc(obj.base),
            "parts": [list(part) for part in obj.parts],
        }
    if isinstance(obj, Picture):
        return {
            "kind": "picture",
            "D": to_doc(obj.D),
            "base": to_doc(obj.base),
            "parts": [list(part) for part in obj.parts],
            "f": list(obj.f.map),
        }
    if isinstance(obj, Homomorphism):
        return {
            "kind": "homomorphism",
            "map": list(obj.map),
            "source_digest": digest(obj.source),
            "target_digest": digest(obj.target),
        }
    if isinstance(obj, HomomorphismDoc):
        return {
            "kind": "homomorphism",
            "map": list(obj.map),
            "source_digest": obj.source_digest,
            "target_digest": obj.target_digest,
        }
    if isinstance(obj, Coloring):
        return {
            "kind": "coloring",
            "r": obj.r,
            "entries": [
                {"copy": list(image), "color": color} for image, color in obj.assignment
            ],
        }
    raise TypeError(f"no canonical form for {type(obj).__name__}")


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    doc = obj if isinstance(obj, dict) else to_doc(obj)
    return hashlib.sha256(dumps_canonical(doc).encode()).hexdigest()


def _need(doc: dict, key: str, kind):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    value = doc[key]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise ParseError(f"field {key!r} must be an integer")
    if kind is list and not isinstance(value, list):
        raise ParseError(f"field {key!r} must be a list")
    if kind is str and not isinstance(value, str):
        raise ParseError(f"field {key!r} must be a string")
    if kind is dict and not isinstance(value, dict):
        raise ParseError(f"field {key!r} must be an object")
    return value


def _pair_set(doc: dict, key: str) -> set[tuple[int, int]]:
    out = set()
    for entry in _need(doc, key, list):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise ParseError(f"field {key!r} must hold [x, y] pairs")
        out.add((entry[0], entry[1]))
    return out


def from_doc(doc: dict):
    kind = _need(doc, "kind", str)
    if kind == "poset":
        return make_ordered_poset(
            _need(doc, "n", int), _pair_set(doc, "R"), tuple(_need(doc, "order", list))
        )
    if kind == "rn":
        return make_rn_graph(
            _need(doc, "n", int),
            _pair_set(doc, "R"),
            _pair_set(doc, "N"),
            tuple(_need(doc, "order", list)),
        )
    if kind == "apartite":
        A = from_doc(_need(doc, "A", dict))
        base = from_doc(_need(doc, "base", dict))
        parts = [tuple(part) for part in _need(doc, "parts", list)]
        return make_apartite(A, base, parts)
    if kind == "picture":
        D = from_doc(_need(doc, "D", dict))
        base = from_doc(_need(doc, "base", dict))
        parts = tuple(tuple(part) for part in _need(doc, "parts", list))
        fmap = tuple(_need(doc, "f", list))
        picture = Picture(base, D, parts, Homomorphism(fmap, base, D))
        picture.validate()
        return picture
    if kind == "homomorphism":
        return HomomorphismDoc(
            tuple(_need(doc, "map", list)),
            _need(doc, "source_digest", str),
            _need(doc, "target_digest", str),
        )
    if kind == "coloring":
        entries = []
        for entry in _need(doc, "entries", list):
            if not isinstance(entry, dict):
                raise ParseError("coloring entries must be objects")
            entries.append((tuple(_need(entry, "copy", list)), _need(entry, "color", int)))
        return Coloring(tuple(sorted(entries)), _need(doc, "r", int))
    raise ParseError(f"unknown kind {kind!r}")


def save_structure(path, obj) -> str:
    """Write the canonical file; returns its digest."""
    doc = to_doc(obj)
    Path(path).write_text(dumps_canonical(doc))
    return digest(doc)


def load_structure(path):
    raw = Path(path).read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    return from_doc(doc)


def format_manifest(entries: dict[str, str]) -> str:
    return "".join(f"{key}: {entries[key]}\n" for key in sorted(entries))


def parse_manifest(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if ": " not in line:
            raise ParseError(f"manifest line {lineno} is not 'key: value'")
        key, value = line.split(": ", 1)
        out[key] = value
    return out


def export_dot(obj, name: str = "g") -> str:
    """Deterministic DOT text: solid R arcs, dashed N arcs, clustered parts,
    invisible arcs chaining the linear order so layouts respect it."""
    parts: tuple[tuple[int, ...], ...] | None = None
    if isinstance(obj, (APartiteRNGraph, Picture)):
        parts = obj.parts
        obj = obj.base
    if isinstance(obj, OrderedPoset):
        R, N, order, n = obj.R, frozenset(), obj.order, obj.n
    elif isinstance(obj, RNGraph):
        R, N, order, n = obj.R, obj.N, obj.order, obj.n
    else:
        raise TypeError(f"cannot render {type(obj).__name__}")
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    if parts is None:
        for v in range(n):
            lines.append(f"  v{v};")
    else:
        for t, members in enumerate(parts):
            lines.append(f"  subgraph cluster_{t} {{")
            lines.append(f'    label="part {t}";')
            for v in members:
                lines.append(f"    v{v};")
            lines.append("  }")
    for i in range(n - 1):
        lines.append(f"  v{order[i]} -> v{order[i + 1]} [style=invis, weight=10];")
    for x, y in sorted(R):
        lines.append(f"  v{x} -> v{y};")
    for x, y in sorted(N):
        lines.append(f"  v{x} -> v{y} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
