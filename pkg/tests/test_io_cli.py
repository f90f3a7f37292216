import hashlib
import json

import pytest

from rnramsey import (
    BaseOracle,
    Homomorphism,
    ParseError,
    antichain,
    build_picture_zero,
    build_tower,
    chain,
    digest,
    dumps_canonical,
    enumerate_copies,
    export_dot,
    finish,
    format_manifest,
    from_doc,
    load_structure,
    make_apartite,
    make_coloring,
    make_ordered_poset,
    make_rn_graph,
    parse_manifest,
    poset_to_complete_rn,
    save_structure,
    to_doc,
)
from rnramsey.cli import main
from rnramsey.io import HomomorphismDoc

C2 = poset_to_complete_rn(chain(2))
C3 = poset_to_complete_rn(chain(3))
POINT = poset_to_complete_rn(chain(1))


def _apartite_example():
    base = make_rn_graph(4, {(0, 2), (1, 3)}, set())
    return make_apartite(C2, base, [(0, 1), (2, 3)])


def _roundtrip(tmp_path, obj, name):
    path = tmp_path / name
    d1 = save_structure(path, obj)
    loaded = load_structure(path)
    d2 = save_structure(path, loaded)
    assert d1 == d2
    assert hashlib.sha256(path.read_bytes()).hexdigest() == d1
    return loaded


def test_roundtrips_all_kinds(tmp_path):
    poset = make_ordered_poset(3, {(0, 2), (1, 2)}, (1, 0, 2))
    assert _roundtrip(tmp_path, poset, "p.json") == poset
    rn = make_rn_graph(3, {(1, 0)}, {(1, 2)}, (1, 0, 2))
    assert _roundtrip(tmp_path, rn, "g.json") == rn
    ap = _apartite_example()
    assert _roundtrip(tmp_path, ap, "ap.json") == ap
    pic = build_picture_zero(C3, C2)
    loaded = _roundtrip(tmp_path, pic, "pic.json")
    assert loaded.base == pic.base and loaded.parts == pic.parts
    assert loaded.f.map == pic.f.map
    h = Homomorphism((0, 1), C2, C3)
    hdoc = _roundtrip(tmp_path, h, "h.json")
    assert isinstance(hdoc, HomomorphismDoc) and hdoc.map == (0, 1)
    assert hdoc.source_digest == digest(C2)
    copies = enumerate_copies(C2, C3)
    coloring = make_coloring(copies, [0, 1, 0], 2)
    assert _roundtrip(tmp_path, coloring, "col.json") == coloring


def test_digest_separates_structures():
    assert digest(chain(2)) != digest(antichain(2))
    assert digest(C2) != digest(chain(2))
    assert digest(C2) == digest(poset_to_complete_rn(chain(2)))


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ParseError):
        load_structure(bad)
    bad.write_text("[1, 2]")
    with pytest.raises(ParseError):
        load_structure(bad)
    with pytest.raises(ParseError):
        from_doc({"kind": "poset", "n": 2})
    with pytest.raises(ParseError):
        from_doc({"kind": "poset", "n": "2", "order": [0, 1], "R": []})
    with pytest.raises(ParseError):
        from_doc({"kind": "poset", "n": 2, "order": [0, 1], "R": [[0, 1, 2]]})
    with pytest.raises(ParseError):
        from_doc({"kind": "mystery"})
    with pytest.raises(TypeError):
        to_doc(object())


def test_canonical_bytes_are_stable():
    doc = to_doc(C3)
    text = dumps_canonical(doc)
    assert text.endswith("\n") and text == dumps_canonical(json.loads(text))
    assert text.index('"N"') < text.index('"R"') < text.index('"kind"')


def test_manifest_roundtrip():
    entries = {"b.file": "B.json", "a.file": "A.json", "lambda": "3"}
    text = format_manifest(entries)
    assert text.splitlines()[0] == "a.file: A.json"
    assert parse_manifest(text) == entries
    with pytest.raises(ParseError):
        parse_manifest("no separator here\n")


def test_export_dot_frozen():
    dot = export_dot(chain(2), name="c2")
    assert "digraph c2 {" in dot
    assert "  v0 -> v1;" in dot and "dashed" not in dot
    dot = export_dot(poset_to_complete_rn(antichain(2)))
    assert "v0 -> v1 [style=dashed];" in dot
    pic_dot = export_dot(build_picture_zero(C3, C2))
    assert pic_dot.count("subgraph cluster_") == 3
    with pytest.raises(TypeError):
        export_dot(42)


def _write(tmp_path, name, obj):
    path = tmp_path / name
    save_structure(path, obj)
    return str(path)


def test_cli_validate_lines(tmp_path, capsys):
    g = make_rn_graph(3, {(0, 1), (1, 2)}, {(0, 2)})
    path = _write(tmp_path, "g.json", g)
    assert main(["validate", path]) == 0
    assert capsys.readouterr().out == "OK rn n=3 |R|=2 |N|=1 good=false ell_rn_max=2\n"
    assert main(["validate", _write(tmp_path, "p.json", chain(4))]) == 0
    assert capsys.readouterr().out == "OK poset n=4 |R|=6\n"
    assert main(["validate", _write(tmp_path, "ap.json", _apartite_example())]) == 0
    assert "OK apartite n=4 parts=2" in capsys.readouterr().out
    assert main(["validate", _write(tmp_path, "pic.json", build_picture_zero(C3, C2))]) == 0
    assert "OK picture n=6 parts=3" in capsys.readouterr().out
    h = Homomorphism((0, 1), C2, C3)
    assert main(["validate", _write(tmp_path, "h.json", h)]) == 0
    assert capsys.readouterr().out == "OK homomorphism |map|=2\n"
    copies = enumerate_copies(C2, C3)
    col = make_coloring(copies, [0, 0, 1], 2)
    assert main(["validate", _write(tmp_path, "col.json", col)]) == 0
    assert capsys.readouterr().out == "OK coloring entries=3 r=2\n"


def test_cli_validate_rejects(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps({"kind": "rn", "n": 2, "order": [0, 1], "R": [[0, 1]], "N": [[0, 1]]})
    )
    assert main(["validate", str(bad)]) == 1
    assert capsys.readouterr().out.startswith("INVALID bad.json:")
    bad.write_text(json.dumps({"kind": "poset", "n": 3, "order": [0, 1, 2], "R": [[0, 1], [1, 2]]}))
    assert main(["validate", str(bad)]) == 1
    assert main(["validate", str(tmp_path / "missing.json")]) == 1


def test_cli_arrow(tmp_path, capsys):
    c6 = _write(tmp_path, "c6.json", poset_to_complete_rn(chain(6)))
    c5 = _write(tmp_path, "c5.json", poset_to_complete_rn(chain(5)))
    q = _write(tmp_path, "q.json", C3)
    p = _write(tmp_path, "p.json", C2)
    assert main(["arrow", c6, q, p]) == 0
    assert capsys.readouterr().out.startswith("HOLDS r=2")
    cex = tmp_path / "cex.json"
    assert main(["arrow", c5, q, p, "--counterexample-out", str(cex)]) == 1
    assert f"FAILS r=2 counterexample={cex}" in capsys.readouterr().out
    coloring = load_structure(cex)
    assert len(coloring) == 10 and coloring.r == 2
    assert main(["arrow", c6, q, p, "--max-nodes", "5"]) == 2


def test_cli_arrow_env_default(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RNRAMSEY_MAX_NODES", "5")
    c6 = _write(tmp_path, "c6.json", poset_to_complete_rn(chain(6)))
    q = _write(tmp_path, "q.json", C3)
    p = _write(tmp_path, "p.json", C2)
    assert main(["arrow", c6, q, p]) == 2


def _run_tower(tmp_path, out_name, *extra):
    a = _write(tmp_path, "a.json", chain(1))
    b = _write(tmp_path, "b.json", chain(2))
    out = tmp_path / out_name
    code = main(["tower", a, b, "--ell-max", "3", "--out", str(out), *extra])
    return code, out


def test_cli_tower_and_finish(tmp_path, capsys):
    code, out = _run_tower(tmp_path, "tower")
    assert code == 0
    printed = capsys.readouterr().out
    assert "stage 2: n=3 certified source=search:chain" in printed
    assert "stage 3: n=3 certified source=stabilized" in printed
    manifest = parse_manifest((out / "manifest.txt").read_text())
    assert manifest["lambda"] == "3" and manifest["stabilize"] == "true"
    assert manifest["stage.2.certified"] == "true"
    assert manifest["stage.3.stabilized"] == "true"
    assert "truncated" not in manifest
    for key in ("a", "b"):
        path = out / manifest[f"{key}.file"]
        assert digest(load_structure(path)) == manifest[f"{key}.digest"]
    stage3 = load_structure(out / manifest["stage.3.file"])
    assert digest(stage3) == manifest["stage.3.digest"]
    hdoc = load_structure(out / manifest["stage.3.h_file"])
    assert hdoc.map == (0, 1, 2)

    assert main(["finish", str(out)]) == 0
    report = capsys.readouterr().out
    assert "lambda: 3" in report
    assert "copies of B intact: all (3 of 3)" in report
    assert (out / "finish_report.txt").read_text() == report
    poset = load_structure(out / "C.json")
    assert poset == make_ordered_poset(3, {(0, 1), (0, 2), (1, 2)})


def test_cli_tower_reruns_are_byte_identical(tmp_path, capsys):
    _, out1 = _run_tower(tmp_path, "run1")
    _, out2 = _run_tower(tmp_path, "run2")
    names1 = sorted(p.name for p in out1.iterdir())
    names2 = sorted(p.name for p in out2.iterdir())
    assert names1 == names2
    for name in names1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_cli_tower_truncation_exit_code(tmp_path, capsys):
    code, out = _run_tower(tmp_path, "trunc", "--no-stabilize")
    assert code == 2
    printed = capsys.readouterr().out
    assert "TRUNCATED: stage 3" in printed
    manifest = parse_manifest((out / "manifest.txt").read_text())
    assert "truncated" in manifest and "stage.3.file" not in manifest
    assert main(["finish", str(out)]) == 1


def test_cli_tower_assume_mode(tmp_path, capsys):
    a = _write(tmp_path, "a.json", chain(1))
    b = _write(tmp_path, "b.json", chain(2))
    w = _write(tmp_path, "w.json", C3)
    out = tmp_path / "assumed"
    code = main(
        ["tower", a, b, "--ell-max", "2", "--out", str(out), "--oracle", "assume", "--witness", w]
    )
    assert code == 0
    assert "conditionally correct source=assume" in capsys.readouterr().out
    manifest = parse_manifest((out / "manifest.txt").read_text())
    assert manifest["stage.2.certified"] == "false"
    assert main(["tower", a, b, "--ell-max", "2", "--out", str(out), "--oracle", "assume"]) == 1


def test_cli_export_dot_and_make(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["make", "chain", "3", "--rn", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["validate", str(out)]) == 0
    assert capsys.readouterr().out == "OK rn n=3 |R|=3 |N|=0 good=true ell_rn_max=inf\n"
    dot = tmp_path / "c.dot"
    assert main(["export-dot", str(out), "--out", str(dot)]) == 0
    capsys.readouterr()
    assert "v0 -> v1;" in dot.read_text()
    assert main(["export-dot", str(out)]) == 0
    assert capsys.readouterr().out.startswith("digraph")
    assert main(["make", "v", "3", "--out", str(tmp_path / "v.json")]) == 0
    capsys.readouterr()
    assert main(["make", "v", "4", "--out", str(tmp_path / "v4.json")]) == 1
    copies = enumerate_copies(C2, C3)
    col = _write(tmp_path, "col.json", make_coloring(copies, [0, 0, 1], 2))
    assert main(["export-dot", col]) == 1
