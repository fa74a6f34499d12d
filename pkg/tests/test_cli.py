"""CLI surface: subcommands, exit codes, and round-trip stability of the
document formats."""

import json

import numpy as np
import pytest

from rangecompat import documents
from rangecompat.algebra import GF, sample_subspace, AffineFlat
from rangecompat.cli import main
from rangecompat.opspace import Direction, OperatorSpace


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_total(capsys):
    code, out, _ = run(capsys, "verify", "TOTAL", "--n", "2", "--p", "2", "--field", "F3")
    assert code == 0 and "1 space checked" in out


def test_verify_json_is_canonical(capsys):
    code, out, _ = run(capsys, "verify", "TOTAL", "--n", "2", "--p", "2",
                       "--field", "F3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["theorem"] == "TOTAL" and doc["violations"] == []
    assert "elapsed" not in out


def test_gallery_list_and_check(capsys):
    code, out, _ = run(capsys, "gallery", "list")
    assert code == 0 and "sym2-f3" in out
    code, out, _ = run(capsys, "gallery", "check", "sym2-f3",
                       "--n", "2", "--p", "2", "--field", "F3")
    assert code == 0 and "non-local: True" in out


def test_gallery_check_requires_params(capsys):
    with pytest.raises(SystemExit) as exc:
        run(capsys, "gallery", "check", "sym2-f3")
    assert exc.value.code == 2


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--d", "4", "--k", "2", "--field", "F2")
    assert code == 0 and out.splitlines()[0] == "35"


def test_enumerate_guard_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "--d", "8", "--k", "4", "--field", "F3",
                       "--print-bases")
    assert code == 3 and "resource guard" in err


def test_bad_field_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "--d", "4", "--k", "2", "--field", "F6")
    assert code == 2 and "error" in err


def test_export_load_roundtrip(tmp_path, capsys):
    path = tmp_path / "case.json"
    code, _, _ = run(capsys, "gallery", "export", "qrc-hom-1",
                     "--n", "3", "--p", "2", "--field", "F3", "-o", str(path))
    assert code == 0
    first = path.read_text()
    space, direction = documents.space_from_doc(json.loads(first))
    again = documents.canonical_json(documents.space_to_doc(space, direction))
    assert first == again


def test_solve_uses_stored_direction(tmp_path, capsys):
    path = tmp_path / "case.json"
    run(capsys, "gallery", "export", "sym2-f3", "--n", "2", "--p", "2",
        "--field", "F3", "-o", str(path))
    code, out, _ = run(capsys, "solve", str(path), "--mode", "quasi", "--class", "linear")
    assert code == 0 and "all_local=False" in out
    code, out, _ = run(capsys, "solve", str(path), "--mode", "range", "--class", "linear")
    assert code == 0 and "all_local=True" in out


def test_solve_quasi_any(tmp_path, capsys):
    path = tmp_path / "s.json"
    space = OperatorSpace.full(GF(2), 2, 1)
    path.write_text(documents.canonical_json(documents.space_to_doc(space)))
    code, out, _ = run(capsys, "solve", str(path), "--mode", "quasi-any",
                       "--class", "linear", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["results"]) == 3


def test_orth_and_quotient(tmp_path, capsys):
    space = OperatorSpace.from_matrices(
        GF(3), 2, 2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    path = tmp_path / "s.json"
    path.write_text(documents.canonical_json(documents.space_to_doc(space)))
    code, out, _ = run(capsys, "orth", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["basis"] == [[0, 1, 0, 0]]
    code, out, _ = run(capsys, "quotient", str(path), "--v0", "1,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 1 and doc["p_cols"] == 2


def test_affine_document_roundtrip(rng):
    field = GF(4)
    sub = sample_subspace(field, 4, 2, rng)
    off = rng.integers(0, 4, size=4, dtype=np.uint8)
    space = OperatorSpace(field, 2, 2, AffineFlat(sub, off))
    d = Direction(field, [1, 2])
    doc = documents.space_to_doc(space, d)
    text = documents.canonical_json(doc)
    space2, d2 = documents.space_from_doc(json.loads(text))
    assert space2 == space and d2 == d
    assert documents.canonical_json(documents.space_to_doc(space2, d2)) == text


def test_noncanonical_input_is_canonicalized():
    # basis not in echelon form on input; export must be canonical
    doc = {"field": {"p": 2, "k": 1}, "n": 2, "p_cols": 1,
           "basis": [[1, 1], [1, 0]], "offset": [1, 1]}
    space, _ = documents.space_from_doc(doc)
    out = documents.space_to_doc(space)
    assert out["basis"] == [[1, 0], [0, 1]]
    assert "offset" not in out  # offset reduced to zero against a full basis
