from __future__ import annotations

import json

import pytest

from stripfold.cli import main
from stripfold.surface import dump_voxels

from conftest import CUBE, RING, flat_patch


@pytest.fixture
def cube_file(tmp_path):
    p = tmp_path / "cube.vox"
    p.write_text(dump_voxels(CUBE))
    return str(p)


def test_check_cube(cube_file, capsys):
    assert main(["check", cube_file, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["genus"] == 0 and doc["N"] == 6 and doc["usable"]


def test_check_torus_refused(tmp_path, capsys):
    p = tmp_path / "ring.vox"
    p.write_text(dump_voxels(RING))
    assert main(["check", str(p), "--format", "json"]) == 3
    out = capsys.readouterr()
    assert json.loads(out.out)["genus"] == 1
    assert "refused" in out.err
    assert main(["check", str(p), "--pipeline", "generic"]) == 0


def test_empty_and_malformed_inputs(tmp_path, capsys):
    empty = tmp_path / "empty.vox"
    empty.write_text("")
    assert main(["check", str(empty)]) == 2
    bad = tmp_path / "bad.vox"
    bad.write_text("0 0 0\n1 q 0\n")
    assert main(["check", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.vox")]) == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == 1
    with pytest.raises(SystemExit) as ei:
        main(["fold", "x.vox", "--strip", "diagonal"])
    assert ei.value.code == 1


def test_run_cube_canonical(cube_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", cube_file, "--outdir", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["folding.json", "pattern.svg", "report.json", "tour.json"]
    rep = json.loads((out / "report.json").read_text())
    assert rep["tour"]["L"] == 8 and rep["bounds"]["length"] == 12
    assert rep["validation"]["max_layers"] == 2 and rep["status"] == "ok"
    quantities = [r["quantity"] for r in rep["ratios"]]
    assert quantities[0] == "L / N" and quantities[1].startswith("t / turns_lb")


def test_run_cube_zigzag(cube_file, tmp_path):
    out = tmp_path / "z"
    assert main(["run", cube_file, "--strip", "zigzag", "--outdir", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["validation"]["length"] <= 16 <= rep["bounds"]["length"] == 24
    assert rep["validation"]["max_layers"] <= 4


def test_open_patch_band_mode_refused(tmp_path, capsys):
    p = tmp_path / "patch.json"
    p.write_text(json.dumps(flat_patch(2, 2).to_json()))
    assert main(["run", str(p), "--outdir", str(tmp_path / "o")]) == 3
    assert "closed surface required" in capsys.readouterr().err
    assert main(["run", str(p), "--mode", "generic", "--outdir", str(tmp_path / "g")]) == 0


def test_fold_then_validate(cube_file, tmp_path, capsys):
    f = tmp_path / "f.json"
    assert main(["fold", cube_file, "--format", "json", "-o", str(f)]) == 0
    assert main(["validate", cube_file, str(f), "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["covered"] and rep["max_layers"] == 2


def test_bands_and_tour_text(cube_file, capsys):
    assert main(["bands", cube_file, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["bands"]) == 3 and doc["min_cover"] == 2 and doc["lp_value"] == "3/2"
    assert main(["tour", cube_file]) == 0
    text = capsys.readouterr().out
    assert "L " in text and "t/turns_lb" in text


def test_rigid_cases_cli(cube_file, capsys):
    assert main(["rigid-cases", cube_file, "--scale", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert sum(doc["histogram"].values()) == len(doc["steps"])


def test_gen_corpus_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["gen-corpus", "--seed", "1", "--count", "3", "--outdir", str(a)]) == 0
    assert main(["gen-corpus", "--seed", "1", "--count", "3", "--outdir", str(b)]) == 0
    fa, fb = sorted(a.iterdir()), sorted(b.iterdir())
    assert len(fa) == 3 and [p.read_text() for p in fa] == [p.read_text() for p in fb]
    for p in fa:
        assert 1 <= len(p.read_text().splitlines()) <= 12
        assert main(["check", str(p)]) == 0
    assert main(["gen-corpus", "--max-cubes", "21", "--outdir", str(a)]) == 2
