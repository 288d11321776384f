import json
import subprocess
import sys

import pytest

from crbuild.cli import RunConfig, cmd_selftest, main, run_selftest
from crbuild.errors import HashMismatch
from crbuild.geometries import build_geometry
from crbuild.persist import building_to_json, load_building, load_subcomplex, save_building


@pytest.fixture(scope="module")
def built(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    path = d / "b.json"
    assert main(["build", "--geometry", "A2:p=2", "--out", str(path)]) == 0
    return d, path


def test_build_writes_valid_json(built):
    d, path = built
    data = json.loads(path.read_text())
    assert data["header"]["chamber_count"] == 21
    assert data["header"]["diagram"] == "A2"
    assert load_building(path).n == 21


@pytest.mark.parametrize("generator,code", [("star:0/1", 1), ("fixed:100,010,001", 0),
                                            ("fixed:010,100,001", None)])
def test_subcomplex_and_classify(built, generator, code):
    d, path = built
    om = d / "om.json"
    assert main(["subcomplex", str(path), "--generator", generator, "--out", str(om)]) == 0
    out = d / "v.json"
    rc = main(["classify", str(path), str(om), "--out", str(out), "--trace"])
    verdict = json.loads(out.read_text())["verdict"]
    assert rc in (0, 1)
    if code is not None:
        assert rc == code
    assert verdict["kind"] == {0: "CR", 1: "Centre"}[rc]


def test_hull_generator_and_hash_check(built, tmp_path):
    d, path = built
    om = tmp_path / "om.json"
    assert main(["subcomplex", str(path), "--generator", "hull:0,20", "--out", str(om)]) == 0
    other = tmp_path / "c.json"
    main(["build", "--geometry", "C2:p=2", "--out", str(other)])
    assert main(["classify", str(other), str(om)]) == 3
    with pytest.raises(HashMismatch):
        load_subcomplex(om, load_building(other))


def test_errors_exit_3(built, tmp_path):
    d, path = built
    assert main(["build", "--geometry", "A5:p=7"]) == 3
    assert main(["build", "--geometry", "A2:p=4"]) == 3
    assert main(["subcomplex", str(path), "--generator", "nope:1"]) == 3
    assert main(["subcomplex", str(path), "--generator", "fixed:001,101,010"]) == 3  # Singer cycle
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 3
    tampered = tmp_path / "t.json"
    data = json.loads(path.read_text())
    data["panels"]["1"][0], data["panels"]["1"][1] = data["panels"]["1"][1], data["panels"]["1"][0]
    data["header"]["chamber_count"] = 22
    tampered.write_text(json.dumps(data))
    assert main(["classify", str(tampered), str(tampered)]) == 3


def test_export_dot_counts(built, tmp_path, capsys):
    d, path = built
    out = tmp_path / "g.dot"
    assert main(["export-dot", str(path), "--out", str(out)]) == 0
    text = out.read_text()
    assert text.count("[label=") - text.count(" -- ") == 21
    assert text.count(" -- ") == 42
    thin = tmp_path / "thin.json"
    main(["build", "--geometry", "thin:A2", "--out", str(thin)])
    main(["export-dot", str(thin), "--out", str(out)])
    assert out.read_text().count(" -- ") == 6


@pytest.mark.parametrize("spec", ["A2:p=2", "A2:p=3", "C2:p=2", "thin:A3", "thin:I2:6"])
def test_round_trip(spec, tmp_path):
    b = build_geometry(spec)
    path = tmp_path / "b.json"
    h = save_building(b, path)
    again = load_building(path)
    assert again.panels == b.panels
    assert building_to_json(again) == building_to_json(b)
    assert building_to_json(again)["hash"] == h


def test_selftest_quick_and_fault_injection():
    report, ok = run_selftest("quick", seed=0)
    assert ok and "FAIL" not in report
    assert report == run_selftest("quick", seed=0)[0]
    report, ok = run_selftest("quick", seed=0, inject_fault=True)
    assert not ok
    assert "FAIL axioms[A2:p=2 corrupted]" in report and "AxiomViolation" in report


def test_selftest_exit_code(tmp_path):
    out = tmp_path / "r.txt"
    assert cmd_selftest(RunConfig("selftest", out=str(out), inject_fault=True)) == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "crbuild", "build", "--geometry", "thin:A1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["header"]["chamber_count"] == 2
