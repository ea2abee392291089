"""Command-line interface: builds, verification suites, reports, config
files, and the resource-cap refusal paths."""

import json

import pytest

from cosetcode.cli import main


def test_build_q2_writes_artifacts(tmp_path):
    out = tmp_path / "build"
    assert main(["build", "--q", "2", "--out", str(out)]) == 0
    base = out / "q2_m1"
    for suffix in ("_hx.alist", "_hz.alist", "_hx.mtx", "_hz.mtx",
                   "_complex.txt", "_meta.json"):
        assert (out / ("q2_m1" + suffix)).exists() or (
            base.parent / (base.name + suffix)
        ).exists()
    meta = json.loads((out / "q2_m1_meta.json").read_text())
    assert meta["n"] == 168
    assert meta["k"] == 46
    assert meta["check_weights"]["x"] == {"8": 63}


def test_build_local_only_q8(tmp_path, capsys):
    assert main([
        "build", "--q", "8", "--local-only", "--out", str(tmp_path)
    ]) == 0
    rep = json.loads((tmp_path / "local_report.json").read_text())
    assert rep["vertex_code_dimension"] == 76
    assert rep["rate_bound"] == "7/64"


def test_verify_fixture_octahedron_passes(capsys):
    assert main(["verify", "--fixture", "octahedron"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert all(ok for ok, _ in report.values())


def test_verify_fixture_corrupted_fails(capsys):
    assert main(["verify", "--fixture", "corrupted_octahedron"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert not report["disjoint_union"][0]


def test_verify_unknown_fixture_is_config_error():
    assert main(["verify", "--fixture", "nonexistent"]) == 2


def test_verify_structure_suite_q2(capsys):
    assert main(["verify", "--q", "2", "--suite", "structure"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["structure"]["disjoint_union"]
    assert report["structure"]["intersection"]


def test_config_errors_exit_two():
    assert main(["build", "--q", "6"]) == 2  # not a power of two
    assert main(["build", "--q", "16"]) == 2  # no default local code
    assert main(["build", "--q", "2", "--rm", "bogus"]) == 2
    assert main(["build", "--q", "2", "--rm", "0,3"]) == 2  # length mismatch
    assert main(["build", "--q", "2", "--x", "1"]) == 2  # x + z != D - 2
    assert main(["build", "--config", "/nonexistent/path.cfg"]) == 2


def test_cap_refusals_exit_three():
    # group enumeration cap: q=8 full group has 16482816 elements
    assert main(["build", "--q", "8", "--cap-enumeration", "20000"]) == 3
    # qubit cap: q=4 gives 60480 tops
    assert main([
        "build", "--q", "4", "--cap-enumeration", "100000",
        "--cap-qubits", "1000",
    ]) == 3


def test_config_file_parsing(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nq = 2\nsuite = structure\n")
    assert main(["verify", "--config", str(cfg)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) == {"structure"}


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    assert main(["verify", "--config", str(cfg)]) == 2


def test_report_local_only(capsys):
    assert main(["report", "--q", "8", "--local-only"]) == 0
    out = capsys.readouterr().out
    assert "rho0 = 19/128" in out
    assert "7/64" in out


def test_report_q2(capsys):
    assert main(["report", "--q", "2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["n"] == 168 and rep["k"] == 46
    assert rep["darboux_pairing_identity"] == 46
    assert rep["floquet_max_check_weight"] == 2
    assert set(rep["logical_color_census"].values()) == {23}
