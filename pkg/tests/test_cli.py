"""Command-line front end: exit codes, report channels, config resolution."""

import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from cotwist.cli import InputError, main, parse_gamma
from cotwist.exactlin import CycArray
from cotwist.groups import build_elementary_abelian_symplectic
from cotwist.twist import TwistData, save_twist_file, symplectic_twist


def run_cli(argv, capsys):
    """Invoke main() in-process; returns (exit_code, stdout, stderr)."""
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def write_table_instance(tmp_path, corrupt=False):
    """Write group/twist files for G = H = (Z/3)^2 with its symplectic twist."""
    h_group, sigma = build_elementary_abelian_symplectic(3, 1)
    t = symplectic_twist(h_group, sigma)
    if corrupt:
        counts = t.J.counts.copy()
        counts[1, 2, 0] += 1
        t = TwistData(subgroup=t.subgroup, order=t.order,
                      J=CycArray(t.J.order, Fraction(t.J.scale), counts))
    group_file = tmp_path / "group.txt"
    twist_file = tmp_path / "twist.txt"
    h_group.to_file(group_file)
    save_twist_file(twist_file, t)
    cfg = {
        "construction": {
            "type": "table",
            "group_file": str(group_file),
            "subgroup": list(range(9)),
            "twist_file": str(twist_file),
        }
    }
    cfg_file = tmp_path / "config.json"
    cfg_file.write_text(json.dumps(cfg))
    return cfg_file


# ---------------------------------------------------------------------------
# happy paths


def test_spectrum_diagonal_example(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc, stdout, stderr = run_cli(
        ["spectrum", "--p", "3", "--gamma", "1,0,0,2", "--out", str(out)], capsys)
    assert rc == 0
    report = json.loads(out.read_text())
    assert [c["dims_direct"] for c in report["cosets"]] == [[1] * 9, [3]]
    assert report["totals"]["group_order"] == 18
    assert stdout == ""  # JSON went to the file, not stdout
    assert "all checks passed" in stderr  # table always lands on stderr


def test_verify_unipotent(capsys):
    rc, stdout, stderr = run_cli(["verify", "--p", "3", "--gamma", "1,1,0,1"], capsys)
    assert rc == 0
    report = json.loads(stdout)
    assert report["cosets"] == []  # verify audits the instance only
    assert all(report["global_checks"].values())
    assert stderr


def test_example_defaults(capsys):
    rc, stdout, _ = run_cli(["example"], capsys)
    assert rc == 0
    report = json.loads(stdout)
    assert report["instance"]["p"] == 3
    assert report["instance"]["gamma_generators"] == [[[1, 1], [0, 1]]]
    assert report["totals"]["group_order"] == 27
    assert [c["dims_direct"] for c in report["cosets"]] == [[1] * 9] * 3


def test_example_overrides(capsys):
    rc, stdout, _ = run_cli(["example", "--gamma", "1,0,0,2"], capsys)
    assert rc == 0
    report = json.loads(stdout)
    assert [c["dims_direct"] for c in report["cosets"]] == [[1] * 9, [3]]


def test_table_config_spectrum(tmp_path, capsys):
    cfg_file = write_table_instance(tmp_path)
    rc, stdout, _ = run_cli(["spectrum", "--config", str(cfg_file)], capsys)
    assert rc == 0
    report = json.loads(stdout)
    assert len(report["cosets"]) == 1  # H = G: a single double coset
    assert report["cosets"][0]["dims_direct"] == [1] * 9


# ---------------------------------------------------------------------------
# failure exit code 1: checks fail but the report is still written


def test_corrupted_twist_exits_1_and_names_axiom(tmp_path, capsys):
    cfg_file = write_table_instance(tmp_path, corrupt=True)
    out = tmp_path / "report.json"
    rc, _, stderr = run_cli(
        ["verify", "--config", str(cfg_file), "--out", str(out)], capsys)
    assert rc == 1
    report = json.loads(out.read_text())  # report written despite failure
    assert report["global_checks"]["twist_axioms"] is False
    assert any("2-cocycle" in line for line in report["failures"])
    assert "2-cocycle" in stderr


def test_corrupted_twist_spectrum_skips_cosets(tmp_path, capsys):
    cfg_file = write_table_instance(tmp_path, corrupt=True)
    rc, stdout, _ = run_cli(["spectrum", "--config", str(cfg_file)], capsys)
    assert rc == 1
    report = json.loads(stdout)
    assert report["cosets"] == []
    assert any("skipped" in line for line in report["failures"])


# ---------------------------------------------------------------------------
# input errors: exit code 2


@pytest.mark.parametrize("argv", [
    ["spectrum", "--p", "4", "--gamma", "1,0,0,1"],       # 4 is not prime
    ["spectrum", "--p", "2", "--gamma", "1,0,0,1"],       # p must be odd
    ["spectrum"],                                          # neither --p nor --config
    ["spectrum", "--p", "3", "--gamma", "1,0,0"],          # wrong entry count
    ["spectrum", "--p", "3", "--gamma", "1,0,0,x"],        # non-integer entry
    ["spectrum", "--p", "3", "--gamma", "1,1,0,1", "--config", "anything.json"],
    ["spectrum", "--config", "/nonexistent/config.json"],
])
def test_input_errors_exit_2(argv, capsys):
    rc, stdout, stderr = run_cli(argv, capsys)
    assert rc == 2
    assert stdout == ""
    assert "error:" in stderr


def test_bad_json_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    rc, _, stderr = run_cli(["spectrum", "--config", str(cfg)], capsys)
    assert rc == 2
    assert "not valid JSON" in stderr


def test_unknown_construction_type_exits_2(tmp_path, capsys):
    cfg = tmp_path / "weird.json"
    cfg.write_text(json.dumps({"construction": {"type": "quantum"}}))
    rc, _, stderr = run_cli(["spectrum", "--config", str(cfg)], capsys)
    assert rc == 2
    assert "quantum" in stderr


def test_config_missing_construction_exits_2(tmp_path, capsys):
    cfg = tmp_path / "empty.json"
    cfg.write_text("{}")
    rc, _, _ = run_cli(["spectrum", "--config", str(cfg)], capsys)
    assert rc == 2


def test_bad_seed_env_exits_2(monkeypatch, capsys):
    monkeypatch.setenv("COTWIST_SEED", "three")
    rc, _, stderr = run_cli(["verify", "--p", "3", "--gamma", "1,1,0,1"], capsys)
    assert rc == 2
    assert "COTWIST_SEED" in stderr


# ---------------------------------------------------------------------------
# seed resolution precedence: flag > config file > environment > default


def test_seed_from_env(monkeypatch, capsys):
    monkeypatch.setenv("COTWIST_SEED", "7")
    rc, stdout, _ = run_cli(["verify", "--p", "3", "--gamma", "1,1,0,1"], capsys)
    assert rc == 0
    assert json.loads(stdout)["seed"] == 7


def test_seed_flag_beats_env(monkeypatch, capsys):
    monkeypatch.setenv("COTWIST_SEED", "7")
    rc, stdout, _ = run_cli(
        ["verify", "--p", "3", "--gamma", "1,1,0,1", "--seed", "3"], capsys)
    assert rc == 0
    assert json.loads(stdout)["seed"] == 3


def test_config_seed_beats_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("COTWIST_SEED", "7")
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({
        "construction": {"type": "symplectic", "p": 3,
                         "gamma_generators": [[[1, 1], [0, 1]]]},
        "seed": 5,
    }))
    rc, stdout, _ = run_cli(["verify", "--config", str(cfg)], capsys)
    assert rc == 0
    assert json.loads(stdout)["seed"] == 5


def test_env_fills_config_without_seed(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("COTWIST_SEED", "7")
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({
        "construction": {"type": "symplectic", "p": 3,
                         "gamma_generators": [[[1, 1], [0, 1]]]},
    }))
    rc, stdout, _ = run_cli(["verify", "--config", str(cfg)], capsys)
    assert rc == 0
    assert json.loads(stdout)["seed"] == 7


def test_default_seed_is_zero(capsys):
    rc, stdout, _ = run_cli(["verify", "--p", "3", "--gamma", "1,1,0,1"], capsys)
    assert rc == 0
    assert json.loads(stdout)["seed"] == 0


# ---------------------------------------------------------------------------
# determinism of the written artifact


def test_out_files_byte_identical(tmp_path, capsys):
    args = ["spectrum", "--p", "3", "--gamma", "1,1,0,1", "--seed", "11"]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(args + ["--out", str(out1)], capsys)[0] == 0
    assert run_cli(args + ["--out", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_jobs_flag_is_transparent(tmp_path, capsys):
    base = ["spectrum", "--p", "3", "--gamma", "1,0,0,2"]
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli(base + ["--out", str(out1)], capsys)[0] == 0
    assert run_cli(base + ["--jobs", "3", "--out", str(out2)], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()


# ---------------------------------------------------------------------------
# gamma parsing unit checks


def test_parse_gamma_multiple_generators():
    gens = parse_gamma("1,1,0,1; 1,0,0,2", 1)
    assert gens == [[[1, 1], [0, 1]], [[1, 0], [0, 2]]]


def test_parse_gamma_n2_needs_16_entries():
    gens = parse_gamma(",".join("1" if i % 5 == 0 else "0" for i in range(16)), 2)
    assert gens == [[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]]
    with pytest.raises(InputError):
        parse_gamma("1,0,0,1", 2)


def test_parse_gamma_empty_blocks_ignored():
    assert parse_gamma(";;", 1) == []


# ---------------------------------------------------------------------------
# the installed module is runnable as a subprocess


def test_subprocess_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cotwist.cli", "example", "--out", "-"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["totals"]["group_order"] == 27
    assert "spectrum" in proc.stderr or "coset" in proc.stderr
