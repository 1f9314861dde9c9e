import json
import subprocess
import sys

import pytest

from qflag.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_cartan_json(capsys):
    code, out = run_cli(["cartan", "--type", "A2", "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["l0"] == 3 and data["weyl_order"] == 6


def test_custom_cartan_matrix(capsys):
    code, out = run_cli(["cartan", "--cartan-matrix", "[[2,-1],[-1,2]]",
                         "--json"], capsys)
    assert code == 0
    assert json.loads(out)["rank"] == 2


def test_basis_dimension(capsys):
    code, out = run_cli(["basis", "--type", "A2", "--degree", "<1,1>",
                         "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["dimension"] == 2


def test_basis_minus_sign(capsys):
    code, out = run_cli(["basis", "--type", "A1", "--degree", "<2>",
                         "--sign", "minus", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["words"] == ["f[1]*f[1]"]


def test_pairing_table(capsys):
    code, out = run_cli(["pairing", "--type", "A1", "--degree", "<1>",
                         "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert len(data["matrix"]) == 1


def test_rmatrix_export(capsys):
    code, out = run_cli(["rmatrix", "--type", "A1", "--hw", "[1]",
                         "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["flavor"] == "R"
    assert len(data["matrix"]) == 4
    # scalars rendered as grammar strings, never floats
    assert all(isinstance(x, str) for row in data["matrix"] for x in row)


def test_module_description(capsys):
    code, out = run_cli(["module", "--type", "A2", "--hw", "[1,1]",
                         "--json"], capsys)
    assert code == 0
    assert json.loads(out)["dim"] == 8
    code, out = run_cli(["module", "--type", "A1", "--hw", "[0]", "--verma",
                         "--depth", "<3>", "--side", "right", "--json"],
                        capsys)
    assert code == 0
    data = json.loads(out)
    assert data["side"] == "right" and data["dim"] == 4


def test_coord_summary(capsys):
    code, out = run_cli(["coord", "--type", "A1", "--cutoff", "[2]",
                         "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["graded_dimensions"] == {"[0]": 1, "[1]": 2, "[2]": 3}


def test_verify_pass_and_exit_codes(capsys):
    code, out = run_cli(["verify", "pbw", "--type", "A1", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_weyl_character_to_six(capsys):
    code, out = run_cli(["verify", "weyl-character", "--type", "A1",
                         "--max", "6", "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["pass"] and len(data["results"]) == 7


def test_verify_suite_flag_form(capsys):
    code, out = run_cli(["verify", "--suite", "pbw", "--type", "A1",
                         "--json"], capsys)
    assert code == 0
    assert json.loads(out)["suite"] == "pbw"


def test_verify_negative_control(capsys):
    code, out = run_cli(["verify", "relations", "--type", "A1",
                         "--cutoff", "[2]", "--corrupt", "--json"], capsys)
    assert code == 1
    data = json.loads(out)
    assert data["pass"] is False
    bad = [r for r in data["results"] if not r["pass"]]
    assert bad and "counterexample" in bad[0]
    cex = bad[0]["counterexample"]
    assert {"grade", "input", "output", "lhs", "rhs"} <= set(cex)


def test_invalid_inputs_exit_2(capsys):
    assert main(["verify", "nonsense", "--type", "A1"]) == 2
    code = main(["basis", "--type", "A1", "--degree", "bad"])
    assert code == 2
    assert main(["cartan", "--type", "E8"]) == 2
    assert main([]) == 2
    # non-dominant highest weight is invalid input
    assert main(["rmatrix", "--type", "A1", "--hw", "[-1]"]) == 2
    assert main(["verify", "--type", "A1"]) == 2


def test_determinism_byte_identical():
    cmd = [sys.executable, "-m", "qflag.cli", "verify", "coord",
           "--type", "A1", "--seed", "5", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second


def test_max_height_env(monkeypatch):
    monkeypatch.setenv("QFLAG_MAX_HEIGHT", "3")
    from qflag.cartan import preset
    assert preset("A1").max_height == 3
    monkeypatch.delenv("QFLAG_MAX_HEIGHT")
    assert preset("A1").max_height == 8


def test_text_output_mode(capsys):
    code, out = run_cli(["verify", "pbw", "--type", "A1"], capsys)
    assert code == 0
    assert out.startswith("suite pbw: PASS")
    assert "[ok]" in out


def test_console_script_entry_point():
    proc = subprocess.run(["qflag", "cartan", "--type", "A1", "--json"],
                          capture_output=True)
    if proc.returncode == 127 or b"not found" in proc.stderr:
        pytest.skip("console script not on PATH")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["l0"] == 2
