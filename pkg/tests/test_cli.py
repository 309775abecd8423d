import json
import math
import subprocess
import sys

import pytest

from tcrp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_plan_json(capsys):
    code, out, _ = run(capsys, "plan", "--n", "2", "--a", "1,0,0", "--b", "0,1,0", "--resolution", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["rule_index"] == 2 and doc["rule_label"] == "U_phi2"
    mid = doc["samples"][1]["coords"]
    assert mid == pytest.approx([1 / math.sqrt(2), -1 / math.sqrt(2), 0])


def test_plan_csv(capsys):
    code, out, _ = run(capsys, "plan", "--n", "1", "--a", "1,0", "--b", "1,1", "--resolution", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "rule_index,rule_label,t,x1,x2"
    assert len(lines) == 5


def test_plan_veronese_for_large_n(capsys):
    a = ",".join(["1"] + ["0"] * 8)
    b = ",".join(["0", "1"] + ["0"] * 7)
    code, out, _ = run(capsys, "plan", "--n", "8", "--a", a, "--b", b)
    assert code == 0
    assert json.loads(out)["planner"] == "veronese"
    code, _, err = run(capsys, "plan", "--n", "8", "--a", a, "--b", b, "--planner", "builtin")
    assert code == 2 and "1 <= n <= 7" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["plan", "--n", "2", "--a", "0,0,0", "--b", "1,0,0"],
        ["plan", "--n", "2", "--a", "1,0", "--b", "1,0,0"],
        ["plan", "--n", "2", "--a", "1,0,0", "--b", "1,0,0", "--resolution", "1"],
        ["table", "--max", "24"],
        ["verify", "--suite", "nope"],
        ["instability", "--n", "1", "--delta", "0"],
        ["bounds", "--n", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and err.startswith("tcrp: error")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["plan", "--n", "2", "--a", "x,y", "--b", "1,0,0"])
    assert exc.value.code == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "7")
    doc = json.loads(out)
    assert code == 0
    assert (doc["lower"], doc["upper"], doc["table_value"]) == (8, 8, 8)
    code, out, _ = run(capsys, "bounds", "--n", "3", "--space", "cp")
    assert json.loads(out)["top_coefficient"] == -20
    code, out, _ = run(capsys, "bounds", "--n", "5", "--format", "csv")
    assert out.splitlines()[1].startswith("5,")


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--max", "23")
    assert code == 0
    assert len(out.strip().splitlines()) == 24


def test_verify_bounds(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "bounds", "--seed", "1", "--samples", "10")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_instability(capsys):
    code, out, _ = run(capsys, "instability", "--n", "1", "--samples", "5000", "--delta", "1e-3")
    doc = json.loads(out)
    assert code == 0 and doc["estimate"] == 2
    assert len(doc["planner"]["rules"]) == 2


def test_output_deterministic(capsys):
    argv = ["verify", "--suite", "nonsingular", "--seed", "3", "--samples", "200"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "tcrp.cli", "bounds", "--n", "2"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["table_value"] == 4


def test_negative_coordinates_accepted(capsys):
    code, out, _ = run(capsys, "plan", "--n", "1", "--a", "-1,2", "--b", "-3,1")
    assert code == 0
    assert json.loads(out)["samples"][0]["coords"] == pytest.approx([-1 / math.sqrt(5), 2 / math.sqrt(5)])
