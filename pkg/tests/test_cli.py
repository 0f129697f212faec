import shutil
import subprocess

import pytest

from drsop.cli import main
from drsop.io import format_instance, read_report

from conftest import stable_space

T1 = ["--instance", "@standard", "--services", "1..20", "--nodes", "A,B,C,D"]


def test_solve_then_verify(tmp_path, capsys):
    out = tmp_path / "best.txt"
    assert main(["solve", *T1, "--strategy", "fullscan", "--out", str(out)]) == 0
    (row,) = read_report(capsys.readouterr().out)
    assert row.best_cost == 27 and row.stable
    assert main(["verify", *T1, "--assignment", str(out)]) == 0
    assert capsys.readouterr().out.splitlines() == ["stable: yes", "cost: 27"]


def test_heuristic_solve_round_trips(tmp_path, capsys):
    out = tmp_path / "best.txt"
    code = main(["solve", *T1, "--strategy", "sga-sa", "--budget-ms", "400", "--seed", "3",
                 "--ga-population", "20", "--out", str(out)])
    (row,) = read_report(capsys.readouterr().out)
    assert code == 0 and row.stable
    assert main(["verify", *T1, "--assignment", str(out)]) == 0
    assert f"cost: {row.best_cost}" in capsys.readouterr().out


def test_stable_instance_costs_nothing(tmp_path, capsys):
    inst = tmp_path / "ok.drsop"
    inst.write_text(format_instance(stable_space()))
    assert main(["solve", "--instance", str(inst), "--strategy", "greedy"]) == 0
    (row,) = read_report(capsys.readouterr().out)
    assert row.best_cost == 0


def test_overloaded_assignment_exits_2(tmp_path, capsys):
    inst = tmp_path / "ok.drsop"
    inst.write_text("resources cpu mem\nnode A 5 5\nnode B 5 5\n"
                    "service 1 A 1 3 1\nservice 2 B 1 3 1\n")
    mu = tmp_path / "mu.txt"
    mu.write_text("1 A\n2 A\n")
    assert main(["verify", "--instance", str(inst), "--assignment", str(mu)]) == 2
    out = capsys.readouterr().out
    assert "stable: no" in out and "overloaded: node A resource" in out


def test_partial_assignment_exits_1(tmp_path, capsys):
    inst = tmp_path / "ok.drsop"
    inst.write_text(format_instance(stable_space()))
    mu = tmp_path / "mu.txt"
    mu.write_text("1 A\n2 B\n")
    assert main(["verify", "--instance", str(inst), "--assignment", str(mu)]) == 1
    assert "not total" in capsys.readouterr().err


def test_infeasible_solve_exits_2(tmp_path, capsys):
    inst = tmp_path / "bad.drsop"
    inst.write_text("resources cpu\nnode A 5\nservice 1 A 1 3\nservice 2 A 1 3\n")
    assert main(["solve", "--instance", str(inst), "--strategy", "tabu",
                 "--budget-ms", "50"]) == 2
    assert ",none,0," in capsys.readouterr().out
    assert main(["oracle", "--instance", str(inst)]) == 2
    assert capsys.readouterr().out.strip() == "infeasible"


def test_oracle_small_and_capped(tmp_path, capsys):
    inst = tmp_path / "two.drsop"
    inst.write_text("resources x\nnode A 5\nnode B 5\nservice 1 A 3 4\nservice 2 A 2 4\n")
    assert main(["oracle", "--instance", str(inst)]) == 0
    assert capsys.readouterr().out.strip() == "2"
    assert main(["oracle", *T1]) == 1
    assert main(["oracle", "--instance", "@standard", "--services", "1..8",
                 "--nodes", "A,B,C,D"]) == 0


@pytest.mark.parametrize("argv", [
    ["solve", *T1, "--strategy", "nosuch"],
    ["solve", *T1, "--strategy", "greedy", "--budget-ms", "0"],
    ["solve", "--instance", "/nonexistent", "--strategy", "greedy"],
    ["solve", "--instance", "@standard", "--services", "5..1", "--strategy", "greedy"],
    ["solve", "--instance", "@standard", "--nodes", "A,Q", "--strategy", "greedy"],
    ["solve", *T1, "--strategy", "sa", "--sa-cooling", "1.5"],
    ["bench", "--instance", "@standard", "--scenarios", "/nonexistent"],
    ["bench", "--instance", "@standard", "--scenarios", "@standard-ladder", "--seeds", "x"],
    ["frobnicate"],
    [],
])
def test_input_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_bench_writes_csv(tmp_path):
    scn = tmp_path / "one.scn"
    scn.write_text("scenario tiny\nservices 1..10\nnodes A B C D\nbudget_ms 200\n"
                   "strategies greedy fullscan\nseeds 1 2\n")
    out = tmp_path / "r.csv"
    assert main(["bench", "--instance", "@standard", "--scenarios", str(scn),
                 "--out", str(out)]) == 0
    rows = read_report(out.read_text())
    assert [(r.strategy, r.seed) for r in rows] == [
        ("greedy", 1), ("greedy", 2), ("fullscan", 1), ("fullscan", 2)]


@pytest.mark.skipif(shutil.which("drsop") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["drsop", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
