import os

import pandas as pd
import pytest

from src.cli import commands
from src.cli.commands import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from src.state.run_config import LabSettings
from src.tools.file_utils import read_json_file

ROOT = os.path.dirname(os.path.dirname(__file__))
PSEUDORANDOM = os.path.join(ROOT, "constraints", "pseudorandom_f.gc")


@pytest.fixture
def out(tmp_path):
    return str(tmp_path / "reports")


def run(*args):
    return main([*args, "--quiet"])


def test_usage_errors():
    assert main([]) == EXIT_USAGE
    assert main(["no-such-command"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_stochastic_commands_need_a_seed(out):
    assert run("verify", "--out", out) == EXIT_USAGE
    assert run("density", "--graphs", "K2", "--out", out) == EXIT_USAGE
    assert not os.path.exists(out)


def test_heatmap(out):
    assert run("heatmap", "--graphon", "half", "--resolution", "64", "--out", out, "--image", "w.pgm") == EXIT_OK
    assert os.path.isfile(os.path.join(out, "w.pgm"))
    assert os.path.isfile(os.path.join(out, "w.pgm.parts.txt"))
    assert run("heatmap", "--resolution", "16", "--out", out) == EXIT_USAGE


def test_verify_selected_items(out):
    code = run("verify", "--seed", "1", "--budget", "20000", "--out", out, "--items", "f-pseudorandom",
               "zero-blocks")
    assert code == EXIT_OK
    reports = read_json_file(os.path.join(out, "battery.json"))
    assert {r["verdict"] for r in reports} == {"pass"}
    assert os.path.isfile(os.path.join(out, "battery.txt"))


def test_verify_detects_mutation(out):
    code = run("verify", "--seed", "1", "--budget", "20000", "--out", out, "--items", "f-pseudorandom",
               "--mutate", "FxB1")
    assert code == EXIT_FAILED


def test_verify_unknown_item(out):
    assert run("verify", "--seed", "1", "--out", out, "--items", "nonsense") == EXIT_USAGE


def test_evaluate_pseudorandom_constraints(out):
    code = run("evaluate", "--seed", "2", "--budget", "20000", "--constraints", PSEUDORANDOM, "--out", out)
    assert code == EXIT_OK
    names = [r["name"] for r in read_json_file(os.path.join(out, "constraints.json"))]
    assert names == sorted(names)
    assert "f_b1" in names


def test_evaluate_failing_and_malformed(tmp_path, out):
    wrong = tmp_path / "wrong.gc"
    wrong.write_text("constraint k2: K2 = 0.9\n")
    args = ("evaluate", "--seed", "0", "--graphon", "constant(p=0.5)", "--method", "quadrature", "--out", out)
    assert run(*args, "--constraints", str(wrong)) == EXIT_FAILED
    broken = tmp_path / "broken.gc"
    broken.write_text("constraint k2: K2 = \n")
    assert run(*args, "--constraints", str(broken)) == EXIT_USAGE


def test_density_table(out):
    code = run("density", "--seed", "1", "--graphon", "constant(p=0.5)", "--graphs", "K2", "K3", "--format", "csv",
               "--out", out)
    assert code == EXIT_OK
    frame = pd.read_csv(os.path.join(out, "densities.csv"))
    assert list(frame["value"]) == pytest.approx([0.5, 0.125])
    assert set(frame["kind"]) == {"quadrature"}


def test_density_unknown_graph(out):
    assert run("density", "--seed", "1", "--graphs", "K99", "--out", out) == EXIT_USAGE


def test_sample(out):
    assert run("sample", "--seed", "3", "-n", "60", "--graphon", "half", "--graphs", "K2", "--out", out) == EXIT_OK
    summary = read_json_file(os.path.join(out, "sample.json"))
    assert summary["n"] == 60
    assert summary["densities"][0]["value"] == pytest.approx(summary["edge_density"])
    with open(os.path.join(out, "graph.edgelist")) as handle:
        assert len(handle.read().splitlines()) == summary["edges"] + 1


def test_convergence(out):
    code = run("convergence", "--seed", "1", "--graphon", "half", "--graphs", "K2", "--schedule", "20", "40",
               "--trials", "2", "--budget", "10000", "--format", "csv", "--out", out)
    assert code == EXIT_OK
    report = pd.read_csv(os.path.join(out, "convergence.csv"))
    assert list(report["n"]) == [20, 40]
    assert os.path.isfile(os.path.join(out, "convergence.md"))
    assert len(pd.read_csv(os.path.join(out, "convergence_trials.csv"))) == 4


def test_classes(out):
    code = run("classes", "--seed", "0", "--graphon", "half", "--eps", "0.2", "0.1", "--pairs", "100", "--out", out)
    assert code == EXIT_OK
    rows = read_json_file(os.path.join(out, "classes.json"))
    assert [r["eps"] for r in rows] == [0.2, 0.1]
    assert rows[0]["classes"] <= rows[1]["classes"]


def test_distances(out):
    code = run("distances", "--seed", "1", "--pairs", "2", "--budget", "100000", "--depth", "20", "--out", out)
    assert code == EXIT_OK
    frame = pd.read_csv(os.path.join(out, "distances.csv"))
    assert len(frame) == 2
    assert frame["holds"].all()


def test_distances_need_the_hypercube(out):
    assert run("distances", "--seed", "1", "--graphon", "half", "--out", out) == EXIT_USAGE


def test_evaluate_constraint_directory(out):
    code = run("evaluate", "--seed", "2", "--budget", "20000", "--constraints", os.path.dirname(PSEUDORANDOM),
               "--out", out)
    assert code == EXIT_OK
    assert len(read_json_file(os.path.join(out, "constraints.json"))) == 11


def test_dotenv_is_loaded_before_settings(monkeypatch):
    order = []
    read_settings = LabSettings.from_env
    monkeypatch.setattr(commands, "load_dotenv", lambda: order.append("dotenv"))
    monkeypatch.setattr(LabSettings, "from_env", classmethod(lambda cls: order.append("settings") or read_settings()))
    assert main(["--help"]) == EXIT_OK
    assert order == ["dotenv", "settings"]
