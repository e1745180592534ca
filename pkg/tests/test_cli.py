import io
import json
import subprocess
import sys

import pytest

from trekdet.cli import render_det_text, run
from trekdet.polynomial import Polynomial, canonical_string

EDGE = "node 1\nnode 2\ndedge 1 2\n"
TWO_CYCLE = "node 1\nnode 2\ndedge 1 2\ndedge 2 1\n"
DISCONNECTED = "node 1\nnode 2\n"
MIXED = "node 1\nnode 2\nnode 3\nbedge 1 2\ndedge 2 3\n"


@pytest.fixture
def graph_file(tmp_path):
    def write(text, name="g.txt"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return write


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_det_text(graph_file):
    code, out, _ = call("det", graph_file(EDGE), "--A", "1", "--B", "2")
    assert code == 0
    assert out.splitlines()[0] == "num: w_1_1*l_1_2  den: 1"
    assert "  sign=+1 ud=0 w_1_1*l_1_2" in out


def test_trek_sep_separated(graph_file):
    code, out, _ = call("trek-sep", graph_file(DISCONNECTED), "--A", "1", "--B", "2")
    assert (code, out) == (0, "SEPARATED\n")


def test_trek_sep_not_separated(graph_file):
    code, out, _ = call("trek-sep", graph_file(EDGE), "--A", "1", "--B", "2")
    assert (code, out) == (1, "NOT-SEPARATED\n")


def test_oracle_check(graph_file):
    code, out, _ = call("oracle-check", graph_file(TWO_CYCLE), "--A", "1", "--B", "1")
    assert (code, out) == (0, "PASS\n")


def test_sigma_collapsed_and_truncated(graph_file):
    code, out, _ = call("sigma", graph_file(EDGE), "--i", "2", "--j", "2")
    assert code == 0 and out.startswith("sigma_2_2 = w_2_2 + w_1_1*l_1_2^2")
    code, out, _ = call("sigma", graph_file(TWO_CYCLE), "--i", "1", "--j", "1", "--max-degree", "2")
    assert code == 0
    assert out == "sigma_1_1 (lambda-degree <= 2) = w_1_1 + 2*w_1_1*l_1_2*l_2_1 + w_2_2*l_2_1^2\n"


def test_treks_and_flows(graph_file):
    code, out, _ = call("treks", graph_file(EDGE), "--i", "1", "--j", "2")
    assert code == 0 and out == "left=1 right=1->2 monomial=w_1_1*l_1_2\n"
    code, out, _ = call("flows", graph_file(TWO_CYCLE), "--A", "--B")
    assert code == 0 and len(out.splitlines()) == 4


def test_verify(graph_file):
    code, out, _ = call("verify", graph_file(TWO_CYCLE), "--A", "1", "--B", "1")
    assert code == 0
    assert out.startswith("positivity: OK")


def test_mixed_graph_det(graph_file):
    code, out, _ = call("det", graph_file(MIXED), "--A", "1", "3", "--B", "2", "3")
    assert code == 0
    assert out.splitlines()[0] == "num: w_1_2*w_3_3  den: 1"
    assert "# classes are over the bidirected subdivision" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["det"],
        ["det", "g.txt", "--B", "1"],
        ["sigma", "g.txt", "--i", "1"],
        ["bogus", "g.txt"],
        ["det", "g.txt", "--A", "1", "--B", "1", "2"],
        ["det", "g.txt", "--A", "x", "--B", "1"],
        ["sigma", "g.txt", "--i", "1", "--j", "1", "--max-degree", "-1"],
        ["det", "g.txt", "--A", "1", "--B", "1", "--format", "xml"],
    ],
)
def test_usage_errors(graph_file, argv, capsys):
    path = graph_file(EDGE)
    argv = [path if a == "g.txt" else a for a in argv]
    code, _, _ = call(*argv)
    assert code == 2


@pytest.mark.parametrize(
    "text, argv",
    [
        ("node 1\ndedge 1 1\n", ["det", "--A", "1", "--B", "1"]),
        ("node 1\nfoo\n", ["det", "--A", "1", "--B", "1"]),
        (EDGE, ["det", "--A", "3", "--B", "1"]),
        (EDGE, ["det", "--A", "1", "1", "--B", "1", "2"]),
        (EDGE, ["sigma", "--i", "1", "--j", "9"]),
    ],
)
def test_input_errors(graph_file, text, argv):
    code, out, err = call(argv[0], graph_file(text), *argv[1:])
    assert code == 3 and not out and err.startswith("trekdet:")


def test_missing_file(tmp_path):
    code, _, err = call("det", str(tmp_path / "none.txt"), "--A", "1", "--B", "1")
    assert code == 3 and err


def test_structured_round_trip(graph_file):
    path = graph_file(TWO_CYCLE)
    code, out, _ = call("det", path, "--A", "1", "--B", "1", "--format", "structured")
    assert code == 0
    rec = json.loads(out)
    assert rec["is_zero"] is False and rec["acyclic"] is False
    for c in rec["numerator_classes"] + rec["denominator_classes"]:
        assert set(c) == {"sign", "ud_count", "monomial"}
    _, text, _ = call("det", path, "--A", "1", "--B", "1")
    assert render_det_text(rec) + "\n" == text
    assert canonical_string(Polynomial.from_records(rec["denominator"])) == "1 - 2*l_1_2*l_2_1 + l_1_2^2*l_2_1^2"


def test_structured_output_for_every_verb(graph_file):
    path = graph_file(MIXED)
    for argv in (
        ["sigma", path, "--i", "1", "--j", "3"],
        ["treks", path, "--i", "1", "--j", "3"],
        ["flows", path, "--A", "1", "--B", "3"],
        ["verify", path, "--A", "1", "--B", "3"],
    ):
        code, out, _ = call(*argv, "--format", "structured")
        assert code == 0
        json.loads(out)


def test_help_documents_ordering(capsys):
    assert call("--help")[0] == 0
    assert "order" in capsys.readouterr().out


def test_module_entry_point_is_deterministic(graph_file):
    path = graph_file(MIXED)
    argv = [sys.executable, "-m", "trekdet", "det", path, "--A", "1", "3", "--B", "2", "3", "--format", "structured"]
    outs = {
        subprocess.run(argv, capture_output=True, env={"PYTHONHASHSEED": seed}, check=True).stdout
        for seed in ("0", "1", "12345")
    }
    assert len(outs) == 1
