import json
import subprocess
import sys

import pytest

from lgmirror.cli import RunConfig, corpus_run, main, run


def run_json(command, potential=None, **kw):
    code, report, text = run(RunConfig(command, potential, "json", **kw))
    assert json.loads(text) == report
    return code, report, text


def test_analyze_loop23():
    code, report, _ = run_json("analyze", "x1^2*x2 + x2^3*x1")
    assert code == 0
    assert report["weights"] == ["2/5", "1/5"]
    assert report["central_charge"] == "4/5"
    assert report["milnor_number"] == 6
    assert report["class"] == "Loop(2,3)"


def test_fermat_a1_is_fine():
    code, report, _ = run_json("analyze", "x1^2")
    assert code == 0 and report["weights"] == ["1/2"]


@pytest.mark.parametrize("text, kind", [
    ("x1*x2", "NotInvertible"),
    ("x1^2*x2^2 + x1*x2", "DegenerateWeights"),
    ("x1^2*x2 + x2^", "ParseError"),
])
def test_domain_errors_exit_one(text, kind):
    code, report, _ = run_json("analyze", text)
    assert code == 1 and report["error"]["type"] == kind


def test_mirror_check_smallest_loop():
    code, report, _ = run_json("mirror-check", "x1^2*x2 + x2^2*x1")
    assert code == 0
    m = report["mirror"]
    assert m["iso"]["is_iso"] is True and m["iso"]["scalar_c"] == "3"
    assert m["dims"] == {"A": 4, "B": 4}
    assert m["correlator_crosscheck"]["mismatches"] == []
    assert {"determined", "checked", "mismatches"} <= set(m["correlator_crosscheck"])


def test_mirror_check_trace_has_minus_one_degrees():
    code, report, _ = run_json("mirror-check", "x1^3*x2 + x2^4*x1")
    assert code == 0
    triples = [t for t in report["trace"] if len(t["insertions"]) == 3]
    assert len(triples) == (3 - 2) + (4 - 2)
    assert all(t["l_values"] == ["-1", "-1"] and t["value"] == "1" for t in triples)


def test_mirror_check_chain_is_informational():
    code, report, _ = run_json("mirror-check", "x1^2*x2 + x2^3")
    assert code == 0
    assert report["mirror"]["theorem_checked"] is False
    assert "poincare_equal" in report["mirror"]


@pytest.mark.parametrize("command", ["group", "milnor", "state-space", "ring"])
def test_other_commands(command):
    code, report, _ = run_json(command, "x1^2*x2 + x2^3*x1")
    assert code == 0 and "error" not in report


def test_ring_rejects_non_loop():
    code, report, _ = run_json("ring", "x1^3")
    assert code == 1 and report["error"]["type"] == "WrongShape"


def test_reports_are_byte_identical():
    a = run(RunConfig("ring", "x1^2*x2 + x2^3*x1", "json"))[2]
    b = run(RunConfig("ring", "x1^2*x2 + x2^3*x1", "json"))[2]
    assert a == b
    assert run(RunConfig("analyze", "x1^2*x2 + x2^3*x1", "text"))[2] == \
        run(RunConfig("analyze", "x1^2*x2 + x2^3*x1", "text"))[2]


def test_rationals_are_strings():
    _, report, _ = run_json("milnor", "x1^2*x2 + x2^3*x1")

    def walk(x):
        assert not isinstance(x, float)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
    walk(report)


def test_corpus_small():
    report, code = corpus_run(3)
    assert code == 0
    assert report["summary"]["pairs"] == 4 and report["summary"]["passed"] == 4
    assert [(r["a1"], r["a2"]) for r in report["results"]] == [(2, 2), (2, 3), (3, 2), (3, 3)]


def test_corpus_bad_exponent():
    code, report, _ = run_json("corpus", max_exponent=1)
    assert code == 1 and "error" in report


def test_file_input_and_out(tmp_path, capsys):
    src = tmp_path / "w.txt"
    src.write_text("x1^2*x2 + x2^2*x1\n")
    dest = tmp_path / "r.json"
    assert main(["analyze", f"@{src}", "--format", "json", "--out", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(dest.read_text())["class"] == "Loop(2,2)"


def test_main_error_goes_to_stderr(capsys):
    assert main(["analyze", "x1*x2"]) == 1
    assert "NotInvertible" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lgmirror.cli", "analyze", "x1^3", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["class"] == "Fermat(3)"
