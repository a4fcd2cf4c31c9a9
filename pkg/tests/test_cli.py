import io
import json
import subprocess
import sys

import pytest

from rhs_actions.cli import canonical_json, run


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify_klein_four_report():
    code, out, _ = _run("classify", "C(2) x C(2)", "--deterministic")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["timestamp"] is None
    assert doc["normalized"] == "C(2) x C(2)"
    wits = [w for r in doc["report"]["theorem_A"]["by_m"] for w in r["witnesses"]]
    assert any(w["total_order"] == 8 and w["total_involutions"] == 1 for w in wits)


def test_theorem_b_exit_codes():
    code, out, _ = _run("theoremB", "quot(Q(16,3,1), Z(2))", "--bound", "256")
    assert code == 0 and json.loads(out)["report"]["tag"] == "cannot_act"
    code, _, _ = _run("theoremB", "quot(Q(16,3,1), Z(2))", "--bound", "256", "--fail-on-obstruction")
    assert code == 1
    code, _, _ = _run("theoremB", "C(5)", "--fail-on-obstruction")
    assert code == 0


def test_period_command():
    code, out, _ = _run("period", "C(7)")
    assert code == 0 and json.loads(out)["report"]["period"] == 2
    assert json.loads(out)["timestamp"] is not None


def test_input_and_budget_errors():
    code, _, err = _run("period", "Q(6)")
    assert code == 2 and "input error" in err
    code, _, err = _run("period", "C(3")
    assert code == 2
    code, _, err = _run("period", "C(100000)")
    assert code == 3 and "budget" in err
    code, _, _ = _run("h2", "C(4)", "--mod", "0")
    assert code == 2
    code, _, _ = _run("bogus")
    assert code == 2


def test_h2_enumerate():
    code, out, _ = _run("h2", "C(2) x C(2)", "--mod", "2", "--enumerate", "--deterministic")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["factors"] == [2, 2, 2] and len(rep["classes"]) == 8


def test_extensions_command():
    code, out, _ = _run("extensions", "C(2) x C(2)", "--mod", "2", "--deterministic")
    ws = json.loads(out)["report"]["witnesses"]
    assert code == 0 and len(ws) == 1 and ws[0]["total_involutions"] == 1


def test_catalog_command():
    code, out, _ = _run("catalog", "--max-order", "100", "--type", "B")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines and all(x["type"] == "type_B" for x in lines)


def test_text_mode_matches_json_content():
    _, js, _ = _run("period", "Q(8)", "--deterministic")
    _, tx, _ = _run("period", "Q(8)", "--deterministic", "--text")
    assert not tx.lstrip().startswith("{")
    assert "period: 4" in tx
    assert json.loads(js)["report"]["period"] == 4


def test_canonical_json_is_sorted_and_compact():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


@pytest.mark.parametrize("spec", ["D(8)", "Q(12)"])
def test_deterministic_runs_identical(spec):
    outs = {_run("classify", spec, "--deterministic")[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rhs_actions", "period", "C(7)", "--deterministic"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["period"] == 2


@pytest.mark.parametrize("argv,code", [(["period", "Q(6)"], 2), (["classify", "C(3"], 2), (["period", "C(100000)"], 3),
                                       (["h2", "C(2)", "--mod", "-1"], 2), (["theoremB", "O(48,3,1)"], 2)])
def test_failures_leave_stdout_empty(argv, code):
    rc, out, err = _run(*argv)
    assert rc == code and out == "" and err
