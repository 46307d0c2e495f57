import io
import json
import subprocess
import sys

import jsonschema
import pytest

from newton_critic.cli import run
from newton_critic.report import load_schema

EXAMPLE_1 = "(theta - v)^3 * v + v^3"
EXAMPLE_2 = "(theta + exp(v) - 1)^3 * v + v^2"
SCHEMA = load_schema()


def call(*argv):
    buf = io.StringIO()
    code, report = run(list(argv), buf)
    return code, report, buf.getvalue()


def call_json(*argv):
    code, report, text = call(*argv, "--json")
    payload = json.loads(text)
    jsonschema.validate(payload, SCHEMA)
    assert payload["schema"] == report["schema"] == "newton-critic/1"
    assert payload["status"] == report["status"]
    return code, payload


def test_critical_example_one():
    code, payload = call_json("critical", EXAMPLE_1)
    assert code == 0
    assert payload["status"] == "ok"
    assert payload["result"]["p_gamma"] == {"exact": "3", "decimal": 3.0}


def test_critical_human_output():
    code, _, text = call("critical", EXAMPLE_1)
    assert code == 0
    assert text.startswith("p_gamma = 3")


def test_classify_case_two():
    code, payload = call_json("classify", "v*theta + v^2*theta^2")
    assert code == 0
    assert payload["result"]["verdict"] == "Degenerate"
    assert payload["result"]["case"] == 2


def test_degenerate_germ_has_infinite_exponent():
    code, payload = call_json("critical", "v*theta")
    assert code == 0
    assert payload["result"]["p_gamma"] == {"exact": "inf", "decimal": None}


@pytest.mark.parametrize("argv", [["critical", "theta^2"], ["critical", "v^(1/2)"], ["classify"]])
def test_input_errors(argv):
    code, payload = call_json(*argv)
    assert code == 2
    assert payload["status"] == "error"
    assert payload["error"]["type"] in ("DegenerateInput", "ParseError", "InputError")


def test_depth_limit_gives_partial_report():
    code, payload = call_json("critical", EXAMPLE_2, "--max-depth", "1")
    assert code == 3
    assert payload["status"] == "partial"
    assert payload["error"]["type"] == "MaxDepthExceeded"


def test_replay_round_trip(tmp_path):
    code, payload = call_json("critical", EXAMPLE_2, "--order", "10", "--trace")
    assert code == 0
    kinds = [e["kind"] for e in payload["result"]["trace"]]
    assert "ScenarioTwoCollapse" in kinds
    path = tmp_path / "report.json"
    path.write_text(json.dumps(payload))
    code, replayed = call_json("critical", "--replay", str(path))
    assert code == 0
    assert replayed["result"]["p_gamma"] == payload["result"]["p_gamma"]


def test_file_input(tmp_path):
    path = tmp_path / "germ.txt"
    path.write_text(EXAMPLE_1 + "\n")
    code, payload = call_json("critical", "--file", str(path))
    assert code == 0 and payload["input"]["expr"] == EXAMPLE_1


def test_diagram_command():
    code, payload = call_json("diagram", EXAMPLE_1)
    assert code == 0
    assert payload["result"]["p0"]["exact"] == "3"


def test_resolve_and_verify_commands():
    code, payload = call_json("resolve", "theta^2 - v*theta", "--samples", "1000")
    assert code == 0
    code, payload = call_json("verify-resolution", "theta^2 - v*theta", "--samples", "1000")
    assert code == 0
    assert payload["result"]["verification"]["passed"]


def test_knapp_command():
    code, payload = call_json("probe-knapp", "v*(1 + theta^2)", "--grid", "128", "--deltas", "3", "4", "--p", "2")
    assert code == 0


def test_blowup_command():
    code, payload = call_json("probe-blowup", "v*theta", "--refinements", "1")
    assert code == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "newton_critic.cli", "critical", EXAMPLE_1, "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["p_gamma"]["exact"] == "3"


def test_replay_mismatch_fails(tmp_path):
    _, payload = call_json("critical", EXAMPLE_1, "--trace")
    payload["result"]["p_gamma"] = {"exact": "4", "decimal": 4.0}
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(payload))
    code, replayed = call_json("critical", "--replay", str(path))
    assert code == 1
    assert replayed["result"]["identical"] is False
