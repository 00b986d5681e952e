import json

import pytest
from sympy import sympify
from typer.testing import CliRunner

from virtual_wrt.cli.main import app, format_complex
from virtual_wrt.algebra.poly import A_SYMBOL, T_SYMBOL
from virtual_wrt.config.settings import settings

runner = CliRunner()


@pytest.mark.parametrize(
    "z,text",
    [
        (0j, "0"),
        (0.70710678j, "0.707107i"),
        (-0.70710678j, "-0.707107i"),
        (1 + 1j, "1+1i"),
        (0.448288 - 1.673033j, "0.448288-1.67303i"),
        (2 + 1e-12j, "2"),
    ],
)
def test_format_complex(z, text):
    assert format_complex(z) == text


def test_bracket_of_a_curl():
    result = runner.invoke(app, ["bracket", "--code", "O1+U1+"])
    assert result.exit_code == 0
    assert sympify(result.stdout.strip()) == -A_SYMBOL ** 3


def test_bracket_json():
    result = runner.invoke(app, ["bracket", "--builtin", "hopf+", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["diagram"] == "O1+U2+;U1+O2+"
    assert payload["bracket"] == {"4": -1, "-4": -1}


def test_jones_of_the_trefoil():
    result = runner.invoke(app, ["jones", "--builtin", "trefoil"])
    assert result.exit_code == 0
    line = next(l for l in result.stdout.splitlines() if l.startswith("V(t) = "))
    assert sympify(line[len("V(t) = "):]) == -T_SYMBOL ** 4 + T_SYMBOL ** 3 + T_SYMBOL


def test_colored_generic():
    result = runner.invoke(app, ["colored", "--code", "", "--colors", "2"])
    assert result.exit_code == 0
    assert sympify(result.stdout.strip()) == A_SYMBOL ** 4 + 1 + A_SYMBOL ** -4


def test_wrt_table_reproduces_printed_value():
    result = runner.invoke(app, ["wrt", "--builtin", "paperKhat", "--r", "3", "--table"])
    assert result.exit_code == 0
    assert "<K^omega> = 1+1i" in result.stdout
    assert "Z = 0.707107i" in result.stdout


def test_wrt_state_sum():
    result = runner.invoke(app, ["wrt", "--code", "", "--r", "4", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["source"] == "state-sum"
    assert abs(payload["normalized"]["re"] - 1) < 1e-8
    assert abs(payload["normalized"]["im"]) < 1e-8


def test_wrt_table_only_for_examples():
    result = runner.invoke(app, ["wrt", "--builtin", "trefoil", "--r", "3", "--table"])
    assert result.exit_code == 2


def test_group_three_manifold():
    result = runner.invoke(app, ["group", "--builtin", "paperK", "--three-manifold", "--symmetric", "3"])
    assert result.exit_code == 0
    assert "abelianization: Z/2" in result.stdout
    assert "homomorphisms into S3: 4" in result.stdout


def test_move_walk_is_seeded():
    args = ["move", "--builtin", "trefoil", "--kinds", "R1+,R2", "--steps", "3", "--seed", "5"]
    first = runner.invoke(app, args)
    second = runner.invoke(app, args)
    assert first.exit_code == 0
    assert first.stdout == second.stdout


def test_move_list_sites():
    result = runner.invoke(app, ["move", "--code", "O1+O2-U1+U2-", "--kinds", "R2", "--list-sites"])
    assert result.exit_code == 0
    assert "R2 (remove) crossings=[1, 2]" in result.stdout


def test_move_rejects_unknown_kind():
    result = runner.invoke(app, ["move", "--code", "", "--kinds", "R9"])
    assert result.exit_code == 2


def test_malformed_diagram_exits_with_2():
    result = runner.invoke(app, ["bracket", "--code", "O1+X2+"])
    assert result.exit_code == 2
    result = runner.invoke(app, ["bracket", "--code", "O1+O1+"])
    assert result.exit_code == 2


def test_input_selection():
    assert runner.invoke(app, ["bracket"]).exit_code == 2
    assert runner.invoke(app, ["bracket", "--code", "", "--builtin", "unknot"]).exit_code == 2
    assert runner.invoke(app, ["bracket", "--builtin", "no-such-diagram"]).exit_code == 2


def test_file_input(tmp_path):
    path = tmp_path / "curl.txt"
    path.write_text("O1-U1-\n", encoding="utf-8")
    result = runner.invoke(app, ["bracket", "--file", str(path)])
    assert result.exit_code == 0
    assert sympify(result.stdout.strip()) == -A_SYMBOL ** -3


def test_computation_error_exits_with_1():
    result = runner.invoke(app, ["colored", "--builtin", "kink+", "--colors", "2", "--r", "3"])
    assert result.exit_code == 1


def test_builtin_list_json():
    result = runner.invoke(app, ["builtin-list", "--format", "json"])
    assert result.exit_code == 0
    names = {entry["name"] for entry in json.loads(result.stdout)}
    assert {"unknot", "trefoil", "paperK", "paperKhat"} <= names


def test_builtin_list_notes():
    plain = json.loads(runner.invoke(app, ["builtin-list", "--format", "json"]).stdout)
    assert all("notes" not in entry for entry in plain)
    result = runner.invoke(app, ["builtin-list", "--notes", "--format", "json"])
    assert result.exit_code == 0
    entries = {entry["name"]: entry for entry in json.loads(result.stdout)}
    assert "Z/2" in entries["paperK"]["notes"]
    assert "Z/3" in entries["paperKhat"]["notes"]


def test_verify_quick(monkeypatch):
    # keep stdout pure JSON
    monkeypatch.setattr(settings, "log_level", "ERROR")
    result = runner.invoke(app, ["verify", "--quick", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert all(check["passed"] for check in payload["checks"])
    assert len(payload["state_sum"]) == 4
    statuses = {(row["variant"], row["r"]): row["status"] for row in payload["state_sum"]}
    assert statuses == {("K", 3): "matches", ("Khat", 3): "matches", ("K", 4): "pinned", ("Khat", 4): "pinned"}
