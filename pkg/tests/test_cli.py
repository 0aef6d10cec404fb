import io
import json
from pathlib import Path

import pytest

from heatsym import cli

KPRIME = Path(__file__).resolve().parent.parent / "demos" / "elements" / "Kprime.json"


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out=out)
    text = out.getvalue()
    return code, json.loads(text.strip().splitlines()[-1]), text


def test_verify_heat():
    code, data, _ = run("verify", "heat", "x^2+2*t")
    assert code == 0 and data["zero"] is True
    code, data, _ = run("verify", "heat", "x^2")
    assert data == {"zero": False, "residual": "(-2)/(x^2)"}


def test_compose_quarter_turns():
    code, data, _ = run("compose", f"@{KPRIME}", f"@{KPRIME}")
    assert code == 0
    assert data["A"] == [["-1", "0"], ["0", "-1"]]
    assert data["lambda"] == ["0", "0"]
    assert data["sigma"] == {"r": "1", "s": "1", "q": "0"}


def test_gensym_comm():
    code, data, text = run("gensym-comm", "1", "0", "0", "1")
    assert code == 0
    assert data == {"terms": [{"k": 0, "l": 0, "c": "1/2"}]}
    assert text.strip() == '{"terms": [{"c": "1/2", "k": 0, "l": 0}]}'


def test_error_codes():
    assert run("frobnicate")[0] == 2
    assert run("compose", "{not json")[0] == 2
    assert run("apply-point", f"@{KPRIME}", "0", "1", "1")[0] == 3
    assert run("exp", '{"D": 1}', "1")[0] == 3
    assert run("canonicalize", '[{"Pt": 1}, {"K": 1}]')[0] == 2
    assert run("verify", "heat", "exp(exp(x))")[0] in (2, 3)


def test_output_is_deterministic():
    a = run("canonicalize", '[{"Pt": 4, "Gx": "1/2"}]')[2]
    b = run("canonicalize", '[{"Pt": 4, "Gx": "1/2"}]')[2]
    assert a == b
    assert json.loads(a)["label"] == "s1.1"


def test_stdin_payload(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"Gx": 1}'))
    code, data, _ = run("bracket", "-", '{"Px": 1}')
    assert code == 0 and data["I"] == "1/2"


def test_exp_and_float_mode():
    code, data, _ = run("exp", '{"D": 1}', "log:2")
    assert data["A"] == [["2", "0"], ["0", "1/2"]]
    code, data, _ = run("exp", '{"Pt": 1}', "3/2", "--float")
    assert code == 0 and data["lambda"] == [0.0, 0.0]
    assert abs(data["A"][0][1] - 1.5) < 1e-12
    code, data, _ = run("exp", '{"Qp": 1}', "quarter:2")
    assert code == 2


def test_misc_verbs():
    assert run("push", f"@{KPRIME}", '{"D": 1}')[1]["D"] == "-1"
    assert run("hopf-cole", "x^2+2*t")[1] == {"v": "(-4*x)/(x^2 + 2*t)"}
    assert run("burgers-apply", f"@{KPRIME}", "0")[1] == {"v": "(x)/(t)"}
    assert run("verify", "burgers", "x/t")[1]["zero"] is True
    assert run("verify", "determining", f"@{KPRIME}")[1]["zero"] is True
    assert run("gensym-apply", '{"terms": [{"k": 2, "l": 0, "c": "4"}]}', "1")[1]["expr"]
    assert run("classify-1d", '{"Px": 1}', "x^2+2*t")[1]["label"] == "s1.5"
    assert run("classify-1d", '{}', "1")[1] == {"case": "linear-superposition"}
    assert run("ad", '{"D": 1}')[1]["matrix"][0][0] == "-2"
    assert run("inverse", f"@{KPRIME}")[1]["A"] == [["0", "1"], ["-1", "0"]]
    code, data, _ = run("apply-point", '{"A": [[2, 0], [0, "1/2"]]}', "1", "1", "1")
    assert data == {"t": "4", "x": "2", "u": {"r": "1/2", "s": "2", "q": "0"}}
    code, data, _ = run("apply-solution", f"@{KPRIME}", "1")
    assert code == 0 and "{t>0}" in data["expr"]


@pytest.mark.slow
def test_selftest_exit_code():
    code, data, _ = run("selftest", "--parallel", "4")
    assert code == 0 and data["passed"]
    assert len(data["criteria"]) == 10
