from __future__ import annotations

import json

from cmd_server.cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def test_sij_prints_polynomial(capsys):
    assert main(["sij", "3", "1", "2"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "2*z1 + 2*z2 - 4*z3"


def test_json_output(capsys):
    assert main(["--json", "member", "--points", "0", "1", "2"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["in_qf"] is False and body["witness"] == "S_13"


def test_member_polynomial(capsys):
    assert main(["member", "--poly", "[0, -3, 0, 1]"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "C: True  QC: True  RC: True"


def test_trace_builtin(capsys):
    assert main(["--json", "trace", "--builtin", "gamma3"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["permutation"] == [2, 1, 0]


def test_trace_loop_file(tmp_path, capsys):
    source = tmp_path / "gamma.loop"
    source.write_text("loop n=3 space=RC { [0,1]: X^3 - 3*E(2t)*X }\n", encoding="utf-8")
    assert main(["trace", "--loop", str(source)]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith("permutation [2, 1, 0]")


def test_present_preset(capsys):
    assert main(["--json", "present", "--preset", "rb3"]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert (body["raw_generators"], len(body["generators"])) == (13, 5)


def test_realfib_ev0(capsys):
    assert main(["realfib", "ev0", "X^3 - 3*X"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1/2"


def test_usage_errors_exit_with_two(tmp_path):
    assert main(["sij", "3", "2", "2"]) == EXIT_USAGE
    assert main(["realfib", "counterexample", "--degree", "3"]) == EXIT_USAGE
    assert main(["trace", "--loop", str(tmp_path / "missing.loop")]) == EXIT_USAGE
    assert main(["reproduce", "--only", "no.such.check"]) == EXIT_USAGE


def test_collapsing_trace_exits_with_one(tmp_path):
    source = tmp_path / "collide.loop"
    source.write_text("loop n=2 { [0,1]: X^2 - 1/2 - 1/2*E(2t) }\n", encoding="utf-8")
    assert main(["trace", "--loop", str(source)]) == EXIT_FAILED


def test_reproduce_subset(capsys):
    assert main(["--json", "reproduce", "--only", "sij.m3", "resolvent"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert (report["passed"], report["failed"]) == (2, 0)
    assert [check["name"] for check in report["checks"]] == ["sij.m3", "resolvent"]
