import json
import os
import subprocess
import sys

import pytest

from wsmc import cli

from conftest import FIXTURE_COMMANDS, fixture_argv, model_path


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_validate_ok(capsys):
    code, out = run_cli(capsys, "validate", model_path("abp.lcs"))
    assert code == 0 and out == "ok\n"


def test_validate_reports_deadlock(tmp_path, capsys):
    bad = tmp_path / "bad.lcs"
    bad.write_text("alphabet: a\nchannels: c\nlocations: p q\n"
                   "rule p -> q : c!a\nrule q -> p : c?a\n")
    code, out = run_cli(capsys, "validate", str(bad))
    assert code == 1
    assert "q" in out and "deadlock" in out


def test_validate_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.lcs"
    bad.write_text("alphabet: a\nwhatever\n")
    code = cli.main(["validate", str(bad)])
    err = capsys.readouterr().err
    assert code == 2
    assert "bad.lcs:2" in err


def test_eval_unguarded_exits_2(capsys):
    code = cli.main(["eval", model_path("flags.lcs"), "-f", "mu X. X"])
    err = capsys.readouterr().err
    assert code == 2
    assert "unguarded binder" in err and "X" in err


def test_eval_prints_region_and_sizes(capsys):
    code, out = run_cli(capsys, "eval", model_path("flags.lcs"),
                        "-f", "mu X. GOAL | pre(up(X))")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "(p) + (q) + (r) + (s)"
    assert lines[1].startswith("sizes:")


def test_eval_formula_file_and_out(tmp_path, capsys):
    formula = tmp_path / "f.mu"
    formula.write_text("mu X. GOAL | pre(up(X))\n")
    out_file = tmp_path / "region.txt"
    code, out = run_cli(capsys, "eval", model_path("flags.lcs"),
                        "-F", str(formula), "--out", str(out_file))
    assert code == 0
    assert out_file.read_text() == "(p) + (q) + (r) + (s)\n"


def test_eval_open_formula_rejected(capsys):
    code = cli.main(["eval", model_path("flags.lcs"), "-f", "up(Z)"])
    assert code == 2
    assert "Z" in capsys.readouterr().err


def test_check_member_yes_no(capsys):
    base = ["check", model_path("token_game.lcs"), "game-reach",
            "--player", "B", "--target", "GOAL"]
    code, out = run_cli(capsys, *base, "--member", "b1 : t")
    assert (code, out) == (0, "yes\n")
    code, out = run_cli(capsys, *base, "--member", "a0 : ")
    assert (code, out) == (1, "no\n")


def test_check_member_matches_bounded_oracle(capsys):
    # criterion: prestar membership agrees with explicit bounded search
    code, out = run_cli(capsys, "oracle", "reach", model_path("token_game.lcs"),
                        "--from", "a1 : t", "--target", "GOAL", "--depth", "4")
    assert code == 0 and out.strip() == "reachable"
    code, out = run_cli(capsys, "check", model_path("token_game.lcs"),
                        "prestar", "--target", "GOAL", "--member", "a1 : t")
    assert (code, out) == (0, "yes\n")


def test_check_refusals_exit_2(capsys):
    for prop in ("forall-eventually", "exists-recurrent", "asym-reach-A"):
        code = cli.main(["check", model_path("token_game.lcs"), prop,
                         "--target", "GOAL"])
        err = capsys.readouterr().err
        assert code == 2
        assert "refusing %s" % prop in err


def test_check_game_on_non_game_model_exits_2(capsys):
    code = cli.main(["check", model_path("abp.lcs"), "game-reach",
                     "--player", "A", "--target", "GOAL"])
    assert code == 2


def test_check_json_output(capsys):
    code, out = run_cli(capsys, "check", model_path("token_game.lcs"),
                        "game-reach", "--player", "B", "--target", "GOAL",
                        "--member", "b1 : t", "--json")
    assert code == 0
    assert json.loads(out) == {"verdict": "yes", "region": None}
    code, out = run_cli(capsys, "check", model_path("flags.lcs"), "ctl",
                        "--formula", "EX GOAL", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["region"] == "(q) + (s)"


def test_missing_required_argument(capsys):
    code = cli.main(["check", model_path("flags.lcs"), "prestar"])
    assert code == 2
    assert "target" in capsys.readouterr().err


def run_fixture(command, seed):
    env = dict(os.environ)
    env["PYTHONHASHSEED"] = seed
    return subprocess.run(
        [sys.executable, "-m", "wsmc.cli"] + fixture_argv(command),
        capture_output=True, env=env)


@pytest.mark.parametrize("command", FIXTURE_COMMANDS,
                         ids=lambda c: " ".join(c)[:50])
def test_fixture_outputs_are_deterministic(command):
    first = run_fixture(command, "0")
    second = run_fixture(command, "31337")
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode
