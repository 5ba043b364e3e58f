import contextlib
import io
import json

import pytest
from hypothesis import given, settings

from tests.constants import (
    CLI_CASES,
    MGIU_E1,
    MGIU_E2,
    MGIU_ENV,
    MGIU_RESULT,
    REFL_THEORY,
    UNIFY_GOLDEN,
    UNIFY_SCRIPT,
)
from tests.helpers import e, exprs, idempotent_envs, s
from unisynth.cli import run, selftest
from unisynth.subst import mutually_general, parse_subst, print_subst
from unisynth.term import parse_expr, print_expr


@pytest.fixture(scope="module")
def program_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("programs") / "unify.sexp"
    with open(UNIFY_GOLDEN, "r") as f:
        path.write_text(f.read())
    return str(path)


def stdout_of(argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        status = run(argv)
    return status, out.getvalue()


def test_unify(capsys):
    assert run(["unify", "(X . b)", "(a . Y)"]) == 0
    assert capsys.readouterr().out == "{X -> a, Y -> b}\n"


def test_unify_failure_is_negative(capsys):
    assert run(["unify", "X", "(X . a)"]) == 1
    assert capsys.readouterr().out == "bot\n"


def test_unify_json(capsys):
    assert run(["unify", "--json", "--env", "{X -> Y}", "Y", "Z"]) == 0
    assert json.loads(capsys.readouterr().out) == {"result": "{X -> Z, Y -> Z}"}


def test_unify_env_without_spaces(capsys):
    assert run(["unify", "--env", "{X->Y}", "Y", "Z"]) == 0
    assert capsys.readouterr().out == "{X -> Z, Y -> Z}\n"
    assert run(["check-mgiu", "--env", "{X->Y}", "Y", "Z", "{X->Z,Y->Z}"]) == 0


def test_unify_errors(capsys):
    assert run(["unify", "(a", "b"]) == 2
    assert run(["unify", "--env", "{X -> (X . a)}", "--fuel", "20", "X", "Y"]) == 3
    assert "error" in capsys.readouterr().err


def test_usage_errors():
    assert run([]) == 2
    assert run(["unify"]) == 2
    assert run(["frobnicate"]) == 2


def test_check_mgiu(capsys):
    assert run(["check-mgiu", "--env", "{X -> Y}", "Y", "Z", "{X -> Z, Y -> Z}"]) == 0
    assert capsys.readouterr().out == "unifier_ok=true extension_ok=true reduce_ok=true most_general_ok=true\n"
    assert run(["check-mgiu", "--env", "{X -> Y}", "Y", "Z", "{Y -> Z}"]) == 1
    assert "extension_ok=false" in capsys.readouterr().out


def test_replay(capsys, tmp_path):
    target = tmp_path / "unify.sexp"
    with open(UNIFY_GOLDEN, "r") as f:
        golden = f.read().strip()
    assert run(["replay", UNIFY_SCRIPT, "--emit", str(target)]) == 0
    assert capsys.readouterr().out.strip() == golden
    assert target.read_text() == golden + "\n"


def test_replay_errors(tmp_path):
    bad = tmp_path / "bad.derivation"
    bad.write_text("frobnicate\n")
    assert run(["replay", str(bad), "--theory", REFL_THEORY]) == 2
    failing = tmp_path / "failing.derivation"
    failing.write_text("assert missing\nextract\n")
    assert run(["replay", str(failing), "--theory", REFL_THEORY]) == 3
    assert run(["replay", str(tmp_path / "absent.derivation")]) == 3


def test_run(capsys, tmp_path):
    path = tmp_path / "unify.sexp"
    with open(UNIFY_GOLDEN, "r") as f:
        path.write_text(f.read())
    assert run(["run", str(path), "{}", "(X . b)", "(a . Y)", "--check-decrease"]) == 0
    assert capsys.readouterr().out == "{X -> a, Y -> b}\n"
    assert run(["run", str(path), "{}", "a", "b"]) == 1
    assert capsys.readouterr().out == "bot\n"


def test_run_errors(tmp_path):
    path = tmp_path / "first.sexp"
    path.write_text("(define (first e) (left e))\n")
    assert run(["run", str(path), "a"]) == 3
    assert run(["run", str(path), "(a"]) == 2


def test_search(capsys):
    assert run(["search", "--theory", REFL_THEORY]) == 0
    assert capsys.readouterr().out == "(define (refl) (quote nil))\n"
    assert run(["search", "--theory", REFL_THEORY, "--max-rows", "0", "--json"]) == 1
    assert json.loads(capsys.readouterr().out) == {"program": None}


def test_selftest(capsys):
    assert run(["selftest", "--samples", "100", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["pairs"] == 3 * 164 * 164
    assert report["disagreements"] == []
    assert report["failures"] == []


@pytest.mark.parametrize("seed", [0, 1])
def test_selftest_report(seed):
    report = selftest(50, seed, max_size=2)
    assert report["pairs"] == 3 * 32 * 32
    assert report["samples"] == 50
    assert not report["failures"]


def test_run_replace_on_non_variable(tmp_path):
    path = tmp_path / "replace.sexp"
    path.write_text("(define (f e1 e2) (replace e1 e2))\n")
    assert run(["run", str(path), "a", "b"]) == 3
    assert run(["run", str(path), "(X . a)", "b"]) == 3
    assert run(["run", str(path), "X", "b"]) == 0


def test_json_output_parses_back(capsys, program_file):
    assert run(["unify", "--json", "--env", MGIU_ENV, MGIU_E1, MGIU_E2]) == 0
    assert parse_subst(json.loads(capsys.readouterr().out)["result"]) == s(MGIU_RESULT)

    assert run(["check-mgiu", "--json", "--env", MGIU_ENV, MGIU_E1, MGIU_E2, MGIU_RESULT]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["most_general_ok"] and report["extension_ok"]
    assert mutually_general(parse_subst(report["oracle"]), s(MGIU_RESULT))

    assert run(["run", "--json", program_file, "{}", "(X . b)", "(a . Y)"]) == 0
    assert parse_subst(json.loads(capsys.readouterr().out)["result"]) == s("{X -> a, Y -> b}")


def test_run_json_expression_result(capsys, tmp_path):
    path = tmp_path / "first.sexp"
    path.write_text("(define (first e) (left e))\n")
    assert run(["run", "--json", str(path), "((a . X) . b)"]) == 0
    assert parse_expr(json.loads(capsys.readouterr().out)["result"]) == e("(a . X)")


@settings(max_examples=CLI_CASES)
@given(idempotent_envs, exprs, exprs)
def test_unify_command_agrees_with_run(program_file, env, e1, e2):
    texts = [print_subst(env), print_expr(e1), print_expr(e2)]
    unified = stdout_of(["unify", "--env"] + texts)
    interpreted = stdout_of(["run", program_file] + texts)
    assert unified == interpreted
