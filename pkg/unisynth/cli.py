"""Command-line entry point: `python -m unisynth <command> ...`."""
import argparse
import json
import logging
import os
import sys

from unisynth import engine, program, samples
from unisynth.config import ExitStatus, InterpreterDefaults
from unisynth.exceptions import ParseError, ScriptError, SynthesisError
from unisynth.subst import EMPTY, Failure, Subst, is_idempotent, parse_subst, print_subst
from unisynth.term import parse_expr, print_expr
from unisynth.theory import load_theory
from unisynth.unify import agree, mgiu_check, oracle_unify, reference_unify

logger = logging.getLogger(__name__)


def _value_text(value):
    return print_subst(value) if isinstance(value, Subst) else print_expr(value)


def _parse_value(text):
    stripped = text.strip()
    if stripped == "bot" or stripped.startswith("{"):
        return parse_subst(stripped)
    return parse_expr(stripped)


def _emit(args, payload, text):
    print(json.dumps(payload, sort_keys=True) if args.json else text)


def _status(negative):
    return ExitStatus["negative"] if negative else ExitStatus["ok"]


def cmd_unify(args):
    env = parse_subst(args.env) if args.env else EMPTY
    result = reference_unify(env, parse_expr(args.e1), parse_expr(args.e2), fuel=args.fuel)
    _emit(args, {"result": print_subst(result)}, print_subst(result))
    return _status(isinstance(result, Failure))


def cmd_check_mgiu(args):
    env = parse_subst(args.env) if args.env else EMPTY
    report = mgiu_check(env, parse_expr(args.e1), parse_expr(args.e2), parse_subst(args.subst))
    fields = {
        "unifier_ok": report.unifier_ok,
        "extension_ok": report.extension_ok,
        "reduce_ok": report.reduce_ok,
        "most_general_ok": report.most_general_ok,
    }
    text = " ".join("{}={}".format(k, str(v).lower()) for (k, v) in fields.items())
    _emit(args, dict(fields, oracle=print_subst(report.oracle_used)), text)
    return _status(not report.ok)


def _theory_for(args, script_path=None):
    path = args.theory
    if path is None and script_path is not None:
        path = os.path.splitext(script_path)[0] + ".thy"
    if path is None:
        raise ScriptError("no theory file given")
    return load_theory(path)


def _write_program(args, p):
    text = program.emit(p)
    if args.emit:
        with open(args.emit, "w") as f:
            f.write(text + "\n")
    _emit(args, {"program": text}, text)


def cmd_replay(args):
    theory = _theory_for(args, args.script)
    script = engine.load_script(args.script)
    (t, p) = engine.replay(theory, args.spec, script)
    logger.info("replayed %d commands into %d rows", len(script), len(t))
    _write_program(args, p)
    return ExitStatus["ok"]


def cmd_search(args):
    theory = _theory_for(args)
    overrides = {"max_rows": args.max_rows, "seed": args.seed}
    if args.weights:
        config = engine.SearchConfig.from_file(args.weights, **overrides)
    else:
        config = engine.SearchConfig.from_dict({}, **overrides)
    found = engine.search(theory, args.spec, config)
    if found is None:
        _emit(args, {"program": None}, "no program found")
        return ExitStatus["negative"]
    _write_program(args, found[1])
    return ExitStatus["ok"]


def cmd_run(args):
    p = program.load_program(args.program)
    values = [_parse_value(text) for text in args.args]
    result = program.interpret(p, values, fuel=args.fuel, check_decrease=args.check_decrease)
    _emit(args, {"result": _value_text(result)}, _value_text(result))
    return _status(isinstance(result, Failure))


def selftest(sample_count, seed=0, max_size=3):
    """Oracle agreement on the small universe, then the mgiu contract on random triples."""
    universe = samples.small_universe(max_size)
    pairs = 0
    disagreements = []
    for env in samples.SMALL_ENVS:
        for e1 in universe:
            for e2 in universe:
                pairs += 1
                if not agree(reference_unify(env, e1, e2), oracle_unify(env, e1, e2)):
                    disagreements.append((env, e1, e2))
    failures = []
    for (env, e1, e2) in samples.random_triples(sample_count, seed):
        result = reference_unify(env, e1, e2)
        if not mgiu_check(env, e1, e2, result).ok or not is_idempotent(result):
            failures.append((env, e1, e2))
    return {
        "pairs": pairs,
        "disagreements": [" ".join(str(x) for x in case) for case in disagreements],
        "samples": sample_count,
        "failures": [" ".join(str(x) for x in case) for case in failures],
    }


def cmd_selftest(args):
    report = selftest(args.samples, args.seed)
    text = "{} pairs, {} disagreements; {} samples, {} failures".format(
        report["pairs"], len(report["disagreements"]), report["samples"], len(report["failures"])
    )
    _emit(args, report, text)
    return _status(report["disagreements"] or report["failures"])


def build_parser():
    parser = argparse.ArgumentParser(prog="unisynth", description="Unification by deductive synthesis")
    parser.add_argument("-v", "--verbose", action="store_true", help="log every derived row")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name, handler, help):
        sub = commands.add_parser(name, help=help)
        sub.add_argument("--json", action="store_true", help="machine-readable output")
        sub.set_defaults(handler=handler)
        return sub

    sub = command("unify", cmd_unify, "unify two expressions under an environment")
    sub.add_argument("--env", default=None, help="environment substitution, default {}")
    sub.add_argument("--fuel", type=int, default=None)
    sub.add_argument("e1")
    sub.add_argument("e2")

    sub = command("check-mgiu", cmd_check_mgiu, "check a candidate against the mgiu contract")
    sub.add_argument("--env", default=None)
    sub.add_argument("e1")
    sub.add_argument("e2")
    sub.add_argument("subst")

    sub = command("replay", cmd_replay, "replay a derivation script")
    sub.add_argument("script")
    sub.add_argument("--theory", default=None, help="defaults to the script's .thy sibling")
    sub.add_argument("--spec", default=None)
    sub.add_argument("--emit", default=None, help="write the program to this file")

    sub = command("search", cmd_search, "bounded best-first search for a program")
    sub.add_argument("--theory", required=True)
    sub.add_argument("--spec", default=None)
    sub.add_argument("--max-rows", type=int, default=None)
    sub.add_argument("--weights", default=None, help="JSON file of weights and precedence")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--emit", default=None)

    sub = command("run", cmd_run, "interpret a program file")
    sub.add_argument("program")
    sub.add_argument("args", nargs="*")
    sub.add_argument("--fuel", type=int, default=InterpreterDefaults["fuel"])
    sub.add_argument("--check-decrease", action="store_true")

    sub = command("selftest", cmd_selftest, "compare the algorithm against the oracle")
    sub.add_argument("--samples", type=int, default=1000)
    sub.add_argument("--seed", type=int, default=0)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ExitStatus["usage"]
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (ParseError, ScriptError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return ExitStatus["usage"]
    except (SynthesisError, OSError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return ExitStatus["failure"]


def main():
    sys.exit(run())
