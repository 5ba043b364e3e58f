"""Derivation driver: scripted replay of tableau rules and a bounded best-first search."""
import heapq
import json
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from unisynth import logic, sexp, tableau
from unisynth.config import PrimitiveSymbols, SearchDefaults, SymbolPrecedence, SymbolWeights
from unisynth.exceptions import (
    NoFinalRow,
    ParseError,
    RuleError,
    ScriptError,
    StepFailed,
    SynthesisError,
)
from unisynth.theory import Spec

logger = logging.getLogger(__name__)

ROW_COMMANDS = ("split", "dualize", "orphan")
PAIR_COMMANDS = ("resolve", "eqrepl", "iffrepl")


@dataclass(frozen=True)
class Command:
    op: str
    args: Tuple = ()
    line: int = 0

    def __str__(self):
        return " ".join([self.op] + [_show(a) for a in self.args])


def _show(arg):
    if isinstance(arg, tuple):
        return tableau.format_path(arg)
    return str(arg)


def parse_path(text):
    if text == "0":
        return ()
    try:
        path = tuple(int(part) for part in text.split("."))
    except ValueError:
        raise ScriptError("bad path {!r}".format(text)) from None
    if any(i < 1 for i in path):
        raise ScriptError("path indices start at 1: {!r}".format(text))
    return path


def _row_id(text, line):
    try:
        return int(text)
    except ValueError:
        raise ScriptError("line {}: bad row id {!r}".format(line, text)) from None


def parse_script(text):
    commands = []
    for (number, raw) in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        op, _, rest = line.partition(" ")
        words = rest.split()
        if op == "assert" and len(words) == 1:
            commands.append(Command(op, (words[0],), number))
        elif op == "assume":
            try:
                forms = sexp.parse_forms(rest)
            except ParseError as e:
                raise ScriptError("line {}: {}".format(number, e)) from None
            if len(forms) == 1:
                commands.append(Command(op, (forms[0], None), number))
            elif len(forms) == 3 and sexp.is_symbol(forms[1]) and str(forms[1]) == "output":
                commands.append(Command(op, (forms[0], forms[2]), number))
            else:
                raise ScriptError("line {}: expected assume <formula> [output <term>]".format(number))
        elif op in ROW_COMMANDS and len(words) == 1:
            commands.append(Command(op, (_row_id(words[0], number),), number))
        elif op in PAIR_COMMANDS and len(words) == (4 if op == "resolve" else 5):
            args = (
                _row_id(words[0], number),
                parse_path(words[1]),
                _row_id(words[2], number),
                parse_path(words[3]),
            )
            if op != "resolve":
                if words[4] not in tableau.DIRECTIONS:
                    raise ScriptError("line {}: direction must be ltr or rtl".format(number))
                args += (words[4],)
            commands.append(Command(op, args, number))
        elif op == "induct" and len(words) == 1:
            commands.append(Command(op, (words[0],), number))
        elif op == "extract" and not words:
            commands.append(Command(op, (), number))
        else:
            raise ScriptError("line {}: cannot read {!r}".format(number, line))
    if not commands or commands[-1].op != "extract":
        raise ScriptError("a script must end with extract")
    return commands


def load_script(path):
    with open(path, "r") as f:
        return parse_script(f.read())


def _execute(t, command):
    op, args = command.op, command.args
    if op == "assert":
        return tableau.add_assertion(t, None, name=args[0])
    if op == "assume":
        constants = t.spec.constants
        formula = logic.formula_from_sexp(args[0], constants)
        formula = logic.annotate_sorts(formula, logic.check_sorts(formula, constants))
        output = None if args[1] is None else logic.term_from_sexp(args[1], constants)
        return tableau.add_assertion(t, formula, output, assumption=True)
    if op == "split":
        return tableau.split_row(t, args[0])
    if op == "dualize":
        return tableau.dualize(t, args[0])
    if op == "orphan":
        return tableau.drop_orphan_output(t, args[0])
    if op == "resolve":
        return tableau.resolve(t, *args)
    if op == "eqrepl":
        return tableau.equality_replace(t, *args)
    if op == "iffrepl":
        return tableau.equivalence_replace(t, *args)
    if op == "induct":
        return tableau.insert_induction_hypothesis(t, args[0])
    raise ScriptError("unknown command {}".format(op))


def _resolve_spec(theory, spec):
    if isinstance(spec, Spec):
        return spec
    return theory.spec(spec)


def replay(theory, spec, script):
    """Runs every command of script in order, failing fast, and extracts the program."""
    spec = _resolve_spec(theory, spec)
    t = tableau.init_tableau(spec, theory.lemmas, theory.relations, strict=True)
    program = None
    for (index, command) in enumerate(script, 1):
        if command.op == "extract":
            program = tableau.extract_program(t)
            if program is None:
                raise NoFinalRow("no final row with a primitive output after step {}".format(index))
            continue
        logger.debug("step %d: %s", index, command)
        try:
            _execute(t, command)
        except SynthesisError as e:
            raise StepFailed(index, e) from e
    if program is None:
        raise NoFinalRow("script never extracted a program")
    return t, program


@dataclass
class SearchConfig:
    max_rows: int = SearchDefaults["maxRows"]
    weights: Dict = field(default_factory=lambda: dict(SymbolWeights))
    precedence: List = field(default_factory=lambda: list(SymbolPrecedence))
    seed: int = SearchDefaults["seed"]
    default_weight: int = SearchDefaults["defaultWeight"]

    def __post_init__(self):
        bad = [s for (s, w) in self.weights.items() if not isinstance(w, int) or w < 1]
        if bad or self.default_weight < 1:
            raise ValueError("symbol weights must be positive integers: {}".format(bad))

    @classmethod
    def from_dict(cls, data, **overrides):
        weights = dict(SymbolWeights)
        weights.update(data.get("weights", {}))
        config = dict(
            max_rows=data.get("maxRows", SearchDefaults["maxRows"]),
            weights=weights,
            precedence=list(data.get("precedence", SymbolPrecedence)),
            seed=data.get("seed", SearchDefaults["seed"]),
            default_weight=data.get("defaultWeight", SearchDefaults["defaultWeight"]),
        )
        config.update({k: v for (k, v) in overrides.items() if v is not None})
        return cls(**config)

    @classmethod
    def from_file(cls, path, **overrides):
        with open(path, "r") as f:
            return cls.from_dict(json.load(f), **overrides)

    def weight(self, row):
        total = logic.symbol_weight(row.formula, self.weights, self.default_weight)
        if row.output is not None:
            total += logic.symbol_weight(row.output, self.weights, self.default_weight)
        return total

    def rank(self, symbol):
        if symbol in self.precedence:
            return self.precedence.index(symbol)
        return len(self.precedence)


class _Found(Exception):
    def __init__(self, program):
        self.program = program


class _Full(Exception):
    pass


class _Saturation:
    """Given-row loop: the lightest unprocessed row meets every processed row."""

    def __init__(self, t, config):
        self.t = t
        self.config = config
        self.queue = []
        self.processed = []
        self.seen = set()
        self.selected = {}
        self.tiebreak = random.Random(config.seed) if config.seed else None
        self.reported = 0

    def run(self, lemma_names):
        try:
            self.admit(self.t.rows[0])
            for name in lemma_names:
                self.derive(tableau.add_assertion, self.t, None, name=name)
            while self.queue:
                (_, _, row_id) = heapq.heappop(self.queue)
                given = self.t.row(row_id)
                for other in list(self.processed):
                    self.infer(given, other)
                    self.infer(other, given)
                self.processed.append(given)
        except _Found as found:
            logger.info("search found a program after %d rows", len(self.t))
            return found.program
        except _Full:
            logger.info("search stopped at %d rows", len(self.t))
            return None
        logger.info("search exhausted after %d rows", len(self.t))
        return None

    def derive(self, rule, *args, **kwargs):
        if len(self.t) >= self.config.max_rows:
            raise _Full()
        try:
            made = rule(*args, **kwargs)
        except RuleError:
            return
        for row in made if isinstance(made, list) else [made]:
            self.admit(row)

    def admit(self, row):
        if len(self.t) // 50 > self.reported:
            self.reported = len(self.t) // 50
            logger.info("search: %d rows", len(self.t))
        if row.is_final:
            program = tableau.extract_program(self.t)
            if program is not None:
                raise _Found(program)
        key = (row.polarity, row.formula, row.output)
        if key in self.seen or row.formula == (tableau.TRUE if row.is_assertion else tableau.FALSE):
            return
        self.seen.add(key)
        if not _tests_primitive(row.output):
            return
        if _splittable(row):
            self.derive(tableau.split_row, self.t, row.id)
            return
        if row.is_assertion and row.output is not None and tableau.is_orphan(row):
            self.derive(tableau.drop_orphan_output, self.t, row.id)
            return
        tie = self.tiebreak.random() if self.tiebreak else 0
        heapq.heappush(self.queue, (self.config.weight(row), tie, row.id))

    def select(self, row):
        if row.id not in self.selected:
            paths = logic.literal_paths(row.formula)
            ranks = [self.config.rank(logic.symbol_of(logic.subformula_at(row.formula, p))) for p in paths]
            best = min(ranks, default=None)
            self.selected[row.id] = [p for (p, r) in zip(paths, ranks) if r == best]
        return self.selected[row.id]

    def infer(self, a, b):
        for pa in self.select(a):
            symbol = logic.symbol_of(logic.subformula_at(a.formula, pa))
            for pb in self.select(b):
                if logic.symbol_of(logic.subformula_at(b.formula, pb)) == symbol:
                    self.derive(tableau.resolve, self.t, a.id, pa, b.id, pb)
        if a.id == b.id or not a.is_assertion:
            return
        if isinstance(a.formula, logic.Iff):
            symbol = logic.symbol_of(a.formula.left)
            for pb in self.select(b):
                if logic.symbol_of(logic.subformula_at(b.formula, pb)) == symbol:
                    self.derive(tableau.equivalence_replace, self.t, a.id, (), b.id, pb, "ltr")
        elif isinstance(a.formula, logic.Eq) and not isinstance(a.formula.left, logic.MetaVar):
            symbol = logic.symbol_of(a.formula.left)
            for pb in logic.term_paths(b.formula):
                if logic.symbol_of(logic.subformula_at(b.formula, pb)) == symbol:
                    self.derive(tableau.equality_replace, self.t, a.id, (), b.id, pb, "ltr")


def _splittable(row):
    f = row.formula
    if row.is_goal:
        return isinstance(f, (logic.Implies, logic.Or))
    return isinstance(f, logic.And)


def _tests_primitive(output):
    predicates = set(PrimitiveSymbols["predicates"])
    if output is None:
        return True
    if isinstance(output, logic.Cond) and not logic.predicate_symbols(output.test) <= predicates:
        return False
    return all(_tests_primitive(k) for k in logic.children(output) if isinstance(k, logic.LTerm))


def search(theory, spec, config=None):
    """Best-first saturation; returns (tableau, program) or None when max_rows is reached."""
    config = config or SearchConfig()
    if config.max_rows <= 0:
        return None
    spec = _resolve_spec(theory, spec)
    t = tableau.init_tableau(spec, theory.lemmas, theory.relations)
    program = _Saturation(t, config).run(list(theory.lemmas))
    if program is None:
        return None
    return t, program
