"""Deductive-tableau rows and the synthesis rules over them.

Every rule appends new rows and never edits existing ones. Formulas and outputs
are simplified propositionally as each row is appended.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from unisynth import logic, program, wf
from unisynth.exceptions import (
    BadPath,
    IllFormedSpec,
    NotInitial,
    NotOrphan,
    NotSplittable,
    NotUnifiable,
    PolarityMismatch,
    RuleError,
    UnknownLemma,
    UnknownRelation,
)
from unisynth.logic import FALSE, TRUE, And, Apply, Atom, Eq, Iff, Implies, MetaVar, Not, Or
from unisynth.term import FreshNames

logger = logging.getLogger(__name__)

ASSERTION = "A"
GOAL = "G"
DIRECTIONS = ("ltr", "rtl")


def format_path(path):
    return ".".join(str(i) for i in path) if path else "0"


@dataclass(frozen=True)
class Justification:
    rule: str
    parents: Tuple = ()
    # (metavar, printed term) pairs of the unifier the rule used
    unifier: Tuple = ()
    args: Tuple = ()

    def __str__(self):
        parts = [self.rule]
        if self.parents:
            parts.append(",".join(str(p) for p in self.parents))
        for arg in self.args:
            if isinstance(arg, tuple):
                parts.append(format_path(arg))
            elif isinstance(arg, str):
                parts.append(arg)
        if self.unifier:
            parts.append("{" + ", ".join("{} <- {}".format(k, v) for (k, v) in self.unifier) + "}")
        return " ".join(parts)


@dataclass(frozen=True)
class Row:
    id: int
    polarity: str
    formula: logic.Formula
    output: Optional[logic.LTerm]
    justification: Justification

    @property
    def is_assertion(self):
        return self.polarity == ASSERTION

    @property
    def is_goal(self):
        return self.polarity == GOAL

    @property
    def is_final(self):
        if self.output is None:
            return False
        return self.formula == (TRUE if self.is_goal else FALSE)

    def metavars(self):
        found = set(logic.metavars_of(self.formula))
        if self.output is not None:
            found |= logic.metavars_of(self.output)
        return found

    def render(self):
        output = "" if self.output is None else logic.print_term(self.output)
        return "#{} [{}] {} | {} | {}".format(
            self.id, self.polarity, logic.print_formula(self.formula), output, self.justification
        )


class Tableau:
    def __init__(self, spec, lemmas=None, relations=None, strict=False):
        self.spec = spec
        self.rows = []
        self.fresh = FreshNames()
        self.lemmas = dict(lemmas or {})
        self.relations = dict(relations or {})
        self.strict = strict
        self.induction = None

    def __len__(self):
        return len(self.rows)

    def row(self, row_id):
        if not 1 <= row_id <= len(self.rows):
            raise BadPath("no row {}".format(row_id))
        return self.rows[row_id - 1]

    def final_rows(self):
        return [r for r in self.rows if r.is_final]

    def append(self, polarity, formula, output, justification):
        row = Row(
            len(self.rows) + 1,
            polarity,
            logic.simplify(formula),
            None if output is None else logic.simplify(output),
            justification,
        )
        self.rows.append(row)
        self.fresh.reserve(row.metavars())
        logger.debug(row.render())
        return row

    def render(self):
        return "\n".join(r.render() for r in self.rows)


def init_tableau(spec, lemmas=None, relations=None, strict=False):
    extra = logic.metavars_of(spec.condition) - ({spec.output} if spec.output else set())
    if extra:
        raise IllFormedSpec(
            "condition of {} mentions free variables {}".format(spec.name, ", ".join(sorted(extra)))
        )
    t = Tableau(spec, lemmas, relations, strict)
    output = None
    if spec.output is not None:
        output = MetaVar(spec.output, spec.output_sort)
    t.append(GOAL, spec.condition, output, Justification("initial"))
    return t


def add_assertion(t, formula, output=None, name=None, assumption=False):
    if t.strict and not assumption:
        if name is not None:
            if name not in t.lemmas:
                raise UnknownLemma("no lemma named {}".format(name))
            formula = t.lemmas[name]
        elif formula not in t.lemmas.values():
            raise UnknownLemma("unregistered formula {}".format(logic.print_formula(formula)))
    elif formula is None:
        if name not in t.lemmas:
            raise UnknownLemma("no lemma named {}".format(name))
        formula = t.lemmas[name]
    rule = "assume" if assumption else "assert"
    args = (name,) if name is not None else ()
    return t.append(ASSERTION, formula, output, Justification(rule, (), (), args))


# Shared machinery for the two-row rules


def _standardize(t, row1, row2):
    """Row2's formula and output with its MetaVars renamed away from row1's."""
    clash = row2.metavars() & row1.metavars()
    formula, output = row2.formula, row2.output
    if clash:
        mapping = {name: t.fresh.fresh(name) for name in sorted(clash)}
        formula = logic.rename(formula, mapping)
        output = None if output is None else logic.rename(output, mapping)
    shared = logic.metavars_of(formula) | (logic.metavars_of(output) if output else set())
    assert not shared & row1.metavars()
    return formula, output


def _effective_polarity(row, formula, path):
    polarity = logic.polarity_at(formula, path)
    if row.is_assertion:
        polarity = frozenset(-p for p in polarity)
    return polarity


def _goal_form(row, formula):
    return formula if row.is_goal else Not(formula)


def _combine(row1, formula1, row2, formula2):
    if row1.is_assertion and row2.is_assertion:
        return ASSERTION, Or((formula1, formula2))
    return GOAL, And((_goal_form(row1, formula1), _goal_form(row2, formula2)))


def _conditional(test, when_true, when_false):
    if when_true is None:
        return when_false
    if when_false is None:
        return when_true
    return logic.Cond(test, when_true, when_false)


def _instantiate(term, u):
    return None if term is None else logic.apply_subst_formula(term, u)


def _printed(u):
    return tuple(sorted((name, logic.print_term(term)) for (name, term) in u.items()))


def _formula_at(formula, path):
    node = logic.subformula_at(formula, path)
    if not isinstance(node, logic.Formula):
        raise BadPath("{} addresses a term, not a formula".format(format_path(path)))
    return node


# Rules


def resolve(t, id1, path1, id2, path2):
    row1, row2 = t.row(id1), t.row(id2)
    formula2, output2 = _standardize(t, row1, row2)
    literal1 = _formula_at(row1.formula, path1)
    literal2 = _formula_at(formula2, path2)
    if logic.POSITIVE not in _effective_polarity(row1, row1.formula, path1):
        raise PolarityMismatch("row {} at {} is never true-side".format(id1, format_path(path1)))
    if logic.NEGATIVE not in _effective_polarity(row2, formula2, path2):
        raise PolarityMismatch("row {} at {} is never false-side".format(id2, format_path(path2)))
    u = logic.term_unify(literal1, literal2)
    if u is None:
        raise NotUnifiable(
            "{} and {} do not unify".format(logic.print_formula(literal1), logic.print_formula(literal2))
        )
    literal = logic.apply_subst_formula(literal1, u)
    new1 = logic.replace_all(logic.apply_subst_formula(row1.formula, u), literal, TRUE)
    new2 = logic.replace_all(logic.apply_subst_formula(formula2, u), literal, FALSE)
    polarity, formula = _combine(row1, new1, row2, new2)
    output = _conditional(literal, _instantiate(row1.output, u), _instantiate(output2, u))
    justification = Justification("resolve", (id1, id2), _printed(u), (tuple(path1), tuple(path2)))
    return t.append(polarity, formula, output, justification)


def _replace(t, rule, kind, id1, path1, id2, path2, direction):
    if direction not in DIRECTIONS:
        raise RuleError("direction must be ltr or rtl, not {}".format(direction))
    row1, row2 = t.row(id1), t.row(id2)
    formula2, output2 = _standardize(t, row1, row2)
    selected = _formula_at(row1.formula, path1)
    if not isinstance(selected, kind):
        raise BadPath("{} of row {} is not {}".format(format_path(path1), id1, kind.__name__))
    source, target = (selected.left, selected.right)
    if direction == "rtl":
        source, target = target, source
    occurrence = logic.subformula_at(formula2, path2)
    if isinstance(occurrence, logic.Formula) != (kind is Iff):
        raise BadPath("{} of row {} is the wrong kind of occurrence".format(format_path(path2), id2))
    u = logic.term_unify(source, occurrence)
    if u is None:
        raise NotUnifiable(
            "{} does not match {}".format(logic.print_node(source), logic.print_node(occurrence))
        )
    instance = logic.apply_subst_formula(selected, u)
    new1 = logic.replace_all(logic.apply_subst_formula(row1.formula, u), instance, FALSE)
    new2 = logic.replace_all(
        logic.apply_subst_formula(formula2, u),
        logic.apply_subst_formula(source, u),
        logic.apply_subst_formula(target, u),
    )
    polarity, formula = _combine(row1, new1, row2, new2)
    output = _conditional(instance, _instantiate(output2, u), _instantiate(row1.output, u))
    justification = Justification(rule, (id1, id2), _printed(u), (tuple(path1), tuple(path2), direction))
    return t.append(polarity, formula, output, justification)


def equality_replace(t, eq_id, eq_path, target_id, target_path, direction="ltr"):
    return _replace(t, "eqrepl", Eq, eq_id, eq_path, target_id, target_path, direction)


def equivalence_replace(t, iff_id, iff_path, target_id, target_path, direction="ltr"):
    return _replace(t, "iffrepl", Iff, iff_id, iff_path, target_id, target_path, direction)


def split_row(t, row_id):
    row = t.row(row_id)
    f = row.formula
    justification = Justification("split", (row_id,))
    if row.is_goal and isinstance(f, Implies):
        pieces = [(ASSERTION, f.antecedent), (GOAL, f.consequent)]
    elif row.is_assertion and isinstance(f, And):
        pieces = [(ASSERTION, item) for item in f.items]
    elif row.is_goal and isinstance(f, Or):
        pieces = [(GOAL, item) for item in f.items]
    else:
        raise NotSplittable("row {} has no splittable shape".format(row_id))
    return [t.append(polarity, piece, row.output, justification) for (polarity, piece) in pieces]


def is_orphan(row):
    return isinstance(row.output, MetaVar) and row.output.name not in logic.metavars_of(row.formula)


def drop_orphan_output(t, row_id):
    row = t.row(row_id)
    if not is_orphan(row):
        raise NotOrphan("output of row {} is not an orphaned variable".format(row_id))
    return t.append(row.polarity, row.formula, None, Justification("orphan", (row_id,)))


def dualize(t, row_id):
    row = t.row(row_id)
    polarity = GOAL if row.is_assertion else ASSERTION
    return t.append(polarity, Not(row.formula), row.output, Justification("dualize", (row_id,)))


def primed(name):
    return name.upper() + "'"


def insert_induction_hypothesis(t, relation):
    if wf.lookup(relation, t.relations) is None:
        raise UnknownRelation("no relation named {}".format(relation))
    if t.induction is not None or any(r.justification.rule != "initial" for r in t.rows):
        raise NotInitial("induction applies only to the initial tableau")
    spec = t.spec
    if not spec.params:
        raise IllFormedSpec("{} has no inputs to induct on".format(spec.name))
    variables = [MetaVar(primed(p), sort) for (p, sort) in spec.params]
    condition = spec.condition
    for ((p, _), v) in zip(spec.params, variables):
        condition = logic.replace_all(condition, Apply(p, ()), v)
    if spec.output is not None:
        call = Apply(spec.name, tuple(variables))
        condition = logic.apply_subst_formula(condition, {spec.output: call})
    if len(variables) == 1:
        lower, upper = variables[0], Apply(spec.params[0][0], ())
    else:
        lower = Apply("tuple", tuple(variables))
        upper = Apply("tuple", tuple(Apply(p, ()) for p in spec.param_names))
    ordered = Atom("wf-ordered", (Apply(relation, ()), lower, upper))
    t.induction = relation
    return t.append(ASSERTION, Implies(ordered, condition), None, Justification("induct", (), (), (relation,)))


def extract_program(t):
    spec = t.spec
    for row in t.final_rows():
        if program.is_primitive(row.output, spec.name, spec.param_names):
            logger.debug("extracting from row %d", row.id)
            return program.ProgramDef(
                spec.name,
                spec.param_names,
                program.simplify(row.output),
                param_sorts=tuple(sort for (_, sort) in spec.params),
                decrease=t.induction,
            )
        logger.debug("final row %d has a non-primitive output", row.id)
    return None


def _rerun(t, row):
    j = row.justification
    if j.rule in ("assert", "assume"):
        name = j.args[0] if j.args else None
        add_assertion(t, row.formula, row.output, name, assumption=j.rule == "assume")
    elif j.rule == "resolve":
        resolve(t, j.parents[0], j.args[0], j.parents[1], j.args[1])
    elif j.rule == "eqrepl":
        equality_replace(t, j.parents[0], j.args[0], j.parents[1], j.args[1], j.args[2])
    elif j.rule == "iffrepl":
        equivalence_replace(t, j.parents[0], j.args[0], j.parents[1], j.args[1], j.args[2])
    elif j.rule == "split":
        split_row(t, j.parents[0])
    elif j.rule == "orphan":
        drop_orphan_output(t, j.parents[0])
    elif j.rule == "dualize":
        dualize(t, j.parents[0])
    elif j.rule == "induct":
        insert_induction_hypothesis(t, j.args[0])
    else:
        raise RuleError("cannot re-run rule {}".format(j.rule))


def recheck(t):
    """Rebuilds t from its justifications; returns the ids of rows that differ."""
    fresh = init_tableau(t.spec, t.lemmas, t.relations, t.strict)
    for row in t.rows:
        if row.id <= len(fresh.rows):
            continue
        _rerun(fresh, row)
    mismatched = [
        row.id
        for (row, again) in zip(t.rows, fresh.rows)
        if (row.polarity, row.formula, row.output, row.justification)
        != (again.polarity, again.formula, again.output, again.justification)
    ]
    if len(fresh.rows) != len(t.rows):
        mismatched.extend(range(min(len(fresh.rows), len(t.rows)) + 1, max(len(fresh.rows), len(t.rows)) + 1))
    return mismatched
