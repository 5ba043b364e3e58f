import itertools
import random

from hypothesis import strategies as st

from tests.constants import CONSTANTS, VARIABLES
from unisynth import logic
from unisynth.samples import random_idempotent_env
from unisynth.subst import BOT, make_subst, parse_subst
from unisynth.tableau import ASSERTION, GOAL, Justification, Tableau, init_tableau
from unisynth.term import Cons, Const, Var, parse_expr
from unisynth.theory import make_spec

variables = st.sampled_from(VARIABLES).map(Var)
constants = st.sampled_from(CONSTANTS).map(Const)
exprs = st.recursive(variables | constants, lambda kids: st.builds(Cons, kids, kids), max_leaves=10)
proper_substs = st.dictionaries(st.sampled_from(VARIABLES), exprs, max_size=3).map(
    lambda m: make_subst(m.items())
)
substs = proper_substs | st.just(BOT)
idempotent_envs = st.integers(min_value=0, max_value=2**32).map(
    lambda seed: random_idempotent_env(random.Random(seed))
)


def e(text):
    return parse_expr(text)


def s(text):
    return parse_subst(text)


def f(text, **constants):
    return logic.parse_formula(text, constants or None)


def t(text, **constants):
    return logic.parse_term(text, constants or None)


def get_tableau(condition, **kwargs):
    """A tableau over a propositional spec; params and output may be overridden."""
    params = () if "params" not in kwargs else kwargs["params"]
    output = "Z" if "output" not in kwargs else kwargs["output"]
    lemmas = {} if "lemmas" not in kwargs else kwargs["lemmas"]
    strict = False if "strict" not in kwargs else kwargs["strict"]
    constants = dict(params)
    spec = make_spec("f", params, output, logic.parse_formula(condition, constants))
    return init_tableau(spec, lemmas, strict=strict)


def empty_tableau(**kwargs):
    """A tableau whose rows are all added by the caller."""
    spec = make_spec("f", (), None, logic.TRUE)
    return Tableau(spec, strict=False if "strict" not in kwargs else kwargs["strict"])


def valuations(atoms):
    """Every truth assignment over the printed atoms."""
    for values in itertools.product([False, True], repeat=len(atoms)):
        yield dict(zip(atoms, values))


def atoms_of(*nodes):
    found = []
    for node in nodes:
        if node is None:
            continue
        for path in logic.literal_paths(node) if isinstance(node, logic.Formula) else []:
            text = logic.print_formula(logic.subformula_at(node, path))
            if text not in found:
                found.append(text)
        if isinstance(node, logic.LTerm):
            for path in logic.term_paths(node):
                sub = logic.subformula_at(node, path)
                if isinstance(sub, logic.Cond):
                    for text in atoms_of(sub.test):
                        if text not in found:
                            found.append(text)
    return found


def row_is_active(row, valuation):
    return logic.evaluate_ground(row.formula, valuation) == row.is_goal


def add_row(tableau, polarity, formula, output=None):
    kind = GOAL if polarity == "G" else ASSERTION
    return tableau.append(kind, f(formula), None if output is None else t(output), Justification("assume"))


def free_output(row):
    """An output variable the formula never mentions stands for any value."""
    return isinstance(row.output, logic.MetaVar) and row.output.name not in logic.metavars_of(row.formula)


def congruent(valuation, equalities):
    for (equality, pairs) in equalities:
        if valuation.get(equality) and any(valuation[a] != valuation[b] for (a, b) in pairs):
            return False
    return True


def unsound_valuations(derived, parents, **kwargs):
    """Valuations under which derived licenses something no parent licenses.

    congruent lists (equality, [(atom, atom), ...]): whenever the equality atom
    holds, each pair of atoms that differ only by its two sides must agree.
    """
    equalities = [] if "congruent" not in kwargs else kwargs["congruent"]
    atoms = atoms_of(derived.formula, derived.output, *[p.formula for p in parents], *[p.output for p in parents])
    for (equality, pairs) in equalities:
        for atom in [equality] + [a for pair in pairs for a in pair]:
            if atom not in atoms:
                atoms.append(atom)
    bad = []
    for valuation in valuations(atoms):
        if not congruent(valuation, equalities) or not row_is_active(derived, valuation):
            continue
        value = None if derived.output is None else logic.evaluate_term_ground(derived.output, valuation)
        justified = False
        for parent in parents:
            if not row_is_active(parent, valuation):
                continue
            if parent.output is None or free_output(parent):
                justified = True
            elif value == logic.evaluate_term_ground(parent.output, valuation):
                justified = True
        if not justified:
            bad.append(valuation)
    return bad
