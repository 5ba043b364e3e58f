"""Theory files: named lemmas, program specifications and relation declarations.

    relation u-rel (lex (range-vars) (size-first))
    spec unify (th0:subst e1:expr e2:expr) output TH:subst <formula>
    lemma mgi-refl (mgi TH E1 E2 TH)
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from unisynth import logic, sexp, wf
from unisynth.exceptions import IllFormedSpec, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Spec:
    name: str
    # ((param, sort), ...); params appear in rows as zero-argument constants
    params: Tuple
    output: Optional[str]
    condition: logic.Formula
    output_sort: str = logic.ANY

    @property
    def param_names(self):
        return tuple(p for (p, _) in self.params)

    @property
    def constants(self):
        return dict(self.params)


@dataclass
class Theory:
    lemmas: Dict = field(default_factory=dict)
    specs: Dict = field(default_factory=dict)
    relations: Dict = field(default_factory=dict)

    def spec(self, name=None):
        if name is None:
            if len(self.specs) != 1:
                raise IllFormedSpec("theory declares {} specs; name one".format(len(self.specs)))
            return next(iter(self.specs.values()))
        if name not in self.specs:
            raise IllFormedSpec("no spec named {}".format(name))
        return self.specs[name]


def _sorted_name(node):
    text = str(node)
    name, _, sort = text.partition(":")
    sort = sort or logic.ANY
    if sort != logic.ANY and sort not in logic.SORTS:
        sexp.fail("unknown sort {}".format(sort), node)
    return name, sort


def make_spec(name, params, output, condition, output_sort=logic.ANY):
    constants = dict(params)
    if output is not None:
        constants.pop(output, None)
    table = logic.check_sorts(condition, constants)
    if output is not None and output_sort != logic.ANY:
        found = table.get(output, logic.ANY)
        if found not in (logic.ANY, output_sort):
            raise IllFormedSpec("output {} is used as {}, declared {}".format(output, found, output_sort))
        table[output] = output_sort
    condition = logic.annotate_sorts(condition, table)
    return Spec(name, tuple(params), output, condition, output_sort)


def parse_theory(text):
    theory = Theory()
    forms = sexp.parse_forms(text)
    i = 0

    def take(what):
        nonlocal i
        if i >= len(forms):
            raise ParseError("unexpected end of theory, expected {}".format(what))
        node = forms[i]
        i += 1
        return node

    while i < len(forms):
        keyword = take("a declaration")
        if not sexp.is_symbol(keyword):
            sexp.fail("expected lemma, spec or relation", keyword)
        kind = str(keyword)
        if kind == "lemma":
            name = str(take("a lemma name"))
            formula = logic.formula_from_sexp(take("a formula"))
            theory.lemmas[name] = logic.annotate_sorts(formula, logic.check_sorts(formula))
        elif kind == "relation":
            name = str(take("a relation name"))
            theory.relations[name] = wf.relspec_from_sexp(take("a relation spec"))
        elif kind == "spec":
            name = str(take("a spec name"))
            plist = take("a parameter list")
            if not isinstance(plist, sexp.SList) or plist.tail is not None:
                sexp.fail("expected a parameter list", plist)
            params = [_sorted_name(p) for p in plist.items]
            output, output_sort = None, logic.ANY
            node = take("a formula")
            if sexp.is_symbol(node) and str(node) == "output":
                output, output_sort = _sorted_name(take("an output variable"))
                if not logic.is_metavar_name(output):
                    sexp.fail("output must be an uppercase variable", node)
                node = take("a formula")
            constants = dict(params)
            condition = logic.formula_from_sexp(node, constants)
            theory.specs[name] = make_spec(name, params, output, condition, output_sort)
        else:
            sexp.fail("unknown declaration {}".format(kind), keyword)
    logger.debug(
        "loaded theory: %d lemmas, %d specs, %d relations",
        len(theory.lemmas),
        len(theory.specs),
        len(theory.relations),
    )
    return theory


def load_theory(path):
    with open(path, "r") as f:
        return parse_theory(f.read())
