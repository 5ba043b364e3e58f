"""Substitutions over expressions: proper binding maps and the failure substitution."""
from collections import namedtuple
from dataclasses import dataclass
from typing import Tuple

from unisynth import sexp
from unisynth.exceptions import (
    DuplicateVariable,
    ImproperOperand,
    NotAPermutation,
    NotAVariable,
    ParseError,
)
from unisynth.term import (
    BLACK_HOLE,
    Cons,
    Expr,
    FreshNames,
    Var,
    expr_from_sexp,
    is_variable_name,
    print_expr,
    var_order,
    vars_of,
)

Support = namedtuple("Support", ["dom", "range", "vars"])


class Subst:
    __slots__ = ()

    def __str__(self):
        return print_subst(self)


@dataclass(frozen=True)
class Proper(Subst):
    # sorted by variable name, identity bindings removed
    bindings: Tuple = ()

    @property
    def mapping(self):
        return dict(self.bindings)


@dataclass(frozen=True)
class Failure(Subst):
    pass


EMPTY = Proper(())
BOT = Failure()


def is_proper(s):
    return isinstance(s, Proper)


def _canonical(mapping):
    return Proper(tuple(sorted((x, e) for (x, e) in mapping.items() if e != Var(x))))


def make_subst(pairs):
    mapping = {}
    for (name, e) in pairs:
        if not is_variable_name(name):
            raise NotAVariable("{} is not a variable".format(name))
        if name in mapping:
            raise DuplicateVariable("{} is bound twice".format(name))
        mapping[name] = e
    return _canonical(mapping)


def replacement(x, e):
    if isinstance(x, Var):
        name = x.name
    elif isinstance(x, str) and is_variable_name(x):
        name = x
    else:
        raise NotAVariable("{} is not a variable".format(print_expr(x) if isinstance(x, Expr) else x))
    return make_subst([(name, e)])


def apply(e, s):
    if isinstance(s, Failure):
        return BLACK_HOLE
    if not s.bindings:
        return e
    return _apply(e, s.mapping)


def _apply(e, mapping):
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Cons):
        return Cons(_apply(e.left, mapping), _apply(e.right, mapping))
    return e


def compose(s1, s2):
    if isinstance(s1, Failure) or isinstance(s2, Failure):
        return BOT
    m1 = s1.mapping
    m2 = s2.mapping
    composed = {x: _apply(e, m2) for (x, e) in m1.items()}
    for (y, e) in m2.items():
        if y not in m1:
            composed[y] = e
    return _canonical(composed)


def add(s1, s2):
    if isinstance(s1, Failure) or isinstance(s2, Failure):
        raise ImproperOperand("addition is defined only for proper substitutions")
    mapping = s2.mapping
    mapping.update(s1.mapping)
    return _canonical(mapping)


def dom_of(s):
    if isinstance(s, Failure):
        return frozenset()
    return frozenset(x for (x, _) in s.bindings)


def range_of(s):
    if isinstance(s, Failure):
        return frozenset()
    result = frozenset()
    for (_, e) in s.bindings:
        result |= vars_of(e)
    return result


def support(s):
    dom = dom_of(s)
    rng = range_of(s)
    return Support(dom, rng, dom | rng)


def misses(s, e):
    return apply(e, s) == e


def is_idempotent(s):
    if isinstance(s, Failure):
        return True
    return not (dom_of(s) & range_of(s))


def more_general(s1, s2):
    return compose(s1, s2) == s2


def mutually_general(s1, s2):
    return more_general(s1, s2) and more_general(s2, s1)


def weakly_more_general(s1, s2):
    """A witness d with compose(s1, d) = s2, or None.

    Solved as one simultaneous matching problem: every variable bound or
    introduced by s1, together with the domain of s2, must map through s1 and d
    to its image under s2.
    """
    if isinstance(s2, Failure):
        return BOT
    if isinstance(s1, Failure):
        return None
    variables = dom_of(s1) | dom_of(s2) | range_of(s1)
    witness = {}
    for x in sorted(variables):
        if not _match(apply(Var(x), s1), apply(Var(x), s2), witness):
            return None
    delta = _canonical(witness)
    if compose(s1, delta) != s2:
        return None
    return delta


def _match(pattern, target, witness):
    if isinstance(pattern, Var):
        bound = witness.get(pattern.name)
        if bound is None:
            witness[pattern.name] = target
            return True
        return bound == target
    if isinstance(pattern, Cons):
        if not isinstance(target, Cons):
            return False
        return _match(pattern.left, target.left, witness) and _match(
            pattern.right, target.right, witness
        )
    return pattern == target


def standardize_apart(e1, e2, supply=None):
    """Renames every variable of e2 to a fresh `name#k` absent from e1 and e2.

    Formulas and terms are renamed on their MetaVars. The permutation is a
    substitution between variable names in both cases.
    """
    # logic imports this module
    from unisynth import logic

    def names_of(node):
        return vars_of(node) if isinstance(node, Expr) else logic.metavars_of(node)

    if supply is None:
        supply = FreshNames()
    supply.reserve(names_of(e1) | names_of(e2))
    order = var_order(e2) if isinstance(e2, Expr) else logic.metavar_order(e2)
    renaming = {x: supply.fresh(x) for x in order}
    permutation = _canonical({x: Var(y) for (x, y) in renaming.items()})
    if isinstance(e2, Expr):
        return apply(e2, permutation), permutation
    return logic.rename(e2, renaming), permutation


def is_permutation(s):
    if isinstance(s, Failure):
        return False
    images = [e for (_, e) in s.bindings]
    if not all(isinstance(e, Var) for e in images):
        return False
    names = [e.name for e in images]
    return len(set(names)) == len(names) and set(names) == set(dom_of(s))


def permutation_inverse(s):
    if not is_permutation(s):
        raise NotAPermutation("{} is not a permutation".format(print_subst(s)))
    return _canonical({e.name: Var(x) for (x, e) in s.bindings})


def subst_equal(s1, s2):
    return s1 == s2


def subst_from_sexp(node):
    if sexp.is_symbol(node):
        if str(node) == "bot":
            return BOT
        sexp.fail("expected a substitution, found {!r}".format(str(node)), node)
    if not isinstance(node, sexp.SBraces):
        sexp.fail("expected a substitution literal", node)
    pairs = []
    for (name, value) in node.bindings:
        if not is_variable_name(str(name)):
            sexp.fail("{} is not a variable".format(str(name)), name)
        pairs.append((str(name), expr_from_sexp(value)))
    return make_subst(pairs)


def parse_subst(text):
    node = sexp.parse_one(text, "substitution")
    try:
        return subst_from_sexp(node)
    except DuplicateVariable as e:
        raise ParseError(str(e)) from None


def print_subst(s):
    if isinstance(s, Failure):
        return "bot"
    return "{" + ", ".join("{} -> {}".format(x, print_expr(e)) for (x, e) in s.bindings) + "}"
