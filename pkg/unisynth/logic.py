"""Sorted first-order formulas and terms over the expression/substitution signature.

There are no quantifiers: uppercase MetaVars in a row are read the way the row's
polarity dictates, and program inputs enter rows as sorted zero-argument
constants.
"""
from dataclasses import dataclass, field
from typing import Tuple

from unisynth import sexp
from unisynth.exceptions import BadPath, SortError
from unisynth.subst import BOT, Subst, print_subst, subst_from_sexp
from unisynth.term import BLACK_HOLE, NIL, Expr, expr_from_sexp, print_expr

ANY = "any"
EXPR = "expr"
SUBST = "subst"
VARSET = "varset"
NAT = "nat"
TRIPLE = "triple"
RELATION = "relation"
SORTS = (EXPR, SUBST, VARSET, NAT, TRIPLE, RELATION)

FUNCTIONS = {
    "cons": ((EXPR, EXPR), EXPR),
    "left": ((EXPR,), EXPR),
    "right": ((EXPR,), EXPR),
    "apply": ((EXPR, SUBST), EXPR),
    "compose": ((SUBST, SUBST), SUBST),
    "replace": ((EXPR, EXPR), SUBST),
    "empty-subst": ((), SUBST),
    "vars": ((EXPR,), VARSET),
    "dom": ((SUBST,), VARSET),
    "range": ((SUBST,), VARSET),
    "size": ((EXPR,), NAT),
    "union": ((VARSET, VARSET), VARSET),
}

PREDICATES = {
    "is-atom": (EXPR,),
    "is-const": (EXPR,),
    "is-var": (EXPR,),
    "is-proper": (SUBST,),
    "occurs-proper": (EXPR, EXPR),
    "occurs-refl": (EXPR, EXPR),
    "misses": (SUBST, EXPR),
    "idem": (SUBST,),
    "more-genid": (SUBST, SUBST),
    "mgi": (SUBST, EXPR, EXPR, SUBST),
    "mgiu": (SUBST, EXPR, EXPR, SUBST),
    "reduce": (SUBST, VARSET, SUBST),
    "subset": (VARSET, VARSET),
    "proper-subset": (VARSET, VARSET),
    "size-lt": (NAT, NAT),
    "wf-ordered": (RELATION, ANY, ANY),
}

POSITIVE = 1
NEGATIVE = -1
BOTH = frozenset([POSITIVE, NEGATIVE])


class Node:
    __slots__ = ()

    def __str__(self):
        return print_node(self)


class LTerm(Node):
    __slots__ = ()


class Formula(Node):
    __slots__ = ()


@dataclass(frozen=True)
class MetaVar(LTerm):
    name: str
    sort: str = field(default=ANY, compare=False)


@dataclass(frozen=True)
class Literal(LTerm):
    value: object


@dataclass(frozen=True)
class Apply(LTerm):
    fn: str
    args: Tuple = ()


@dataclass(frozen=True)
class Cond(LTerm):
    test: Formula
    then: LTerm
    else_: LTerm


@dataclass(frozen=True)
class Truth(Formula):
    value: bool


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: Tuple = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    items: Tuple


@dataclass(frozen=True)
class Or(Formula):
    items: Tuple


@dataclass(frozen=True)
class Implies(Formula):
    antecedent: Formula
    consequent: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eq(Formula):
    left: LTerm
    right: LTerm


TRUE = Truth(True)
FALSE = Truth(False)


def constant(name):
    return Apply(name, ())


def is_metavar_name(name):
    return bool(name) and name[0].isupper()


# Generic tree view shared by paths, substitution and unification


def children(node):
    if isinstance(node, (Apply, Atom)):
        return node.args
    if isinstance(node, (Eq, Iff)):
        return (node.left, node.right)
    if isinstance(node, Not):
        return (node.body,)
    if isinstance(node, (And, Or)):
        return node.items
    if isinstance(node, Implies):
        return (node.antecedent, node.consequent)
    if isinstance(node, Cond):
        return (node.test, node.then, node.else_)
    return ()


def rebuild(node, kids):
    kids = tuple(kids)
    if isinstance(node, Apply):
        return Apply(node.fn, kids)
    if isinstance(node, Atom):
        return Atom(node.pred, kids)
    if isinstance(node, Eq):
        return Eq(*kids)
    if isinstance(node, Iff):
        return Iff(*kids)
    if isinstance(node, Not):
        return Not(kids[0])
    if isinstance(node, And):
        return And(kids)
    if isinstance(node, Or):
        return Or(kids)
    if isinstance(node, Implies):
        return Implies(*kids)
    if isinstance(node, Cond):
        return Cond(*kids)
    return node


def _head(node):
    if isinstance(node, Apply):
        return ("apply", node.fn, len(node.args))
    if isinstance(node, Atom):
        return ("atom", node.pred, len(node.args))
    if isinstance(node, (And, Or)):
        return (type(node).__name__, len(node.items))
    if isinstance(node, (Literal, Truth)):
        return (type(node).__name__, node.value)
    return (type(node).__name__,)


# Parsing


def formula_from_sexp(node, constants=None):
    if sexp.is_symbol(node):
        name = str(node)
        if name == "true":
            return TRUE
        if name == "false":
            return FALSE
        return Atom(name, ())
    if not isinstance(node, sexp.SList) or node.tail is not None or not node.items:
        sexp.fail("expected a formula", node)
    head = node.items[0]
    if not sexp.is_symbol(head):
        sexp.fail("formula head must be a symbol", head)
    name = str(head)
    args = node.items[1:]
    if name in ("and", "or"):
        items = tuple(formula_from_sexp(a, constants) for a in args)
        return And(items) if name == "and" else Or(items)
    if name == "not":
        _arity(node, args, 1)
        return Not(formula_from_sexp(args[0], constants))
    if name in ("implies", "iff"):
        _arity(node, args, 2)
        first, second = (formula_from_sexp(a, constants) for a in args)
        return Implies(first, second) if name == "implies" else Iff(first, second)
    if name == "=":
        _arity(node, args, 2)
        return Eq(term_from_sexp(args[0], constants), term_from_sexp(args[1], constants))
    return Atom(name, tuple(term_from_sexp(a, constants) for a in args))


def term_from_sexp(node, constants=None):
    if sexp.is_symbol(node):
        name = str(node)
        if is_metavar_name(name):
            return MetaVar(name)
        if name == "bot":
            return Literal(BOT)
        if name == "nil":
            return Literal(NIL)
        if name == "*":
            return Literal(BLACK_HOLE)
        return Apply(name, ())
    if isinstance(node, sexp.SBraces):
        return Literal(subst_from_sexp(node))
    if node.tail is not None or not node.items:
        sexp.fail("expected a term", node)
    head = node.items[0]
    if not sexp.is_symbol(head):
        sexp.fail("term head must be a symbol", head)
    name = str(head)
    args = node.items[1:]
    if name == "quote":
        _arity(node, args, 1)
        return Literal(expr_from_sexp(args[0]))
    if name == "if":
        _arity(node, args, 3)
        return Cond(
            formula_from_sexp(args[0], constants),
            term_from_sexp(args[1], constants),
            term_from_sexp(args[2], constants),
        )
    return Apply(name, tuple(term_from_sexp(a, constants) for a in args))


def _arity(node, args, n):
    if len(args) != n:
        sexp.fail("expected {} argument(s), found {}".format(n, len(args)), node)


def parse_formula(text, constants=None):
    f = formula_from_sexp(sexp.parse_one(text, "formula"), constants)
    return annotate_sorts(f, check_sorts(f, constants))


def parse_term(text, constants=None):
    t = term_from_sexp(sexp.parse_one(text, "term"), constants)
    return annotate_sorts(t, check_sorts(t, constants))


# Printing


def print_node(node):
    if isinstance(node, MetaVar):
        return node.name
    if isinstance(node, Literal):
        if isinstance(node.value, Subst):
            return print_subst(node.value)
        return "(quote {})".format(print_expr(node.value))
    if isinstance(node, Apply):
        if not node.args:
            return node.fn
        return "({} {})".format(node.fn, " ".join(print_node(a) for a in node.args))
    if isinstance(node, Cond):
        return "(if {} {} {})".format(
            print_node(node.test), print_node(node.then), print_node(node.else_)
        )
    if isinstance(node, Truth):
        return "true" if node.value else "false"
    if isinstance(node, Atom):
        if not node.args:
            return node.pred
        return "({} {})".format(node.pred, " ".join(print_node(a) for a in node.args))
    if isinstance(node, Eq):
        return "(= {} {})".format(print_node(node.left), print_node(node.right))
    if isinstance(node, Not):
        return "(not {})".format(print_node(node.body))
    if isinstance(node, (And, Or)):
        keyword = "and" if isinstance(node, And) else "or"
        return "({})".format(" ".join([keyword] + [print_node(i) for i in node.items]))
    if isinstance(node, Implies):
        return "(implies {} {})".format(print_node(node.antecedent), print_node(node.consequent))
    if isinstance(node, Iff):
        return "(iff {} {})".format(print_node(node.left), print_node(node.right))
    raise TypeError("not a formula or term: {!r}".format(node))


print_formula = print_node
print_term = print_node


# Sorts


def _meet(a, b, node):
    if a == ANY:
        return b
    if b == ANY or a == b:
        return a
    raise SortError("expected {}, found {} in {}".format(b, a, print_node(node)))


def check_sorts(node, constants=None):
    """Infers MetaVar sorts; raises SortError naming the offending subterm."""
    table = {}
    constants = constants or {}
    if isinstance(node, Formula):
        _sort_formula(node, table, constants)
    else:
        _sort_term(node, ANY, table, constants)
    return table


def _sort_formula(f, table, constants):
    if isinstance(f, Atom):
        expected = PREDICATES.get(f.pred)
        if expected is not None and len(expected) != len(f.args):
            raise SortError("{} takes {} arguments".format(f.pred, len(expected)))
        for (i, arg) in enumerate(f.args):
            _sort_term(arg, expected[i] if expected else ANY, table, constants)
    elif isinstance(f, Eq):
        left = _sort_term(f.left, ANY, table, constants)
        _sort_term(f.right, left, table, constants)
        if left == ANY:
            _sort_term(f.left, _sort_term(f.right, ANY, table, constants), table, constants)
    else:
        for kid in children(f):
            _sort_formula(kid, table, constants)


def _sort_term(t, expected, table, constants):
    if isinstance(t, MetaVar):
        sort = _meet(table.get(t.name, t.sort), expected, t)
        table[t.name] = sort
        return sort
    if isinstance(t, Literal):
        return _meet(EXPR if isinstance(t.value, Expr) else SUBST, expected, t)
    if isinstance(t, Cond):
        _sort_formula(t.test, table, constants)
        sort = _sort_term(t.then, expected, table, constants)
        return _sort_term(t.else_, sort, table, constants)
    if t.fn == "tuple":
        sorts = [_sort_term(a, ANY, table, constants) for a in t.args]
        if ANY in sorts:
            return expected
        return _meet(EXPR if all(s == EXPR for s in sorts) else TRIPLE, expected, t)
    if t.fn in FUNCTIONS:
        (arg_sorts, result) = FUNCTIONS[t.fn]
        if len(arg_sorts) != len(t.args):
            raise SortError("{} takes {} arguments".format(t.fn, len(arg_sorts)))
        for (arg, sort) in zip(t.args, arg_sorts):
            _sort_term(arg, sort, table, constants)
        return _meet(result, expected, t)
    for arg in t.args:
        _sort_term(arg, ANY, table, constants)
    if not t.args and t.fn in constants:
        return _meet(constants[t.fn], expected, t)
    return expected


def annotate_sorts(node, table):
    if not table:
        return node
    return map_metavars(node, lambda v: MetaVar(v.name, table.get(v.name, v.sort)))


# Substitution, renaming and unification over MetaVars


def map_metavars(node, fn):
    if isinstance(node, MetaVar):
        return fn(node)
    kids = children(node)
    if not kids:
        return node
    return rebuild(node, (map_metavars(k, fn) for k in kids))


def sort_of(t):
    """The sort a term denotes, or ANY when it cannot be told without context."""
    if isinstance(t, MetaVar):
        return t.sort
    if isinstance(t, Literal):
        return EXPR if isinstance(t.value, Expr) else SUBST
    if isinstance(t, Cond):
        then = sort_of(t.then)
        return then if then != ANY else sort_of(t.else_)
    if isinstance(t, Apply) and t.fn in FUNCTIONS:
        return FUNCTIONS[t.fn][1]
    return ANY


def sorts_agree(v, t):
    sort = sort_of(t)
    return v.sort == ANY or sort == ANY or sort == v.sort


def apply_subst_formula(node, s):
    """Replaces MetaVars by their bindings in s; a binding of the wrong sort is a SortError."""
    if not s:
        return node

    def substitute(v):
        if v.name not in s:
            return v
        t = s[v.name]
        if not sorts_agree(v, t):
            raise SortError(
                "{} of sort {} cannot stand for {} of sort {}".format(print_node(t), sort_of(t), v.name, v.sort)
            )
        return t

    return map_metavars(node, substitute)


def compose_meta(u, v):
    """The meta-substitution equivalent to applying u and then v."""
    result = {name: apply_subst_formula(t, v) for (name, t) in u.items()}
    for (name, t) in v.items():
        result.setdefault(name, t)
    return {name: t for (name, t) in result.items() if t != MetaVar(name)}


def metavar_order(node):
    seen = []
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, MetaVar):
            if current.name not in seen:
                seen.append(current.name)
        else:
            stack.extend(reversed(children(current)))
    return seen


def metavars_of(node):
    return frozenset(metavar_order(node))


def rename(node, mapping):
    return map_metavars(node, lambda v: MetaVar(mapping[v.name], v.sort) if v.name in mapping else v)


def term_unify(a, b):
    """Most-general unifier of two formulas or terms, with occurs check, or None."""
    s = {}
    stack = [(a, b)]
    while stack:
        (x, y) = stack.pop()
        x = apply_subst_formula(x, s)
        y = apply_subst_formula(y, s)
        if x == y:
            continue
        if not isinstance(x, MetaVar) and isinstance(y, MetaVar):
            x, y = y, x
        if isinstance(x, MetaVar):
            if not isinstance(y, LTerm) or x.name in metavars_of(y) or not sorts_agree(x, y):
                return None
            single = {x.name: y}
            s = {name: apply_subst_formula(t, single) for (name, t) in s.items()}
            s[x.name] = y
            continue
        if _head(x) != _head(y):
            return None
        stack.extend(reversed(list(zip(children(x), children(y)))))
    return s


# Propositional simplification


def simplify(node):
    if isinstance(node, LTerm):
        return _simplify_term(node)
    if isinstance(node, Truth):
        return node
    if isinstance(node, (Atom, Eq)):
        return rebuild(node, (_simplify_term(k) for k in children(node)))
    if isinstance(node, Not):
        return _negate(simplify(node.body))
    if isinstance(node, (And, Or)):
        return _junction(type(node), [simplify(i) for i in node.items])
    if isinstance(node, Implies):
        return _implies(simplify(node.antecedent), simplify(node.consequent))
    if isinstance(node, Iff):
        left, right = simplify(node.left), simplify(node.right)
        if left == TRUE:
            return right
        if right == TRUE:
            return left
        if left == FALSE:
            return _negate(right)
        if right == FALSE:
            return _negate(left)
        return Iff(left, right)
    raise TypeError("not a formula or term: {!r}".format(node))


def _negate(body):
    # body is already simplified
    if isinstance(body, Truth):
        return FALSE if body.value else TRUE
    if isinstance(body, Not):
        return body.body
    if isinstance(body, Implies):
        return _junction(And, [body.antecedent, _negate(body.consequent)])
    return Not(body)


def _implies(antecedent, consequent):
    if antecedent == TRUE:
        return consequent
    if antecedent == FALSE or consequent == TRUE:
        return TRUE
    if consequent == FALSE:
        return _negate(antecedent)
    return Implies(antecedent, consequent)


def _junction(kind, items):
    unit, absorbing = (TRUE, FALSE) if kind is And else (FALSE, TRUE)
    flat = []
    for item in items:
        parts = item.items if isinstance(item, kind) else (item,)
        for part in parts:
            if part == absorbing:
                return absorbing
            if part != unit and part not in flat:
                flat.append(part)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return kind(tuple(flat))


def _simplify_term(t):
    if isinstance(t, Cond):
        test = simplify(t.test)
        then = _simplify_term(t.then)
        else_ = _simplify_term(t.else_)
        if test == TRUE or then == else_:
            return then
        if test == FALSE:
            return else_
        return Cond(test, then, else_)
    if isinstance(t, Apply) and t.args:
        return Apply(t.fn, tuple(_simplify_term(a) for a in t.args))
    return t


def normalize(f, expand_implies=False):
    """Negation pushed inward, connectives flattened; Iff kept intact."""
    if isinstance(f, Not):
        body = f.body
        if isinstance(body, Not):
            return normalize(body.body, expand_implies)
        if isinstance(body, Truth):
            return _negate(body)
        if isinstance(body, And):
            return normalize(Or(tuple(Not(i) for i in body.items)), expand_implies)
        if isinstance(body, Or):
            return normalize(And(tuple(Not(i) for i in body.items)), expand_implies)
        if isinstance(body, Implies):
            return normalize(And((body.antecedent, Not(body.consequent))), expand_implies)
        return Not(normalize(body, expand_implies))
    if isinstance(f, (And, Or)):
        return _junction(type(f), [normalize(i, expand_implies) for i in f.items])
    if isinstance(f, Implies):
        if expand_implies:
            return normalize(Or((Not(f.antecedent), f.consequent)), expand_implies)
        return _implies(normalize(f.antecedent), normalize(f.consequent))
    if isinstance(f, Iff):
        return simplify(Iff(normalize(f.left, expand_implies), normalize(f.right, expand_implies)))
    return simplify(f)


# Paths and occurrences


def subformula_at(node, path):
    for index in path:
        kids = children(node)
        if not 1 <= index <= len(kids):
            raise BadPath("no child {} in {}".format(index, print_node(node)))
        node = kids[index - 1]
    return node


def replace_at(node, path, new):
    if not path:
        return new
    kids = list(children(node))
    index = path[0]
    if not 1 <= index <= len(kids):
        raise BadPath("no child {} in {}".format(index, print_node(node)))
    kids[index - 1] = replace_at(kids[index - 1], path[1:], new)
    return rebuild(node, kids)


def polarity_at(formula, path):
    """Polarities of the occurrence at path: a subset of {POSITIVE, NEGATIVE}."""
    polarity = frozenset([POSITIVE])
    node = formula
    for index in path:
        kids = children(node)
        if not 1 <= index <= len(kids):
            raise BadPath("no child {} in {}".format(index, print_node(node)))
        if isinstance(node, Not) or (isinstance(node, Implies) and index == 1):
            polarity = frozenset(-p for p in polarity)
        elif isinstance(node, Iff) or isinstance(node, (Atom, Eq, LTerm)):
            polarity = BOTH
        node = kids[index - 1]
    return polarity


def replace_all(node, target, replacement):
    if node == target:
        return replacement
    kids = children(node)
    if not kids:
        return node
    return rebuild(node, (replace_all(k, target, replacement) for k in kids))


def literal_paths(formula, path=()):
    """Paths of every atomic formula (atoms and equalities) outside of terms."""
    if isinstance(formula, (Atom, Eq)):
        return [path]
    if isinstance(formula, Truth):
        return []
    found = []
    for (i, kid) in enumerate(children(formula), 1):
        found.extend(literal_paths(kid, path + (i,)))
    return found


def term_paths(node, path=()):
    """Paths of every non-variable term occurrence inside node."""
    found = []
    if isinstance(node, LTerm) and not isinstance(node, MetaVar):
        found.append(path)
    for (i, kid) in enumerate(children(node), 1):
        found.extend(term_paths(kid, path + (i,)))
    return found


# Symbols


def symbol_of(node):
    if isinstance(node, Apply):
        return node.fn
    if isinstance(node, Atom):
        return node.pred
    if isinstance(node, Eq):
        return "="
    if isinstance(node, MetaVar):
        return "?"
    if isinstance(node, Literal):
        return "quote"
    if isinstance(node, Cond):
        return "if"
    if isinstance(node, Truth):
        return "true" if node.value else "false"
    return type(node).__name__.lower()


def symbols(node):
    found = [symbol_of(node)]
    for kid in children(node):
        found.extend(symbols(kid))
    return found


def symbol_weight(node, weights, default=1):
    return sum(weights.get(sym, default) for sym in symbols(node))


def function_symbols(node):
    found = set()
    if isinstance(node, Apply):
        found.add(node.fn)
    for kid in children(node):
        found |= function_symbols(kid)
    return found


def predicate_symbols(node):
    found = set()
    if isinstance(node, (Atom, Eq)):
        found.add(symbol_of(node))
    for kid in children(node):
        found |= predicate_symbols(kid)
    return found


# Ground propositional evaluation


def evaluate_ground(f, valuation):
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, (Atom, Eq)):
        return valuation[print_node(f)]
    if isinstance(f, Not):
        return not evaluate_ground(f.body, valuation)
    if isinstance(f, And):
        return all(evaluate_ground(i, valuation) for i in f.items)
    if isinstance(f, Or):
        return any(evaluate_ground(i, valuation) for i in f.items)
    if isinstance(f, Implies):
        return not evaluate_ground(f.antecedent, valuation) or evaluate_ground(f.consequent, valuation)
    if isinstance(f, Iff):
        return evaluate_ground(f.left, valuation) == evaluate_ground(f.right, valuation)
    raise TypeError("not a formula: {!r}".format(f))


def evaluate_term_ground(t, valuation):
    if isinstance(t, Cond):
        branch = t.then if evaluate_ground(t.test, valuation) else t.else_
        return evaluate_term_ground(branch, valuation)
    return t


BOT_LITERAL = Literal(BOT)
