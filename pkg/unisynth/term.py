"""Symbolic expressions: constants, variables and cons pairs."""
import re
from dataclasses import dataclass
from typing import FrozenSet

from unisynth import sexp
from unisynth.exceptions import AtomicExpression, NotATuple, ParseError

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_#]*\Z")

CONST = "const"
VAR = "var"
CONS = "cons"

PROPER = "proper"
REFLEXIVE = "reflexive"


class Expr:
    __slots__ = ()

    def __str__(self):
        return print_expr(self)


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Cons(Expr):
    left: Expr
    right: Expr


NIL = Const("nil")
BLACK_HOLE = Const("*")


def is_variable_name(name):
    return bool(name) and name[0].isupper()


def atom(name):
    """Builds the atom a name denotes under the uppercase-variable convention."""
    if name in ("*", "nil"):
        return Const(name)
    if not IDENTIFIER.match(name):
        raise ParseError("invalid identifier {!r}".format(name))
    return Var(name) if is_variable_name(name) else Const(name)


def expr_from_sexp(node):
    if sexp.is_symbol(node):
        try:
            return atom(str(node))
        except ParseError:
            sexp.fail("invalid identifier {!r}".format(str(node)), node)
    if isinstance(node, sexp.SBraces):
        sexp.fail("substitution literal where an expression was expected", node)
    if not node.items:
        sexp.fail("empty list is not an expression", node)
    if node.tail is not None:
        if len(node.items) != 1:
            sexp.fail("dotted pair must have exactly one element before the dot", node)
        return Cons(expr_from_sexp(node.items[0]), expr_from_sexp(node.tail))
    result = NIL
    for item in reversed(node.items):
        result = Cons(expr_from_sexp(item), result)
    return result


def parse_expr(text):
    return expr_from_sexp(sexp.parse_one(text))


def print_expr(e):
    if isinstance(e, Cons):
        return "({} . {})".format(print_expr(e.left), print_expr(e.right))
    return e.name


def classify(e):
    if isinstance(e, Const):
        return CONST
    if isinstance(e, Var):
        return VAR
    return CONS


def is_const(e):
    return isinstance(e, Const)


def is_var(e):
    return isinstance(e, Var)


def is_atom(e):
    return not isinstance(e, Cons)


def destructure(e):
    if not isinstance(e, Cons):
        raise AtomicExpression("{} has no left or right part".format(print_expr(e)))
    return e.left, e.right


def left(e):
    return destructure(e)[0]


def right(e):
    return destructure(e)[1]


def size_of(e):
    if isinstance(e, Cons):
        return 1 + size_of(e.left) + size_of(e.right)
    return 1 if isinstance(e, Const) else 0


def vars_of(e) -> FrozenSet[str]:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Cons):
        return vars_of(e.left) | vars_of(e.right)
    return frozenset()


def vars_of_all(*exprs):
    # vars(e1, ..., en) is read as vars of the encoded tuple
    return vars_of(encode_tuple(exprs))


def var_order(e):
    """Variables of e in first-occurrence order, left to right."""
    seen = []
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            if node.name not in seen:
                seen.append(node.name)
        elif isinstance(node, Cons):
            stack.append(node.right)
            stack.append(node.left)
    return seen


def occurs_in(d, e, mode=PROPER):
    if mode == REFLEXIVE and d == e:
        return True
    if not isinstance(e, Cons):
        return False
    return occurs_in(d, e.left, REFLEXIVE) or occurs_in(d, e.right, REFLEXIVE)


def encode_tuple(items):
    result = NIL
    for item in reversed(list(items)):
        result = Cons(item, result)
    return result


def decode_tuple(e):
    items = []
    node = e
    while isinstance(node, Cons):
        items.append(node.left)
        node = node.right
    if node != NIL:
        raise NotATuple("{} is not nil-terminated".format(print_expr(e)))
    return items


class FreshNames:
    """Monotonic supply of `name#k` variable names.

    Names already reserved are skipped, so a supply seeded with the names in use
    never hands out a clash.
    """

    def __init__(self, start=1, taken=()):
        self._next = start
        self._taken = set(taken)

    def reserve(self, names):
        self._taken.update(names)

    def fresh(self, name):
        base = name.split("#", 1)[0]
        while True:
            candidate = "{}#{}".format(base, self._next)
            self._next += 1
            if candidate not in self._taken:
                self._taken.add(candidate)
                return candidate

    @property
    def counter(self):
        return self._next
