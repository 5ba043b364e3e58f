"""Extracted applicative programs: interpretation, simplification and text form."""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

from unisynth import logic, sexp, wf
from unisynth.config import InterpreterDefaults, PrimitiveSymbols
from unisynth.exceptions import (
    AtomicExpression,
    DecreaseViolation,
    FuelExhausted,
    NotAVariable,
    ParseError,
    PrimitiveError,
)
from unisynth.logic import FALSE, TRUE, Apply, Cond, Literal, MetaVar
from unisynth.subst import Proper, Subst, apply, compose, misses, replacement
from unisynth.term import Expr, destructure, is_atom, is_const, is_var, occurs_in

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProgramDef:
    name: str
    params: Tuple
    body: logic.LTerm
    param_sorts: Tuple = field(default=(), compare=False)
    decrease: Optional[str] = field(default=None, compare=False)


def is_primitive(body, name, params):
    """True when body uses only primitives, the parameters and calls to name."""
    functions = set(PrimitiveSymbols["functions"])
    predicates = set(PrimitiveSymbols["predicates"])

    def ok(node):
        if isinstance(node, MetaVar):
            return False
        if isinstance(node, Apply):
            if not node.args and node.fn in params:
                return True
            if node.fn == name:
                if len(node.args) != len(params):
                    return False
            elif node.fn not in functions:
                return False
        elif isinstance(node, (logic.Atom, logic.Eq)):
            if logic.symbol_of(node) not in predicates:
                return False
        return all(ok(kid) for kid in logic.children(node))

    return body is not None and ok(body)


# Interpretation


class _Frame:
    def __init__(self, program, fuel, check_decrease, relation, on_call):
        self.program = program
        self.fuel = fuel
        self.calls = 0
        self.check_decrease = check_decrease
        self.relation = relation
        self.on_call = on_call


def _as_measured(args):
    if len(args) == 3:
        return wf.InputTriple(*args)
    if len(args) == 1:
        return args[0]
    return tuple(args)


def interpret(p, args, fuel=None, check_decrease=None, on_call=None, relations=None):
    """Evaluates p on args: strict left-to-right arguments, lazy conditional branches.

    on_call, when given, is called as on_call(parent_args, child_args) at every
    self-call before the callee runs.
    """
    args = tuple(args)
    if len(args) != len(p.params):
        raise PrimitiveError("{} takes {} arguments, got {}".format(p.name, len(p.params), len(args)))
    if fuel is None:
        fuel = InterpreterDefaults["fuel"]
    if check_decrease is None:
        check_decrease = InterpreterDefaults["checkDecrease"]
    relation = None
    if check_decrease:
        name = p.decrease or InterpreterDefaults["relation"]
        relation = wf.lookup(name, relations)
        if relation is None:
            raise PrimitiveError("no decrease relation named {}".format(name))
    frame = _Frame(p, fuel, check_decrease, relation, on_call)
    return _run(frame, args)


def _run(frame, args):
    env = dict(zip(frame.program.params, args))
    return _eval(frame, frame.program.body, env, args)


def _eval(frame, node, env, current):
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Cond):
        branch = node.then if _test(frame, node.test, env, current) else node.else_
        return _eval(frame, branch, env, current)
    if isinstance(node, Apply):
        if not node.args and node.fn in env:
            return env[node.fn]
        values = [_eval(frame, a, env, current) for a in node.args]
        if node.fn == frame.program.name:
            return _call(frame, tuple(values), current)
        return _primitive(node.fn, values)
    raise PrimitiveError("cannot evaluate {}".format(logic.print_node(node)))


def _call(frame, child, parent):
    frame.calls += 1
    if frame.calls > frame.fuel:
        raise FuelExhausted(frame.fuel)
    if frame.on_call is not None:
        frame.on_call(parent, child)
    if frame.check_decrease and not wf.rel_less(frame.relation, _as_measured(child), _as_measured(parent)):
        raise DecreaseViolation(parent, child)
    return _run(frame, child)


def _expr(value, fn):
    if not isinstance(value, Expr):
        raise PrimitiveError("{} expects an expression, got {}".format(fn, value))
    return value


def _subst(value, fn):
    if not isinstance(value, Subst):
        raise PrimitiveError("{} expects a substitution, got {}".format(fn, value))
    return value


def _primitive(fn, values):
    try:
        if fn in ("left", "right"):
            (l, r) = destructure(_expr(values[0], fn))
            return l if fn == "left" else r
        if fn == "apply":
            return apply(_expr(values[0], fn), _subst(values[1], fn))
        if fn == "compose":
            return compose(_subst(values[0], fn), _subst(values[1], fn))
        if fn == "replace":
            return replacement(_expr(values[0], fn), _expr(values[1], fn))
    except (AtomicExpression, NotAVariable) as e:
        raise PrimitiveError("{}: {}".format(fn, e)) from e
    raise PrimitiveError("{} is not a primitive function".format(fn))


def _test(frame, f, env, current):
    if isinstance(f, logic.Truth):
        return f.value
    if isinstance(f, logic.Not):
        return not _test(frame, f.body, env, current)
    if isinstance(f, logic.And):
        return all(_test(frame, i, env, current) for i in f.items)
    if isinstance(f, logic.Or):
        return any(_test(frame, i, env, current) for i in f.items)
    if isinstance(f, logic.Eq):
        return _eval(frame, f.left, env, current) == _eval(frame, f.right, env, current)
    if isinstance(f, logic.Atom):
        values = [_eval(frame, a, env, current) for a in f.args]
        if f.pred == "is-proper":
            return isinstance(_subst(values[0], f.pred), Proper)
        if f.pred == "is-atom":
            return is_atom(_expr(values[0], f.pred))
        if f.pred == "is-const":
            return is_const(_expr(values[0], f.pred))
        if f.pred == "is-var":
            return is_var(_expr(values[0], f.pred))
        if f.pred == "occurs-proper":
            return occurs_in(_expr(values[0], f.pred), _expr(values[1], f.pred))
        if f.pred == "misses":
            return misses(_subst(values[0], f.pred), _expr(values[1], f.pred))
    raise PrimitiveError("{} is not a primitive test".format(logic.print_node(f)))


# Simplification


def simplify(body):
    """Same-branch collapse, constant tests and redundant-test elimination, to a fixpoint."""
    while True:
        simpler = _simplify(logic.simplify(body), {})
        if simpler == body:
            return body
        body = simpler


def _simplify(node, known):
    if isinstance(node, Cond):
        test = node.test
        if test in known:
            return _simplify(node.then if known[test] else node.else_, known)
        if test == TRUE or test == FALSE:
            return _simplify(node.then if test == TRUE else node.else_, known)
        then = _simplify(node.then, {**known, test: True})
        else_ = _simplify(node.else_, {**known, test: False})
        if then == else_:
            return then
        return Cond(test, then, else_)
    if isinstance(node, Apply) and node.args:
        return Apply(node.fn, tuple(_simplify(a, known) for a in node.args))
    return node


# Text form


def emit(p):
    header = " ".join((p.name,) + tuple(p.params))
    return "(define ({}) {})".format(header, logic.print_term(p.body))


def parse_program(text):
    node = sexp.parse_one(text, "program")
    if (
        not isinstance(node, sexp.SList)
        or len(node.items) != 3
        or str(node.items[0]) != "define"
        or not isinstance(node.items[1], sexp.SList)
        or not node.items[1].items
    ):
        sexp.fail("expected (define (name params...) body)", node)
    header = node.items[1]
    for item in header.items:
        if not sexp.is_symbol(item):
            sexp.fail("program header must list symbols", item)
    name = str(header.items[0])
    params = tuple(str(p) for p in header.items[1:])
    if len(set(params)) != len(params):
        raise ParseError("repeated parameter in {}".format(name))
    body = logic.term_from_sexp(node.items[2])
    return ProgramDef(name, params, body)


def load_program(path):
    with open(path, "r") as f:
        return parse_program(f.read())


def structurally_equal(p, q):
    """Equal up to renaming of parameters and MetaVars; branch order matters."""
    if p.name != q.name or len(p.params) != len(q.params):
        return False
    body = _rename_constants(q.body, dict(zip(q.params, p.params)))
    left = logic.metavar_order(p.body)
    right = logic.metavar_order(body)
    if len(left) != len(right):
        return False
    return logic.rename(body, dict(zip(right, left))) == p.body


def _rename_constants(node, mapping):
    if isinstance(node, Apply) and not node.args and node.fn in mapping:
        return Apply(mapping[node.fn], ())
    kids = logic.children(node)
    if not kids:
        return node
    return logic.rebuild(node, (_rename_constants(k, mapping) for k in kids))
