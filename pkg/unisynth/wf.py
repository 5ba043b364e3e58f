"""Well-founded relation combinators and the unification relation on input triples."""
from dataclasses import dataclass, field
from typing import List, Tuple

from unisynth import sexp
from unisynth.exceptions import SortMismatch
from unisynth.subst import Subst, range_of
from unisynth.term import Expr, size_of, vars_of, vars_of_all

BASES = ("size-lt", "vars-strict-subset", "subset-int-lex")
PROJECTIONS = ("first", "second", "vars", "size", "range", "vars-size", "range-vars")


@dataclass(frozen=True)
class InputTriple:
    env: Subst
    e1: Expr
    e2: Expr


@dataclass(frozen=True)
class Base:
    name: str

    def __post_init__(self):
        if self.name not in BASES:
            raise ValueError("unknown base relation {}".format(self.name))


@dataclass(frozen=True)
class InducedBy:
    # a projection name from PROJECTIONS or ("component", i)
    projection: object
    inner: object


@dataclass(frozen=True)
class Lex:
    children: Tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("lex needs at least two relations")


@dataclass(frozen=True)
class ReflexiveClosure:
    inner: object


RANGE_VARS = InducedBy("range-vars", Base("vars-strict-subset"))
SIZE_FIRST = InducedBy("first", Base("size-lt"))
SIZE_SECOND = InducedBy("second", Base("size-lt"))

U_RELATION = Lex((RANGE_VARS, SIZE_FIRST))
# symmetric variant: yields the mirror-image algorithm, representable but not bundled
U_RELATION_SIZE_SECOND = Lex((RANGE_VARS, SIZE_SECOND))

NAMED = {"range-vars": RANGE_VARS, "size-first": SIZE_FIRST, "size-second": SIZE_SECOND}


def project(projection, value):
    if isinstance(projection, tuple):
        index = projection[1]
        if isinstance(value, InputTriple):
            value = (value.env, value.e1, value.e2)
        if not isinstance(value, tuple) or index >= len(value):
            raise SortMismatch("component {} of {!r}".format(index, value))
        return value[index]
    if projection in ("first", "second"):
        if isinstance(value, InputTriple):
            return value.e1 if projection == "first" else value.e2
        return project(("component", 0 if projection == "first" else 1), value)
    if projection == "range-vars":
        if not isinstance(value, InputTriple):
            raise SortMismatch("range-vars applies to input triples, not {!r}".format(value))
        return range_of(value.env) | vars_of_all(value.e1, value.e2)
    if projection == "range":
        if isinstance(value, InputTriple):
            value = value.env
        if not isinstance(value, Subst):
            raise SortMismatch("range applies to substitutions, not {!r}".format(value))
        return range_of(value)
    if not isinstance(value, Expr):
        raise SortMismatch("{} applies to expressions, not {!r}".format(projection, value))
    if projection == "vars":
        return vars_of(value)
    if projection == "size":
        return size_of(value)
    if projection == "vars-size":
        return (vars_of(value), size_of(value))
    raise ValueError("unknown projection {}".format(projection))


def _measure(name, value):
    if name == "size-lt":
        if isinstance(value, Expr):
            return size_of(value)
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif name == "vars-strict-subset":
        if isinstance(value, Expr):
            return vars_of(value)
        if isinstance(value, (set, frozenset)):
            return frozenset(value)
    elif name == "subset-int-lex":
        if isinstance(value, Expr):
            return (vars_of(value), size_of(value))
        if isinstance(value, tuple) and len(value) == 2:
            return (frozenset(value[0]), value[1])
    raise SortMismatch("{} cannot compare {!r}".format(name, value))


def _base_less(name, a, b, weak):
    x = _measure(name, a)
    y = _measure(name, b)
    if name == "subset-int-lex":
        strict = x[0] < y[0] or (x[0] == y[0] and x[1] < y[1])
        return strict or (weak and x == y)
    if weak:
        return x <= y
    return x < y


def rel_less(spec, a, b):
    if isinstance(spec, Base):
        return _base_less(spec.name, a, b, weak=False)
    if isinstance(spec, InducedBy):
        return rel_less(spec.inner, project(spec.projection, a), project(spec.projection, b))
    if isinstance(spec, Lex):
        # reflexive form: first strictly smaller, or first weakly smaller and the rest strictly
        head, rest = spec.children[0], spec.children[1:]
        tail = rest[0] if len(rest) == 1 else Lex(rest)
        return rel_less(head, a, b) or (rel_leq(head, a, b) and rel_less(tail, a, b))
    if isinstance(spec, ReflexiveClosure):
        return rel_leq(spec.inner, a, b)
    raise ValueError("not a relation spec: {!r}".format(spec))


def rel_leq(spec, a, b):
    """The reflexive closure of spec, equality taken on the compared measure."""
    if isinstance(spec, Base):
        return _base_less(spec.name, a, b, weak=True)
    if isinstance(spec, InducedBy):
        return rel_leq(spec.inner, project(spec.projection, a), project(spec.projection, b))
    if isinstance(spec, Lex):
        return rel_less(spec, a, b) or all(equivalent(c, a, b) for c in spec.children)
    if isinstance(spec, ReflexiveClosure):
        return rel_leq(spec.inner, a, b)
    raise ValueError("not a relation spec: {!r}".format(spec))


def equivalent(spec, a, b):
    return rel_leq(spec, a, b) and rel_leq(spec, b, a) and not rel_less(spec, a, b)


def lex_plain_less(spec, a, b):
    """The textbook lexicographic definition: strict, or equal and strict in the rest."""
    head, rest = spec.children[0], spec.children[1:]
    tail = rest[0] if len(rest) == 1 else Lex(rest)
    if rel_less(head, a, b):
        return True
    if not equivalent(head, a, b):
        return False
    if isinstance(tail, Lex):
        return lex_plain_less(tail, a, b)
    return rel_less(tail, a, b)


def u_less(t1, t2):
    s1 = range_of(t1.env) | vars_of_all(t1.e1, t1.e2)
    s2 = range_of(t2.env) | vars_of_all(t2.e1, t2.e2)
    return s1 < s2 or (s1 <= s2 and size_of(t1.e1) < size_of(t2.e1))


@dataclass
class StrictnessReport:
    checked: int = 0
    violations: List = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_strictness(spec, samples):
    report = StrictnessReport()
    for (a, b) in samples:
        report.checked += 1
        for x in (a, b):
            if rel_less(spec, x, x):
                report.violations.append((x, x, "reflexive"))
        if rel_less(spec, a, b) and rel_less(spec, b, a):
            report.violations.append((a, b, "symmetric"))
    return report


def relspec_from_sexp(node):
    if sexp.is_symbol(node) or not isinstance(node, sexp.SList) or not node.items:
        sexp.fail("expected a relation spec", node)
    head = str(node.items[0])
    args = node.items[1:]
    if head in NAMED and not args:
        return NAMED[head]
    if head == "base" and len(args) == 1 and str(args[0]) in BASES:
        return Base(str(args[0]))
    if head == "induced" and len(args) == 2:
        return InducedBy(_projection_from_sexp(args[0]), relspec_from_sexp(args[1]))
    if head == "lex" and len(args) >= 2:
        return Lex(tuple(relspec_from_sexp(a) for a in args))
    if head == "reflexive" and len(args) == 1:
        return ReflexiveClosure(relspec_from_sexp(args[0]))
    sexp.fail("malformed relation spec ({} ...)".format(head), node)


def _projection_from_sexp(node):
    if sexp.is_symbol(node) and str(node) in PROJECTIONS:
        return str(node)
    if isinstance(node, sexp.SList) and len(node.items) == 2 and str(node.items[0]) == "component":
        try:
            return ("component", int(str(node.items[1])))
        except ValueError:
            pass
    sexp.fail("unknown projection", node)


def parse_relspec(text):
    return relspec_from_sexp(sexp.parse_one(text, "relation spec"))


def print_relspec(spec):
    for (name, named) in NAMED.items():
        if spec == named:
            return "({})".format(name)
    if isinstance(spec, Base):
        return "(base {})".format(spec.name)
    if isinstance(spec, InducedBy):
        projection = spec.projection
        if isinstance(projection, tuple):
            projection = "(component {})".format(projection[1])
        return "(induced {} {})".format(projection, print_relspec(spec.inner))
    if isinstance(spec, Lex):
        return "(lex {})".format(" ".join(print_relspec(c) for c in spec.children))
    return "(reflexive {})".format(print_relspec(spec.inner))


# relations a derivation may name without declaring them
BUNDLED = {"u-rel": U_RELATION}


def lookup(name, declared=None):
    relations = dict(BUNDLED)
    relations.update(declared or {})
    return relations.get(name)
