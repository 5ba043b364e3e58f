import random

import pytest
from hypothesis import given, settings

from tests.constants import LAW_CASES
from tests.helpers import e, exprs
from unisynth.exceptions import AtomicExpression, NotATuple, ParseError
from unisynth.samples import random_expr
from unisynth.term import (
    BLACK_HOLE,
    CONS,
    CONST,
    NIL,
    REFLEXIVE,
    VAR,
    Cons,
    Const,
    FreshNames,
    Var,
    classify,
    decode_tuple,
    destructure,
    encode_tuple,
    is_atom,
    occurs_in,
    parse_expr,
    print_expr,
    size_of,
    var_order,
    vars_of,
    vars_of_all,
)


def test_parse_dotted_pair():
    assert parse_expr("(a . X)") == Cons(Const("a"), Var("X"))


def test_parse_list_sugar():
    assert parse_expr("(a b)") == Cons(Const("a"), Cons(Const("b"), NIL))


def test_parse_black_hole():
    assert parse_expr("*") == BLACK_HOLE


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_expr("(a . )")
    assert "line" in str(info.value)
    with pytest.raises(ParseError):
        parse_expr("()")
    with pytest.raises(ParseError):
        parse_expr("(a b . c)")
    with pytest.raises(ParseError):
        parse_expr("{X -> a}")


def test_print_canonical():
    assert print_expr(Cons(Const("a"), Var("X"))) == "(a . X)"
    assert print_expr(NIL) == "nil"
    assert print_expr(e("(a b)")) == "(a . (b . nil))"


def test_round_trip_random():
    rng = random.Random(7)
    for _ in range(10_000):
        expr = random_expr(rng, depth=8)
        assert parse_expr(print_expr(expr)) == expr


def test_destructure():
    assert destructure(e("(a . X)")) == (Const("a"), Var("X"))
    assert destructure(e("(a . (b . nil))")) == (Const("a"), e("(b . nil)"))
    with pytest.raises(AtomicExpression):
        destructure(e("a"))


def test_classify_partition():
    assert classify(e("a")) == CONST
    assert classify(e("X")) == VAR
    assert classify(e("(a . b)")) == CONS
    assert is_atom(e("X")) and is_atom(e("a"))
    assert not is_atom(e("(a . b)"))


def test_size():
    assert size_of(e("X")) == 0
    assert size_of(e("a")) == 1
    assert size_of(e("(a . (a . X))")) == 4


def test_vars():
    assert vars_of(e("(X . X)")) == {"X"}
    assert vars_of(e("a")) == frozenset()
    assert vars_of(e("(X . (a . Y))")) == {"X", "Y"}
    assert var_order(e("((Y . X) . Y)")) == ["Y", "X"]


def test_occurs():
    assert occurs_in(e("a"), e("(a . X)"))
    assert not occurs_in(e("X"), e("X"))
    assert occurs_in(e("X"), e("X"), REFLEXIVE)
    assert occurs_in(e("X"), e("(X . X)"))


def test_tuples():
    assert encode_tuple([e("a"), e("X")]) == e("(a . (X . nil))")
    assert decode_tuple(e("(a . (X . nil))")) == [e("a"), e("X")]
    assert decode_tuple(NIL) == []
    with pytest.raises(NotATuple):
        decode_tuple(e("(a . b)"))


def test_fresh_names_skip_taken():
    supply = FreshNames(taken=["X#1"])
    assert supply.fresh("X") == "X#2"
    assert supply.fresh("X#2") == "X#3"
    supply.reserve(["Y#4"])
    assert supply.fresh("Y") == "Y#5"


@settings(max_examples=LAW_CASES)
@given(exprs, exprs)
def test_proper_occurrence_shrinks_size(d, x):
    if occurs_in(d, x):
        assert size_of(d) < size_of(x)
    if isinstance(x, Cons):
        assert size_of(x.left) < size_of(x) and size_of(x.right) < size_of(x)


@settings(max_examples=LAW_CASES)
@given(exprs, exprs)
def test_occurrence_keeps_vars(d, x):
    if occurs_in(d, x, REFLEXIVE):
        assert vars_of(d) <= vars_of(x)


@settings(max_examples=LAW_CASES)
@given(exprs, exprs, exprs)
def test_tuple_vars_union(x, y, z):
    assert vars_of(encode_tuple([x, y, z])) == vars_of(x) | vars_of(y) | vars_of(z)
    assert vars_of_all(x, y, z) == vars_of(x) | vars_of(y) | vars_of(z)
    assert decode_tuple(encode_tuple([x, y, z])) == [x, y, z]
