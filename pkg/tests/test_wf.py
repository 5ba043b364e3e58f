import itertools
import random

import pytest
from hypothesis import given, settings

from tests.constants import LAW_CASES
from tests.helpers import e, exprs, idempotent_envs, s
from unisynth.exceptions import ParseError, SortMismatch
from unisynth.samples import random_expr, random_triples
from unisynth.term import size_of, vars_of
from unisynth.wf import (
    U_RELATION,
    U_RELATION_SIZE_SECOND,
    Base,
    InducedBy,
    InputTriple,
    Lex,
    ReflexiveClosure,
    equivalent,
    lex_plain_less,
    lookup,
    parse_relspec,
    print_relspec,
    project,
    rel_leq,
    rel_less,
    check_strictness,
    u_less,
)

SIZE = Base("size-lt")
VARS = Base("vars-strict-subset")
LEX_VARS_SIZE = Lex((InducedBy("vars", VARS), InducedBy("size", SIZE)))


def triple(env, e1, e2):
    return InputTriple(s(env), e(e1), e(e2))


def test_base_relations():
    assert rel_less(SIZE, e("X"), e("a"))
    assert not rel_less(SIZE, e("a"), e("X"))
    assert rel_less(VARS, e("a"), e("X"))
    assert not rel_less(VARS, e("X"), e("(X . a)"))


def test_lex_decides_on_first_component():
    assert rel_less(LEX_VARS_SIZE, e("(a . (b . c))"), e("X"))
    assert rel_less(LEX_VARS_SIZE, e("X"), e("(X . a)"))
    assert not rel_less(LEX_VARS_SIZE, e("(X . a)"), e("(a . X)"))


def test_lex_needs_two_children():
    with pytest.raises(ValueError):
        Lex((SIZE,))


def test_reflexive_closure():
    closure = ReflexiveClosure(SIZE)
    assert rel_less(closure, e("a"), e("b"))
    assert not rel_less(SIZE, e("a"), e("b"))


def test_sort_mismatch():
    with pytest.raises(SortMismatch):
        rel_less(SIZE, s("{X -> a}"), e("a"))
    with pytest.raises(SortMismatch):
        project("range-vars", e("a"))


def test_u_less():
    assert u_less(triple("{}", "X", "a"), triple("{}", "(X . b)", "(a . Y)"))
    assert u_less(triple("{}", "X", "(a . X)"), triple("{}", "(a . X)", "X"))
    t = triple("{X -> Y}", "Y", "Z")
    assert not u_less(t, t)


def test_bundled_relation_matches_u_less():
    for (t1, t2) in zip(_triples(500, 1), _triples(500, 2)):
        assert rel_less(U_RELATION, t1, t2) == u_less(t1, t2)


def test_nested_call_decreases():
    # the inner and outer calls made while unifying two conses
    outer = triple("{}", "(X . b)", "(a . Y)")
    assert rel_less(U_RELATION, triple("{}", "X", "a"), outer)
    assert rel_less(U_RELATION, triple("{X -> a}", "b", "Y"), outer)


def test_check_strictness():
    pairs = list(zip(_triples(1_000, 3), _triples(1_000, 4)))
    assert check_strictness(U_RELATION, pairs).ok
    assert check_strictness(U_RELATION, pairs).checked == 1_000
    rng = random.Random(5)
    expressions = [(random_expr(rng), random_expr(rng)) for _ in range(1_000)]
    assert check_strictness(SIZE, expressions).ok
    swapped = Lex((InducedBy("size", SIZE), InducedBy("vars", VARS)))
    assert check_strictness(swapped, expressions).ok


def test_size_second_variant_is_distinct():
    a = triple("{}", "(a . X)", "X")
    b = triple("{}", "X", "(a . X)")
    assert rel_less(U_RELATION_SIZE_SECOND, a, b)
    assert not rel_less(U_RELATION, a, b)


def test_relspec_text():
    assert parse_relspec("(lex (range-vars) (size-first))") == U_RELATION
    assert print_relspec(U_RELATION) == "(lex (range-vars) (size-first))"
    spec = parse_relspec("(induced (component 1) (reflexive (base size-lt)))")
    assert spec == InducedBy(("component", 1), ReflexiveClosure(SIZE))
    assert parse_relspec(print_relspec(spec)) == spec
    with pytest.raises(ParseError):
        parse_relspec("(induced elsewhere (base size-lt))")
    with pytest.raises(ParseError):
        parse_relspec("(lex (range-vars))")


def test_lookup():
    assert lookup("u-rel") == U_RELATION
    assert lookup("size", {"size": SIZE}) == SIZE
    assert lookup("missing") is None


@settings(max_examples=LAW_CASES)
@given(exprs, exprs)
def test_lex_forms_agree(a, b):
    assert rel_less(LEX_VARS_SIZE, a, b) == lex_plain_less(LEX_VARS_SIZE, a, b)


@settings(max_examples=LAW_CASES)
@given(exprs, exprs)
def test_induced_law(a, b):
    assert rel_less(InducedBy("size", SIZE), a, b) == rel_less(SIZE, size_of(a), size_of(b))
    assert rel_less(InducedBy("vars", VARS), a, b) == rel_less(VARS, vars_of(a), vars_of(b))


@settings(max_examples=LAW_CASES)
@given(exprs, exprs)
def test_lex_equals_induced_pair_relation(a, b):
    pair = InducedBy(
        "vars-size",
        Lex((InducedBy(("component", 0), VARS), InducedBy(("component", 1), SIZE))),
    )
    assert rel_less(LEX_VARS_SIZE, a, b) == rel_less(pair, a, b)
    assert rel_less(LEX_VARS_SIZE, a, b) == rel_less(Base("subset-int-lex"), a, b)


@settings(max_examples=LAW_CASES)
@given(idempotent_envs, exprs, exprs, idempotent_envs, exprs, exprs)
def test_weak_steps_without_strict_decrease_are_constant(env1, a1, b1, env2, a2, b2):
    t1 = InputTriple(env1, a1, b1)
    t2 = InputTriple(env2, a2, b2)
    assert not (u_less(t1, t1) or (u_less(t1, t2) and u_less(t2, t1)))
    if rel_leq(U_RELATION, t1, t2) and not rel_less(U_RELATION, t1, t2):
        assert equivalent(U_RELATION, t1, t2)
        assert project("range-vars", t1) == project("range-vars", t2)
        assert size_of(a1) == size_of(a2)


def _triples(count, seed):
    return [InputTriple(env, e1, e2) for (env, e1, e2) in itertools.islice(random_triples(count, seed), count)]
