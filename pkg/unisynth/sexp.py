"""Shared s-expression surface syntax.

Every text form in the package (expressions, substitution literals, formulas,
programs, theories and relation specs) is read through the one grammar below and
then converted by the module that owns the type.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import lark
from lark import Lark, Token, Transformer, v_args

from unisynth.exceptions import ParseError

GRAMMAR = r"""
forms: sexp*

?sexp: SYMBOL
     | list
     | braces

list: "(" sexp* tail? ")"
tail: "." sexp

braces: "{" [binding ("," binding)*] "}"
binding: SYMBOL "->" sexp

SYMBOL: /(?:[^\s().{},;-]|-(?!>))+/
COMMENT: /;[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


@dataclass(frozen=True)
class SList:
    items: Tuple
    tail: Optional[object] = None
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class SBraces:
    bindings: Tuple
    line: int = 0
    column: int = 0


class _Builder(Transformer):
    def forms(self, children):
        return list(children)

    @v_args(meta=True)
    def list(self, meta, children):
        tail = None
        if children and isinstance(children[-1], _Tail):
            tail = children.pop().node
        return SList(tuple(children), tail, meta.line, meta.column)

    def tail(self, children):
        return _Tail(children[0])

    @v_args(meta=True)
    def braces(self, meta, children):
        return SBraces(tuple(b for b in children if b is not None), meta.line, meta.column)

    def binding(self, children):
        return (children[0], children[1])


@dataclass(frozen=True)
class _Tail:
    node: object


_parser = Lark(GRAMMAR, start="forms", parser="lalr", propagate_positions=True)


def parse_forms(text):
    try:
        tree = _parser.parse(text)
    except lark.exceptions.UnexpectedInput as e:
        line = getattr(e, "line", None)
        column = getattr(e, "column", None)
        if line is not None and line < 0:
            line, column = None, None
        raise ParseError("syntax error", line, column) from None
    return _Builder().transform(tree)


def parse_one(text, what="expression"):
    forms = parse_forms(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one {}, found {}".format(what, len(forms)))
    return forms[0]


def is_symbol(node):
    return isinstance(node, Token)


def position(node):
    if isinstance(node, Token):
        return node.line, node.column
    return getattr(node, "line", None), getattr(node, "column", None)


def fail(message, node):
    line, column = position(node)
    raise ParseError(message, line, column)
