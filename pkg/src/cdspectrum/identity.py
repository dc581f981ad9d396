"""A small language for relation inclusions.

Variables are single letters, ``^`` is intersection and binds tighter than
``*`` (relational composition), a trailing ``'`` is the converse, ``0`` is
the identity relation and ``1`` the full relation.  An inclusion is written
``LHS <= RHS``; the left side must have the shape ``a ^ (C1 * ... * Cm)``
where each ``Ci`` is a variable or an intersection of variables, e.g.::

    a^(b*c) <= a^b * a^c * a^b
    a^(b * a^c * b) <= a^b * a^c
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class RVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class RConst:
    value: int  # 0 = identity relation, 1 = full relation

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class RMeet:
    items: tuple

    def __str__(self):
        return "^".join(_wrap(i, RCompose) for i in self.items)


@dataclass(frozen=True)
class RCompose:
    items: tuple

    def __str__(self):
        return " * ".join(str(i) for i in self.items)


@dataclass(frozen=True)
class RConverse:
    child: object

    def __str__(self):
        return _wrap(self.child, (RCompose, RMeet)) + "'"


def _wrap(e, kinds):
    return f"({e})" if isinstance(e, kinds) else str(e)


def meet(*items):
    flat = []
    for i in items:
        flat.extend(i.items if isinstance(i, RMeet) else [i])
    return flat[0] if len(flat) == 1 else RMeet(tuple(flat))


def compose(*items):
    flat = []
    for i in items:
        flat.extend(i.items if isinstance(i, RCompose) else [i])
    if not flat:
        return RConst(0)
    return flat[0] if len(flat) == 1 else RCompose(tuple(flat))


def alternate(first, second, count):
    """first * second * first * ... with ``count`` factors (0 gives ``0``)."""
    return compose(*[first if i % 2 == 0 else second for i in range(count)])


def variables(e):
    if isinstance(e, RVar):
        return {e.name}
    if isinstance(e, RConst):
        return set()
    if isinstance(e, RConverse):
        return variables(e.child)
    out = set()
    for i in e.items:
        out |= variables(i)
    return out


def push_converse(e, flip=False):
    """Equivalent expression with converses only on variables."""
    if isinstance(e, (RVar, RConst)):
        return RConverse(e) if flip and isinstance(e, RVar) else e
    if isinstance(e, RConverse):
        return push_converse(e.child, not flip)
    if isinstance(e, RMeet):
        return RMeet(tuple(push_converse(i, flip) for i in e.items))
    items = [push_converse(i, flip) for i in e.items]
    return RCompose(tuple(reversed(items) if flip else items))


@dataclass(frozen=True)
class InclusionScheme:
    """``alpha ^ (C1 * ... * Cm) <= rhs``; ``alpha`` may be None (the full relation)."""
    alpha: object
    chain: tuple  # tuple of frozensets of variable names
    rhs: object

    @property
    def m(self):
        return len(self.chain)

    def __str__(self):
        parts = []
        for c in self.chain:
            names = sorted(c, key=lambda v: (v != self.alpha, v))
            parts.append("^".join(names))
        left = " * ".join(parts)
        if self.alpha is not None:
            left = f"{self.alpha}^({left})" if len(self.chain) > 1 else f"{self.alpha}^{left}"
        return f"{left} <= {self.rhs}"


# ---------------------------------------------------------------- parser

def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("<=", i):
            tokens.append(("<=", i))
            i += 2
        elif ch.isalpha():
            if i + 1 < len(text) and text[i + 1].isalnum():
                raise ParseError(f"variables are single letters (column {i + 1})")
            tokens.append(("var", i))
            i += 1
        elif ch in "01":
            tokens.append(("const", i))
            i += 1
        elif ch in "^*'()":
            tokens.append((ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at column {i + 1}")
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind):
        if self.peek() != kind:
            where = self.tokens[self.pos][1] + 1 if self.pos < len(self.tokens) else len(self.text) + 1
            raise ParseError(f"expected {kind!r} at column {where} in {self.text!r}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        items = [self.term()]
        while self.peek() == "*":
            self.take("*")
            items.append(self.term())
        return compose(*items)

    def term(self):
        items = [self.factor()]
        while self.peek() == "^":
            self.take("^")
            items.append(self.factor())
        return meet(*items)

    def factor(self):
        kind = self.peek()
        if kind == "var":
            _, at = self.take("var")
            e = RVar(self.text[at])
        elif kind == "const":
            _, at = self.take("const")
            e = RConst(int(self.text[at]))
        elif kind == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
        else:
            where = self.tokens[self.pos][1] + 1 if self.pos < len(self.tokens) else len(self.text) + 1
            raise ParseError(f"expected a variable or '(' at column {where} in {self.text!r}")
        while self.peek() == "'":
            self.take("'")
            e = RConverse(e)
        return e


def parse_expression(text):
    p = _Parser(text)
    e = p.expr()
    if p.pos != len(p.tokens):
        raise ParseError(f"trailing input at column {p.tokens[p.pos][1] + 1} in {text!r}")
    return e


def _chain_factor(e):
    # congruences are symmetric, so a converse on a chain variable is dropped
    if isinstance(e, RConverse) and isinstance(e.child, RVar):
        e = e.child
    if isinstance(e, RMeet):
        e = RMeet(tuple(i.child if isinstance(i, RConverse) and isinstance(i.child, RVar) else i
                        for i in e.items))
    if isinstance(e, RVar):
        return frozenset([e.name])
    if isinstance(e, RMeet) and all(isinstance(i, RVar) for i in e.items):
        return frozenset(i.name for i in e.items)
    raise ParseError(
        f"left side shape: chain factor {e} must be a variable or an intersection of variables"
    )


def scheme_from_lhs(lhs, rhs):
    if isinstance(lhs, RMeet) and isinstance(lhs.items[0], RVar):
        alpha = lhs.items[0].name
        rest = lhs.items[1:]
        if len(rest) == 1 and isinstance(rest[0], RCompose):
            chain = tuple(_chain_factor(i) for i in rest[0].items)
        else:
            chain = (_chain_factor(meet(*rest)),)
    elif isinstance(lhs, RCompose):
        alpha = None
        chain = tuple(_chain_factor(i) for i in lhs.items)
    elif isinstance(lhs, RVar):
        alpha, chain = None, (frozenset([lhs.name]),)
    else:
        raise ParseError(
            f"left side shape: expected 'a ^ (C1 * ... * Cm)' with variable factors, got {lhs}"
        )
    return InclusionScheme(alpha, chain, rhs)


def parse_inclusion(text):
    if text.count("<=") != 1:
        raise ParseError(f"an inclusion needs exactly one '<=': {text!r}")
    left, right = text.split("<=")
    lhs = parse_expression(left)
    rhs = parse_expression(right)
    return scheme_from_lhs(lhs, rhs)
