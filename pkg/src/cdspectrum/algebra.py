"""Finite algebras, terms, the ``.alg`` file format and product constructions."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .closure import Closure, Layout
from .errors import AlgebraError, ParseError


@dataclass(frozen=True)
class Signature:
    ops: tuple  # ((symbol, arity), ...)

    def __post_init__(self):
        ops = tuple((str(s), int(a)) for s, a in self.ops)
        object.__setattr__(self, "ops", ops)
        symbols = [s for s, _ in ops]
        if len(set(symbols)) != len(symbols):
            raise AlgebraError(f"duplicate operation symbols in {symbols}")
        if any(a < 0 for _, a in ops):
            raise AlgebraError("negative arity")

    @property
    def symbols(self):
        return [s for s, _ in self.ops]

    def arity(self, symbol):
        for s, a in self.ops:
            if s == symbol:
                return a
        raise AlgebraError(f"unknown operation symbol {symbol!r}")

    def __contains__(self, symbol):
        return any(s == symbol for s, _ in self.ops)


class FiniteAlgebra:
    """Universe ``{0..size-1}`` with one flat, row-major table per operation.

    Table entry for ``f(a_1, ..., a_r)`` sits at ``sum(a_i * size**(r-i))``:
    the first argument is the most significant digit.
    """

    __slots__ = ("name", "size", "signature", "tables")

    def __init__(self, name, size, signature, tables):
        if size < 1:
            raise AlgebraError("an algebra needs at least one element")
        if not isinstance(signature, Signature):
            signature = Signature(tuple(signature))
        frozen = {}
        for symbol, arity in signature.ops:
            if symbol not in tables:
                raise AlgebraError(f"missing table for {symbol!r}")
            t = np.asarray(tables[symbol], dtype=np.int64).ravel()
            if t.size != size ** arity:
                raise AlgebraError(
                    f"table for {symbol!r} has {t.size} entries, expected {size ** arity}"
                )
            if t.size and (t.min() < 0 or t.max() >= size):
                raise AlgebraError(f"table for {symbol!r}: element out of range")
            t.setflags(write=False)
            frozen[symbol] = t
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "size", int(size))
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "tables", frozen)

    def __setattr__(self, key, value):
        raise AttributeError("FiniteAlgebra is immutable")

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (
            self.name == other.name
            and self.size == other.size
            and self.signature == other.signature
            and all(np.array_equal(self.tables[s], other.tables[s]) for s in self.signature.symbols)
        )

    def __hash__(self):
        return hash((self.name, self.size, self.signature,
                     tuple(self.tables[s].tobytes() for s in self.signature.symbols)))

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops={list(self.signature.ops)})"

    def op(self, symbol, *args):
        arity = self.signature.arity(symbol)
        if len(args) != arity:
            raise AlgebraError(f"{symbol} expects {arity} arguments, got {len(args)}")
        code = 0
        for a in args:
            code = code * self.size + a
        return int(self.tables[symbol][code])

    def same_tables(self, other):
        return (
            self.size == other.size
            and self.signature == other.signature
            and all(np.array_equal(self.tables[s], other.tables[s]) for s in self.signature.symbols)
        )


def trivial_algebra(signature, name="trivial"):
    return FiniteAlgebra(name, 1, signature, {s: np.zeros(1, dtype=np.int64) for s, _ in signature.ops})


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Node:
    symbol: str
    children: tuple = ()

    def __str__(self):
        return f"{self.symbol}({','.join(str(c) for c in self.children)})"


Term = Union[Var, Node]


def term_nvars(t):
    """One more than the largest variable index occurring in ``t``."""
    if isinstance(t, Var):
        return t.index + 1
    return max((term_nvars(c) for c in t.children), default=0)


def term_depth(t):
    if isinstance(t, Var):
        return 0
    return 1 + max((term_depth(c) for c in t.children), default=0)


def substitute(t, images):
    """Replace ``Var(i)`` by ``images[i]``."""
    if isinstance(t, Var):
        return images[t.index]
    return Node(t.symbol, tuple(substitute(c, images) for c in t.children))


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_term(text, signature=None):
    """Parse prefix notation such as ``join(meet(x0,x1),x2)``."""
    tokens = [(m.group(1), m.group(2)) for m in _TOKEN.finditer(text) if m.group(0).strip()]
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] is None:
            raise ParseError(f"expected a term in {text!r}")
        name = tokens[pos][0]
        pos += 1
        if pos < len(tokens) and tokens[pos][1] == "(":
            pos += 1
            children = []
            if pos < len(tokens) and tokens[pos][1] == ")":
                pos += 1
            else:
                while True:
                    children.append(expr())
                    if pos < len(tokens) and tokens[pos][1] == ",":
                        pos += 1
                        continue
                    if pos < len(tokens) and tokens[pos][1] == ")":
                        pos += 1
                        break
                    raise ParseError(f"unbalanced parentheses in {text!r}")
            node = Node(name, tuple(children))
            if signature is not None and signature.arity(name) != len(children):
                raise ParseError(f"{name} expects {signature.arity(name)} arguments")
            return node
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            return Var(int(m.group(1)))
        if signature is not None and name in signature and signature.arity(name) == 0:
            return Node(name, ())
        raise ParseError(f"unknown variable or constant {name!r}")

    t = expr()
    if pos != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    return t


def _check_term(signature, t, nvars):
    if isinstance(t, Var):
        if t.index >= nvars:
            raise AlgebraError(f"variable x{t.index} is not bound")
        return
    if t.symbol not in signature:
        raise AlgebraError(f"unknown operation symbol {t.symbol!r}")
    if signature.arity(t.symbol) != len(t.children):
        raise AlgebraError(f"{t.symbol} expects {signature.arity(t.symbol)} arguments")
    for c in t.children:
        _check_term(signature, c, nvars)


def term_values(A, t, columns):
    """Evaluate ``t`` pointwise over arrays ``columns[i]`` of values for x_i."""
    cache = {}

    def go(s):
        key = id(s)
        if key in cache:
            return cache[key][1]
        if isinstance(s, Var):
            val = columns[s.index]
        else:
            table = A.tables[s.symbol]
            if not s.children:
                val = np.full(np.shape(columns[0]) if columns else (), table[0])
            else:
                code = np.asarray(go(s.children[0]), dtype=np.int64)
                for c in s.children[1:]:
                    code = code * A.size + go(c)
                val = table[code]
        cache[key] = (s, val)
        return val

    return go(t)


def eval_term(A, t, assignment):
    _check_term(A.signature, t, len(assignment))
    if any(not 0 <= a < A.size for a in assignment):
        raise AlgebraError("assignment value out of range")
    cols = [np.array([a], dtype=np.int64) for a in assignment]
    if not cols:
        cols = [np.zeros(1, dtype=np.int64)]
    return int(np.asarray(term_values(A, t, cols)).ravel()[0])


def all_assignments(size, nvars):
    """(size**nvars, nvars) array of assignments, first variable slowest."""
    if nvars == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((size,) * nvars).reshape(nvars, -1).T
    return grid.astype(np.int64)


def holds_identity(algebras, lhs, rhs, nvars=None):
    """True iff ``lhs = rhs`` under every assignment in every listed algebra."""
    algebras = list(algebras)
    if not algebras:
        raise AlgebraError("no algebras given")
    sig = algebras[0].signature
    for A in algebras[1:]:
        if A.signature != sig:
            raise AlgebraError("signature mismatch between algebras")
    if nvars is None:
        nvars = max(term_nvars(lhs), term_nvars(rhs), 1)
    for A in algebras:
        _check_term(A.signature, lhs, nvars)
        _check_term(A.signature, rhs, nvars)
        grid = all_assignments(A.size, nvars)
        cols = [grid[:, i] for i in range(nvars)]
        left = np.broadcast_to(term_values(A, lhs, cols), (grid.shape[0],))
        right = np.broadcast_to(term_values(A, rhs, cols), (grid.shape[0],))
        if not np.array_equal(left, right):
            return False
    return True


def identity_counterexample(algebras, lhs, rhs, nvars=None):
    """First (algebra name, assignment) violating ``lhs = rhs``, else None."""
    if nvars is None:
        nvars = max(term_nvars(lhs), term_nvars(rhs), 1)
    for A in algebras:
        grid = all_assignments(A.size, nvars)
        cols = [grid[:, i] for i in range(nvars)]
        left = np.broadcast_to(term_values(A, lhs, cols), (grid.shape[0],))
        right = np.broadcast_to(term_values(A, rhs, cols), (grid.shape[0],))
        bad = np.flatnonzero(left != right)
        if bad.size:
            return A.name, grid[bad[0]].tolist()
    return None


# ---------------------------------------------------------------- file format

def parse_algebra(text):
    name = size = None
    ops = []
    tables = {}
    current = None  # [symbol, arity, entries, line]

    def close(line):
        if current is None:
            return
        symbol, arity, entries, op_line = current
        if len(entries) != size ** arity:
            raise ParseError(
                f"table for {symbol!r} (declared on line {op_line}) has {len(entries)} entries, "
                f"expected {size ** arity}", line)
        tables[symbol] = entries

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if name is None:
            if words[0] != "algebra" or len(words) != 2:
                raise ParseError("malformed header: expected 'algebra <name>'", lineno)
            name = words[1]
            continue
        if size is None:
            if words[0] != "size" or len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                raise ParseError("malformed header: expected 'size <n>' with n >= 1", lineno)
            size = int(words[1])
            continue
        if words[0] == "op":
            close(lineno)
            if len(words) != 3 or not words[2].isdigit():
                raise ParseError("malformed operation header: expected 'op <symbol> <arity>'", lineno)
            symbol, arity = words[1], int(words[2])
            if any(s == symbol for s, _ in ops):
                raise ParseError(f"duplicate operation {symbol!r}", lineno)
            ops.append((symbol, arity))
            current = [symbol, arity, [], lineno]
            continue
        if current is None:
            raise ParseError(f"unexpected content {line!r} before any 'op' line", lineno)
        for w in words:
            if not w.isdigit():
                raise ParseError(f"bad table entry {w!r}", lineno)
            v = int(w)
            if v >= size:
                raise ParseError(f"element out of range: {v} (size {size})", lineno)
            current[2].append(v)
    if name is None:
        raise ParseError("malformed header: empty file", 1)
    if size is None:
        raise ParseError("malformed header: missing 'size' line", len(lines))
    close(len(lines))
    return FiniteAlgebra(name, size, Signature(tuple(ops)), tables)


def serialize_algebra(A):
    out = [f"algebra {A.name}", f"size {A.size}"]
    for symbol, arity in A.signature.ops:
        out.append(f"op {symbol} {arity}")
        t = A.tables[symbol].tolist()
        step = A.size if arity else 1
        for i in range(0, len(t), step):
            out.append(" ".join(str(v) for v in t[i:i + step]))
    return "\n".join(out) + "\n"


def load_algebra(path):
    path = Path(path)
    try:
        return parse_algebra(path.read_text(encoding="utf-8"))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------- products

def _require_same_signature(A, B):
    if A.signature != B.signature:
        raise AlgebraError(f"signature mismatch: {A.signature.ops} vs {B.signature.ops}")


def direct_product(A, B, name=None):
    """A x B with (a, b) encoded as ``a * |B| + b``."""
    _require_same_signature(A, B)
    n = A.size * B.size
    tables = {}
    for symbol, arity in A.signature.ops:
        grid = all_assignments(n, arity)
        ca = np.zeros(grid.shape[0], dtype=np.int64)
        cb = np.zeros(grid.shape[0], dtype=np.int64)
        for j in range(arity):
            a, b = np.divmod(grid[:, j], B.size)
            ca = ca * A.size + a
            cb = cb * B.size + b
        tables[symbol] = A.tables[symbol][ca] * B.size + B.tables[symbol][cb]
    return FiniteAlgebra(name or f"{A.name}x{B.name}", n, A.signature, tables)


def power(A, k=2):
    P = A
    for _ in range(k - 1):
        P = direct_product(P, A)
    return FiniteAlgebra(f"{A.name}^{k}", P.size, P.signature, P.tables)


def rename_ops(A, mapping):
    sig = Signature(tuple((mapping.get(s, s), a) for s, a in A.signature.ops))
    return FiniteAlgebra(A.name, A.size, sig, {mapping.get(s, s): t for s, t in A.tables.items()})


def nonindexed_product(A, B, rename=None, name=None):
    """Both operation sets on A x B: an op of A acts as itself on the first
    coordinate and as first-argument projection on the second, and
    symmetrically for the ops of B.  Constants put 0 on the alien side."""
    if rename:
        B = rename_ops(B, rename)
    clash = set(A.signature.symbols) & set(B.signature.symbols)
    if clash:
        raise AlgebraError(f"overlapping operation symbols {sorted(clash)} need a rename map")
    n = A.size * B.size
    tables = {}
    for own, other, first in ((A, B, True), (B, A, False)):
        for symbol, arity in own.signature.ops:
            grid = all_assignments(n, arity)
            code = np.zeros(grid.shape[0], dtype=np.int64)
            alien = np.zeros(grid.shape[0], dtype=np.int64)
            for j in range(arity):
                a, b = np.divmod(grid[:, j], B.size)
                mine, theirs = (a, b) if first else (b, a)
                code = code * own.size + mine
                if j == 0:
                    alien = theirs
            val = own.tables[symbol][code]
            tables[symbol] = val * B.size + alien if first else alien * B.size + val
    sig = Signature(A.signature.ops + B.signature.ops)
    return FiniteAlgebra(name or f"{A.name}(*){B.name}", n, sig, tables)


def reduct(A, symbols, name=None):
    sig = Signature(tuple((s, a) for s, a in A.signature.ops if s in symbols))
    return FiniteAlgebra(name or A.name, A.size, sig, {s: A.tables[s] for s in sig.symbols})


# ---------------------------------------------------------------- subalgebras

@dataclass(frozen=True)
class Subuniverse:
    """Elements in discovery order.  ``provenance[i]`` is the seed position
    (an int) or ``(symbol, operand indices into elements)``."""
    elements: tuple
    provenance: tuple

    def __len__(self):
        return len(self.elements)

    def as_set(self):
        return frozenset(self.elements)


def subalgebra_generate(A, seed, **caps):
    seed = list(dict.fromkeys(int(s) for s in seed))
    for s in seed:
        if not 0 <= s < A.size:
            raise AlgebraError(f"seed element {s} out of range")
    if not seed and not any(a == 0 for _, a in A.signature.ops):
        return Subuniverse((), ())
    layout = Layout.power([(A, 1)])
    cl = Closure(layout, np.array(seed, dtype=layout.dtype).reshape(-1, 1), **caps).run()
    symbols = A.signature.symbols
    prov = []
    for op, args in zip(cl.parent_op, cl.parent_args):
        prov.append(args[0] if op < 0 else (symbols[op], args))
    return Subuniverse(tuple(int(v) for v in cl.rows[:, 0]), tuple(prov))
