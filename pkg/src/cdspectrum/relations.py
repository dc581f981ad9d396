"""Binary relations on finite universes and the closure operators built on them.

Relations are boolean matrices; the kind of a relation (reflexive,
admissible, a congruence ...) is a checkable property, never a type,
because composing congruences leaves the class of congruences.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .closure import Closure, Layout
from .errors import AlgebraError, BudgetExceeded, CapExceeded

ALL_CONGRUENCES_CAP = 64


class BinRel:
    __slots__ = ("size", "bits", "_key")

    def __init__(self, bits):
        bits = np.array(bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] != bits.shape[1]:
            raise AlgebraError("relation matrix must be square")
        bits.setflags(write=False)
        object.__setattr__(self, "size", bits.shape[0])
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "_key", np.packbits(bits).tobytes())

    def __setattr__(self, key, value):
        raise AttributeError("BinRel is immutable")

    @classmethod
    def diagonal(cls, n):
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n):
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def from_pairs(cls, n, pairs):
        bits = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            bits[a, b] = True
        return cls(bits)

    def pairs(self):
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.bits))]

    def __contains__(self, pair):
        return bool(self.bits[pair[0], pair[1]])

    def __eq__(self, other):
        return isinstance(other, BinRel) and self.size == other.size and self._key == other._key

    def __hash__(self):
        return hash((self.size, self._key))

    def __le__(self, other):
        _same_size(self, other)
        return not np.any(self.bits & ~other.bits)

    def __ge__(self, other):
        return other <= self

    def __lt__(self, other):
        return self <= other and self != other

    def sort_key(self):
        return (int(self.bits.sum()), self.bits.ravel().tolist())

    def __len__(self):
        return int(self.bits.sum())

    def __str__(self):
        return "\n".join("".join("1" if v else "0" for v in row) for row in self.bits)

    def __repr__(self):
        return f"BinRel(size={self.size}, pairs={self.pairs()})"

    def is_reflexive(self):
        return bool(np.all(np.diag(self.bits)))

    def is_symmetric(self):
        return bool(np.array_equal(self.bits, self.bits.T))

    def is_transitive(self):
        return compose(self, self) <= self

    def is_equivalence(self):
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()


def _same_size(R, S):
    if R.size != S.size:
        raise AlgebraError(f"relation size mismatch: {R.size} vs {S.size}")


def compose(R, S):
    """(a, c) iff a R b and b S c for some b."""
    _same_size(R, S)
    prod = R.bits.astype(np.int32) @ S.bits.astype(np.int32)
    return BinRel(prod > 0)


def converse(R):
    return BinRel(R.bits.T)


def meet(R, S):
    _same_size(R, S)
    return BinRel(R.bits & S.bits)


def union(R, S):
    _same_size(R, S)
    return BinRel(R.bits | S.bits)


def transitive_closure(R):
    bits = R.bits.copy()
    n = R.size
    for k in range(n):  # Warshall
        bits |= bits[:, k:k + 1] & bits[k:k + 1, :]
    return BinRel(bits)


def compose_alt(R, S, m):
    """R o S o R o ... with exactly ``m`` factors; zero factors is the diagonal."""
    _same_size(R, S)
    if m < 0:
        raise AlgebraError("number of factors must be nonnegative")
    out = BinRel.diagonal(R.size)
    for i in range(m):
        out = compose(out, R if i % 2 == 0 else S)
    return out


def compose_all(rels, n=None):
    rels = list(rels)
    if not rels:
        if n is None:
            raise AlgebraError("empty composition needs a universe size")
        return BinRel.diagonal(n)
    out = rels[0]
    for R in rels[1:]:
        out = compose(out, R)
    return out


def power_rel(R, k):
    """R^k = R o R o ... (k factors); R^0 is the diagonal."""
    return compose_alt(R, R, k)


# ---------------------------------------------------------------- congruences

@dataclass(frozen=True)
class Congruence:
    """Partition as a block map; block ids follow least members in order."""
    size: int
    block: tuple

    def __post_init__(self):
        object.__setattr__(self, "block", _canonical(self.block))

    @classmethod
    def identity(cls, n):
        return cls(n, tuple(range(n)))

    @classmethod
    def total(cls, n):
        return cls(n, (0,) * n)

    @classmethod
    def from_rel(cls, R):
        if not R.is_equivalence():
            raise AlgebraError("relation is not an equivalence")
        block = [-1] * R.size
        for a in range(R.size):
            if block[a] < 0:
                for b in np.flatnonzero(R.bits[a]):
                    block[b] = a
        return cls(R.size, tuple(block))

    def rel(self):
        b = np.array(self.block)
        return BinRel(b[:, None] == b[None, :])

    def blocks(self):
        out = {}
        for a, b in enumerate(self.block):
            out.setdefault(b, []).append(a)
        return [out[k] for k in sorted(out)]

    def related(self, a, b):
        return self.block[a] == self.block[b]

    def __le__(self, other):
        return self.rel() <= other.rel()

    def nblocks(self):
        return len(set(self.block))

    def sort_key(self):
        return (-self.nblocks(), self.block)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks()) + "}"


def _canonical(block):
    ids = {}
    return tuple(ids.setdefault(b, len(ids)) for b in block)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def blocks(self):
        return tuple(self.find(a) for a in range(len(self.parent)))


def congruence_join(c1, c2):
    """Join of two congruences: the transitive closure of their union."""
    uf = _UnionFind(c1.size)
    for c in (c1, c2):
        first = {}
        for a, b in enumerate(c.block):
            if b in first:
                uf.union(first[b], a)
            else:
                first[b] = a
    return Congruence(c1.size, uf.blocks())


def congruence_meet(c1, c2):
    return Congruence(c1.size, tuple(zip(c1.block, c2.block)))


# ---------------------------------------------------------------- closures

def _square_closure(A, seed_pairs):
    layout = Layout.power([(A, 2)])
    seeds = [(a, a) for a in range(A.size)] + list(seed_pairs)
    cl = Closure(layout, np.array(seeds, dtype=np.int64).reshape(-1, 2)).run()
    bits = np.zeros((A.size, A.size), dtype=bool)
    bits[cl.rows[:, 0].astype(np.int64), cl.rows[:, 1].astype(np.int64)] = True
    return BinRel(bits)


def _pairs_of(pairs):
    if isinstance(pairs, BinRel):
        return pairs.pairs()
    return [(int(a), int(b)) for a, b in pairs]


def admissible_closure(A, pairs):
    """Least reflexive admissible relation containing ``pairs``."""
    pairs = _pairs_of(pairs)
    for a, b in pairs:
        if not (0 <= a < A.size and 0 <= b < A.size):
            raise AlgebraError(f"pair {(a, b)} outside the universe")
    return _square_closure(A, pairs)


def tolerance_generate(A, pairs):
    pairs = _pairs_of(pairs)
    return admissible_closure(A, pairs + [(b, a) for a, b in pairs])


def is_admissible(A, R):
    """Is R closed under every operation of A applied coordinatewise?"""
    if R.size != A.size:
        raise AlgebraError("relation and algebra sizes differ")
    pr = np.array(R.pairs(), dtype=np.int64).reshape(-1, 2)
    for symbol, arity in A.signature.ops:
        table = A.tables[symbol]
        if arity == 0:
            if not R.bits[table[0], table[0]]:
                return False
            continue
        if pr.shape[0] ** arity > 5_000_000:
            # fall back to generation for very large relations
            return _square_closure(A, pr.tolist()) <= R and R.is_reflexive()
        grid = np.indices((pr.shape[0],) * arity).reshape(arity, -1)
        left = np.zeros(grid.shape[1], dtype=np.int64)
        right = np.zeros(grid.shape[1], dtype=np.int64)
        for j in range(arity):
            left = left * A.size + pr[grid[j], 0]
            right = right * A.size + pr[grid[j], 1]
        if not np.all(R.bits[table[left], table[right]]):
            return False
    return True


def is_congruence(A, R):
    return R.is_equivalence() and is_admissible(A, R)


def _alternation_cost(A):
    top = max((a for _, a in A.signature.ops), default=0)
    return (A.size * A.size) ** top


def congruence_generate(A, pairs, method="auto"):
    """Least congruence containing ``pairs``.

    ``alternation`` alternates admissible closure in A x A with
    symmetric-transitive closure until nothing changes.  ``unionfind``
    merges blocks along unary polynomial translations.  ``auto`` picks
    alternation unless the square closure would be too expensive.
    """
    pairs = _pairs_of(pairs)
    for a, b in pairs:
        if not (0 <= a < A.size and 0 <= b < A.size):
            raise AlgebraError(f"pair {(a, b)} outside the universe")
    if method == "auto":
        method = "alternation" if _alternation_cost(A) <= 2_000_000 else "unionfind"
    if method == "alternation":
        R = BinRel.from_pairs(A.size, pairs) if pairs else BinRel.diagonal(A.size)
        while True:
            S = admissible_closure(A, R)
            S = transitive_closure(union(S, converse(S)))
            if S == R:
                return Congruence.from_rel(S)
            R = S
    if method == "unionfind":
        return _congruence_unionfind(A, pairs)
    raise ValueError(f"unknown method {method!r}")


def _congruence_unionfind(A, pairs):
    n = A.size
    uf = _UnionFind(n)
    queue = []
    for a, b in pairs:
        if uf.union(a, b):
            queue.append((a, b))
    # translations: f(c_1..a..c_r) for every op, position and context
    contexts = []
    for symbol, arity in A.signature.ops:
        if arity == 0:
            continue
        table = A.tables[symbol]
        others = np.indices((n,) * (arity - 1)).reshape(arity - 1, -1)
        for pos in range(arity):
            weights = [n ** (arity - 1 - j) for j in range(arity)]
            base = np.zeros(others.shape[1], dtype=np.int64)
            k = 0
            for j in range(arity):
                if j == pos:
                    continue
                base += others[k] * weights[j]
                k += 1
            contexts.append((table, base, weights[pos]))
    while queue:
        a, b = queue.pop()
        for table, base, w in contexts:
            fa = table[base + a * w]
            fb = table[base + b * w]
            diff = np.flatnonzero(fa != fb)
            for u, v in zip(fa[diff].tolist(), fb[diff].tolist()):
                if uf.union(u, v):
                    queue.append((u, v))
    return Congruence(n, uf.blocks())


def all_congruences(A, cap=ALL_CONGRUENCES_CAP, method="auto"):
    if A.size > cap:
        raise CapExceeded(f"all_congruences: universe {A.size} exceeds cap {cap}", count=A.size, cap=cap)
    found = {Congruence.identity(A.size)}
    principal = []
    for a in range(A.size):
        for b in range(a + 1, A.size):
            c = congruence_generate(A, [(a, b)], method=method)
            if c not in found:
                found.add(c)
                principal.append(c)
    frontier = list(found)
    while frontier:
        new = []
        for c in frontier:
            for p in principal:
                j = congruence_join(c, p)
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    return sorted(found, key=Congruence.sort_key)


# ---------------------------------------------------------------- enumeration

EXHAUSTIVE_LIMIT = 4
DEFAULT_PAIR_BUDGET = 2


def _exhaustive_reflexive_admissible(A):
    n = A.size
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = []
    for mask in range(1 << len(off)):
        bits = np.eye(n, dtype=bool)
        for i, (a, b) in enumerate(off):
            if mask >> i & 1:
                bits[a, b] = True
        R = BinRel(bits)
        if is_admissible(A, R):
            out.append(R)
    return sorted(out, key=BinRel.sort_key)


def default_budget(A):
    """``None`` means exhaustive; otherwise a number of generating pairs."""
    return None if A.size <= EXHAUSTIVE_LIMIT else DEFAULT_PAIR_BUDGET


def enumerate_reflexive_admissible(A, budget=None):
    """Yield distinct reflexive admissible relations.

    An integer budget ``p`` yields the closures of at most ``p``
    off-diagonal pairs, smallest generating sets first.  ``budget=None``
    is the default policy: every reflexive relation filtered for
    admissibility when ``n <= 4``, closures of at most two pairs otherwise.
    """
    n = A.size
    if budget is None:
        if n <= EXHAUSTIVE_LIMIT:
            yield from _exhaustive_reflexive_admissible(A)
            return
        budget = DEFAULT_PAIR_BUDGET
    if budget < 0:
        raise BudgetExceeded("budget must be nonnegative")
    seen = set()
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    for p in range(min(budget, len(off)) + 1):
        for subset in itertools.combinations(off, p):
            R = admissible_closure(A, subset)
            if R not in seen:
                seen.add(R)
                yield R


def is_exhaustive(A, budget):
    n = A.size
    if budget is None:
        return n <= EXHAUSTIVE_LIMIT
    return budget >= n * n - n


def tolerances(A, budget=None):
    return [R for R in enumerate_reflexive_admissible(A, budget) if R.is_symmetric()]


def congruence_rels(A):
    return [c.rel() for c in all_congruences(A)]
