"""Free algebras of finitely generated varieties.

F_V(n) for V = HSP(bases) is the subalgebra of the product of the powers
``A ** (A ** n)`` generated by the n projections.  An element is stored as
its table of values, one column per (base, assignment), with assignments in
row-major order (first generator slowest).
"""
from __future__ import annotations

import numpy as np

from .algebra import FiniteAlgebra, Node, Var, all_assignments
from .closure import Closure, Layout
from .errors import AlgebraError, CapExceeded

DEFAULT_MAX_ELEMENTS = 200_000
DEFAULT_MAX_WIDTH = 1 << 20
DEFAULT_MAX_WORK = 400_000_000


def tuple_width(bases, n):
    return sum(A.size ** n for A in bases)


class FreeAlgebra:
    """Free algebra on ``n`` generators, grown generation by generation.

    ``grow()`` adds one BFS generation and ``build()`` closes completely.
    Elements found so far are genuine term operations, so anything
    witnessed on a partial algebra is witnessed in the free algebra.
    """

    def __init__(self, bases, n, *, max_elements=DEFAULT_MAX_ELEMENTS,
                 max_width=DEFAULT_MAX_WIDTH, max_work=DEFAULT_MAX_WORK):
        bases = list(bases)
        if not bases:
            raise AlgebraError("need at least one base algebra")
        if n < 1:
            raise AlgebraError("need at least one generator")
        sig = bases[0].signature
        for A in bases[1:]:
            if A.signature != sig:
                raise AlgebraError("base algebras must share one signature")
        width = tuple_width(bases, n)
        if width > max_width:
            raise CapExceeded(
                f"free algebra on {n} generators needs tuple width {width} > cap {max_width}",
                width=width, count=0, cap=max_width,
            )
        self.bases = bases
        self.n = n
        self.signature = sig
        self.width = width
        self.caps = {"max_elements": max_elements, "max_width": max_width, "max_work": max_work}
        self.layout = Layout.power([(A, A.size ** n) for A in bases])
        self._grids = [all_assignments(A.size, n) for A in bases]
        seeds = np.concatenate([g for g in self._grids], axis=0).T  # (n, width)
        self._closure = Closure(self.layout, seeds, max_elements=max_elements, max_work=max_work)
        # projections coincide when every base is trivial
        self._gen_index = [self._closure.index_of(seeds[g]) for g in range(n)]
        self._label_cache = {}
        self._terms = {}

    # ------------------------------------------------------------ growth
    @property
    def complete(self):
        return self._closure.complete

    def grow(self):
        before = len(self)
        try:
            self._closure.step()
        except CapExceeded as exc:
            raise CapExceeded(
                f"free algebra F({self.n}) over {[A.name for A in self.bases]}: {exc} "
                f"(tuple width {self.width}, {len(self)} elements so far)",
                width=self.width, count=len(self), **{k: v for k, v in exc.details.items()
                                                     if k not in ("width", "count")},
            ) from None
        return len(self) - before

    def build(self):
        while not self.complete:
            self.grow()
        return self

    def __len__(self):
        return len(self._closure)

    @property
    def rows(self):
        return self._closure.rows

    @property
    def generation(self):
        return self._closure.generation

    def generator(self, g):
        """Element index of the ``g``-th generator."""
        return self._gen_index[g]

    def index_of(self, row):
        return self._closure.index_of(row)

    # ------------------------------------------------------------ provenance
    def provenance(self, e):
        op = self._closure.parent_op[e]
        args = self._closure.parent_args[e]
        if op < 0:
            return args[0]
        return (self.signature.ops[op][0], args)

    def element_term(self, e):
        if not 0 <= e < len(self):
            raise IndexError(f"element {e} out of range")
        stack = [e]
        while stack:
            i = stack[-1]
            if i in self._terms:
                stack.pop()
                continue
            p = self.provenance(i)
            if isinstance(p, int):
                self._terms[i] = Var(p)
                stack.pop()
                continue
            missing = [c for c in p[1] if c not in self._terms]
            if missing:
                stack.extend(missing)
                continue
            self._terms[i] = Node(p[0], tuple(self._terms[c] for c in p[1]))
            stack.pop()
        return self._terms[e]

    # ------------------------------------------------------------ coordinates
    def segments(self):
        """(base, column offset, assignment grid) per base algebra."""
        out = []
        for A, seg, grid in zip(self.bases, self.layout.segments, self._grids):
            out.append((A, seg.start, grid))
        return out

    def columns_where(self, predicate):
        """Column indices whose assignment satisfies ``predicate(grid) -> mask``."""
        cols = []
        for A, start, grid in self.segments():
            cols.append(start + np.flatnonzero(predicate(grid)))
        return np.concatenate(cols)

    def identified_columns(self, pairs):
        """Columns of assignments that agree on every identified generator pair."""
        pairs = list(pairs)

        def pred(grid):
            mask = np.ones(grid.shape[0], dtype=bool)
            for i, j in pairs:
                mask &= grid[:, i] == grid[:, j]
            return mask

        return self.columns_where(pred)

    def generations_done(self):
        """Index of the last generation fully explored."""
        return self._closure._gen - 1

    def prefix_count(self, g):
        """Number of elements discovered in generations ``<= g``."""
        gens = self._closure.generation
        return int(np.searchsorted(np.asarray(gens), g, side="right"))

    def labels(self, pairsets, count=None):
        """Block labels of the intersection of the congruences generated by
        each set of generator pairs, over the first ``count`` elements.

        The congruence of F(n) generated by pairs of generators is the kernel
        of the substitution identifying them, so two elements are related
        exactly when their tables agree on assignments that respect the
        identification.  Intersections agree on the union of those columns.
        """
        count = len(self) if count is None else count
        norm = frozenset(frozenset(tuple(sorted(p)) for p in ps) for ps in pairsets)
        key = (norm, count)
        if key in self._label_cache:
            return self._label_cache[key]
        cols = np.unique(np.concatenate(
            [self.identified_columns(ps) for ps in pairsets] or [np.zeros(0, dtype=np.int64)]
        )).astype(np.int64)
        if not pairsets:
            cols = np.arange(self.width)
        sub = np.ascontiguousarray(self.rows[:count][:, cols])
        if sub.shape[1] == 0:
            labels = np.zeros(count, dtype=np.int64)
        else:
            _, labels = np.unique(sub, axis=0, return_inverse=True)
            labels = labels.ravel().astype(np.int64)
        if len(self._label_cache) > 256:
            self._label_cache.clear()
        self._label_cache[key] = labels
        return labels

    def kernel_labels(self, pairs, count=None):
        return self.labels([list(pairs)], count)

    def value(self, e, base, assignment):
        """Value of element ``e`` in base ``base`` at the given assignment."""
        A = self.bases[base]
        idx = 0
        for a in assignment:
            idx = idx * A.size + a
        return int(self.rows[e, self.layout.segments[base].start + idx])

    # ------------------------------------------------------------ as an algebra
    def as_algebra(self, name=None):
        """Operation tables over element indices (complete algebras only)."""
        if not self.complete:
            raise AlgebraError("free algebra is not closed yet")
        N = len(self)
        tables = {}
        for symbol, arity in self.signature.ops:
            grid = all_assignments(N, arity)
            out = np.empty(grid.shape[0], dtype=np.int64)
            for s in range(0, grid.shape[0], 1 << 16):
                idx = grid[s:s + (1 << 16)]
                vals = self.layout.apply(symbol, arity, [self.rows[idx[:, j]] for j in range(arity)])
                out[s:s + len(idx)] = self._closure.indices_of(vals)
            tables[symbol] = out
        label = name or f"F{self.n}({','.join(A.name for A in self.bases)})"
        return FiniteAlgebra(label, N, self.signature, tables)


def free_algebra(bases, n, **caps):
    return FreeAlgebra(bases, n, **caps).build()


def element_term(F, e):
    return F.element_term(e)
