"""Breadth-first closure of a set of rows under coordinatewise operations.

Every subuniverse computation in the package goes through :class:`Closure`:
subalgebras of a finite algebra (rows of width 1), admissible relations
(rows of width 2 in the square) and free algebras (rows indexed by all
assignments of the generators).  Rows live in a power of one or more
finite algebras; a :class:`Layout` says which base algebra owns which
columns.

Discovery order is part of the contract: seeds first, then generation by
generation, operations in signature order and operand tuples in row-major
order (first operand slowest).  A generation only combines rows known when
it started, and a tuple is tried only if it involves at least one row
found in the previous generation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded

CHUNK = 1 << 16
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Segment:
    size: int
    tables: dict  # symbol -> flat np.ndarray of length size**arity
    start: int
    stop: int


class Layout:
    """Column layout of a power of finite algebras sharing a signature."""

    def __init__(self, signature, segments):
        self.signature = signature
        self.segments = list(segments)
        self.width = self.segments[-1].stop if self.segments else 0
        top = max((s.size for s in self.segments), default=1)
        self.dtype = np.uint8 if top <= 256 else (np.uint16 if top <= 65536 else np.uint32)

    @classmethod
    def power(cls, parts):
        """``parts`` is a list of (algebra, column count) pairs."""
        segments = []
        start = 0
        signature = None
        for alg, count in parts:
            if signature is None:
                signature = alg.signature
            elif alg.signature != signature:
                raise ValueError("all factors must share one signature")
            segments.append(Segment(alg.size, alg.tables, start, start + count))
            start += count
        return cls(signature, segments)

    def apply(self, symbol, arity, args):
        """Apply ``symbol`` coordinatewise; ``args`` are (c, width) arrays."""
        if arity == 0:
            out = np.empty((1, self.width), dtype=self.dtype)
            for seg in self.segments:
                out[:, seg.start:seg.stop] = seg.tables[symbol][0]
            return out
        count = args[0].shape[0]
        out = np.empty((count, self.width), dtype=self.dtype)
        for seg in self.segments:
            code = args[0][:, seg.start:seg.stop].astype(np.int64)
            for a in args[1:]:
                code *= seg.size
                code += a[:, seg.start:seg.stop]
            out[:, seg.start:seg.stop] = seg.tables[symbol][code]
        return out


def _packed_formula(layout, symbol, arity, weights):
    """Minterms of ``symbol`` per segment, for rows packed one bit per column."""
    parts = []
    for seg in layout.segments:
        mask = int(weights[seg.start:seg.stop].sum(dtype=np.uint64)) if seg.stop > seg.start else 0
        if mask == 0:
            continue
        table = seg.tables[symbol]
        codes = [c for c in range(1 << arity) if table[c] == 1]
        parts.append((np.uint64(mask), codes))
    return parts


def _apply_packed(parts, arity, words):
    out = np.zeros(words[0].shape, dtype=np.uint64)
    for mask, codes in parts:
        acc = np.zeros_like(out)
        for code in codes:
            term = np.full_like(out, mask)
            for j in range(arity):
                if (code >> (arity - 1 - j)) & 1:
                    term &= words[j]
                else:
                    term &= ~words[j]
            acc |= term
        out |= acc & mask
    return out


def _splitmix(x):
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class _Keyer:
    """Maps rows to uint64 keys; exact packing when the rows fit in 63 bits."""

    def __init__(self, layout):
        radices = []
        for seg in layout.segments:
            radices += [seg.size] * (seg.stop - seg.start)
        total = 1
        for r in radices:
            total *= max(r, 1)
        self.exact = total <= (1 << 64)
        self.binary = self.exact and all(r == 2 for r in radices)
        if self.exact:
            weights = []
            acc = 1
            for r in reversed(radices):
                weights.append(acc)
                acc *= max(r, 1)
            self.weights = np.array(weights[::-1], dtype=np.uint64)
        else:
            self.weights = np.array(
                [_splitmix(i) | 1 for i in range(len(radices))], dtype=np.uint64
            )

    def __call__(self, rows):
        if rows.shape[1] == 0:
            return np.zeros(rows.shape[0], dtype=np.uint64)
        with np.errstate(over="ignore"):
            return (rows.astype(np.uint64) * self.weights).sum(axis=1, dtype=np.uint64)


def fresh_tuple_count(n, lo, arity):
    return n ** arity - lo ** arity


def fresh_tuples(n, lo, arity, chunk=CHUNK):
    """Yield (c, arity) index arrays, in row-major order, of all tuples over
    ``range(n)`` having at least one entry ``>= lo``."""
    if arity == 0:
        if lo == 0:
            yield np.zeros((1, 0), dtype=np.int64)
        return
    if lo >= n:
        return
    starts, lengths = [], []
    prefixes = np.zeros(1, dtype=np.int64)
    for d in range(arity):
        block = n ** (arity - d - 1)
        starts.append((prefixes * n + lo) * block)
        lengths.append(np.full(prefixes.shape, (n - lo) * block, dtype=np.int64))
        if d + 1 < arity:
            prefixes = (prefixes[:, None] * n + np.arange(lo, dtype=np.int64)[None, :]).ravel()
    starts = np.concatenate(starts)
    lengths = np.concatenate(lengths)
    order = np.argsort(starts, kind="stable")
    starts, lengths = starts[order], lengths[order]
    # split long ranges so that every piece fits in one chunk
    pieces = -(-lengths // chunk)
    if pieces.max() > 1:
        rep = np.repeat(np.arange(len(starts)), pieces)
        offs = np.arange(len(rep)) - np.repeat(np.cumsum(pieces) - pieces, pieces)
        new_starts = starts[rep] + offs * chunk
        new_lengths = np.minimum(chunk, lengths[rep] - offs * chunk)
        starts, lengths = new_starts, new_lengths
    cum = np.cumsum(lengths)
    batch = (cum - lengths) // chunk
    bounds = np.flatnonzero(np.diff(batch)) + 1
    for sel in np.split(np.arange(len(starts)), bounds):
        s, ln = starts[sel], lengths[sel]
        total = int(ln.sum())
        local = np.cumsum(ln) - ln
        flat = np.repeat(s - local, ln) + np.arange(total, dtype=np.int64)
        out = np.empty((total, arity), dtype=np.int64)
        for j in range(arity - 1, -1, -1):
            flat, out[:, j] = np.divmod(flat, n)
        yield out


class Closure:
    """Incremental BFS closure; call :meth:`step` or :meth:`run`."""

    def __init__(self, layout, seeds, *, max_elements=None, max_work=None):
        self.layout = layout
        self.max_elements = max_elements
        self.max_work = max_work
        self.work = 0
        self._keyer = _Keyer(layout)
        self._parts = [np.zeros((0, layout.width), dtype=layout.dtype)]
        self._words = []  # exact keys in index order, binary layouts only
        self._count = 0
        self._keys = np.zeros(0, dtype=np.uint64)
        self._key_idx = np.zeros(0, dtype=np.int64)
        self.parent_op = []
        self.parent_args = []
        self.generation = []
        self._frontier_lo = 0
        self._gen = 0
        self.complete = False
        seeds = np.asarray(seeds, dtype=layout.dtype).reshape(-1, layout.width)
        for i in range(seeds.shape[0]):
            self._absorb(seeds[i:i + 1], np.array([[i]]), -1)
        # seed provenance records the seed position
        self._gen = 1

    @property
    def rows(self):
        if len(self._parts) > 1:
            self._parts = [np.concatenate(self._parts)]
        return self._parts[0]

    @property
    def _rows(self):
        return self.rows

    def __len__(self):
        return self._count

    def index_of(self, row):
        """Index of ``row`` or -1 when it has not been discovered."""
        row = np.asarray(row, dtype=self.layout.dtype).reshape(1, -1)
        key = self._keyer(row)[0]
        pos = np.searchsorted(self._keys, key)
        if pos < len(self._keys) and self._keys[pos] == key:
            i = int(self._key_idx[pos])
            if np.array_equal(self._rows[i], row[0]):
                return i
        return -1

    def indices_of(self, rows):
        """Vectorized :meth:`index_of` over the rows of a 2-d array."""
        rows = np.ascontiguousarray(rows, dtype=self.layout.dtype)
        keys = self._keyer(rows)
        pos_c, hit = self._lookup(keys)
        out = np.full(len(rows), -1, dtype=np.int64)
        idx = self._key_idx[pos_c[hit]].astype(np.int64)
        ok = np.all(self.rows[idx] == rows[hit], axis=1)
        out[np.flatnonzero(hit)[ok]] = idx[ok]
        return out

    def _unpack(self, words):
        shifts = np.arange(self.layout.width - 1, -1, -1, dtype=np.uint64)
        return ((words[:, None] >> shifts[None, :]) & np.uint64(1)).astype(self.layout.dtype)

    def _lookup(self, uk):
        """Positions in the sorted key array and hit mask for sorted ``uk``."""
        pos = np.searchsorted(self._keys, uk)
        if not len(self._keys):
            return pos, np.zeros(len(uk), dtype=bool)
        pos_c = np.minimum(pos, len(self._keys) - 1)
        return pos_c, self._keys[pos_c] == uk

    def _fresh_exact(self, keys):
        # sorted needles keep the lookup cache friendly
        srt = np.sort(keys)
        keep = np.ones(len(srt), dtype=bool)
        keep[1:] = srt[1:] != srt[:-1]
        uk = srt[keep]
        _, hit = self._lookup(uk)
        if hit.all():
            return None
        cand = np.flatnonzero(np.isin(keys, uk[~hit], assume_unique=False))
        _, first = np.unique(keys[cand], return_index=True)
        return cand[np.sort(first)]

    def _fresh_hashed(self, keys, rows):
        uk, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        inverse = inverse.ravel()
        if not np.array_equal(rows[first[inverse]], rows):
            raise RuntimeError("hash collision in closure keys")
        pos_c, hit = self._lookup(uk)
        if hit.any():
            known = self.rows[self._key_idx[pos_c[hit]]]
            if not np.array_equal(known, rows[first[hit]]):
                raise RuntimeError("hash collision in closure keys")
        if hit.all():
            return None
        return np.sort(first[~hit])

    def _absorb(self, rows, tuples, op_index, keys=None):
        """Append rows not seen before, in first-occurrence order.

        Binary layouts may pass packed ``keys`` with ``rows=None``.
        """
        if keys is None:
            keys = self._keyer(rows)
        if self._keyer.exact:
            picked = self._fresh_exact(keys)
        else:
            picked = self._fresh_hashed(keys, rows)
        if picked is None:
            return 0
        start = self._count
        if self.max_elements is not None and start + len(picked) > self.max_elements:
            raise CapExceeded(
                f"closure exceeded {self.max_elements} elements",
                width=self.layout.width, count=start, cap=self.max_elements,
            )
        new_keys = keys[picked]
        self._parts.append(rows[picked] if rows is not None else self._unpack(new_keys))
        self._count += len(picked)
        if self._keyer.binary:
            self._words.append(new_keys)
        o = np.argsort(new_keys, kind="stable")
        ins = np.searchsorted(self._keys, new_keys[o])
        self._keys = np.insert(self._keys, ins, new_keys[o])
        self._key_idx = np.insert(self._key_idx, ins, np.arange(start, start + len(picked))[o])
        for t in tuples[picked].tolist():
            self.parent_op.append(op_index)
            self.parent_args.append(tuple(t))
            self.generation.append(self._gen)
        return len(picked)

    def step(self):
        """Run one generation.  Returns the number of new rows."""
        if self.complete:
            return 0
        n = len(self)
        lo = self._frontier_lo
        pending = 0
        for op_index, (symbol, arity) in enumerate(self.layout.signature.ops):
            if arity == 0 and self._gen > 1:
                continue
            pending += fresh_tuple_count(n, lo, arity) if arity else 1
        if self.max_work is not None and self.work + pending > self.max_work:
            raise CapExceeded(
                f"closure work exceeded {self.max_work} operation applications",
                width=self.layout.width, count=n, cap=self.max_work,
            )
        rows = self.rows
        words = np.concatenate(self._words) if self._keyer.binary else None
        added = 0
        for op_index, (symbol, arity) in enumerate(self.layout.signature.ops):
            if arity == 0:
                if self._gen == 1:
                    out = self.layout.apply(symbol, 0, [])
                    added += self._absorb(out, np.zeros((1, 0), dtype=np.int64), op_index)
                continue
            if words is not None:
                parts = _packed_formula(self.layout, symbol, arity, self._keyer.weights)
                for idx in fresh_tuples(n, lo, arity):
                    out = _apply_packed(parts, arity, [words[idx[:, j]] for j in range(arity)])
                    added += self._absorb(None, idx, op_index, keys=out)
                continue
            for idx in fresh_tuples(n, lo, arity):
                out = self.layout.apply(symbol, arity, [rows[idx[:, j]] for j in range(arity)])
                added += self._absorb(out, idx, op_index)
        self.work += pending
        self._frontier_lo = n
        self._gen += 1
        if added == 0:
            self.complete = True
        return added

    def run(self):
        while not self.complete:
            self.step()
        return self
