"""Decision procedures for congruence identities of finitely generated varieties.

A congruence inclusion whose left side is ``alpha ^ (C1 * ... * Cm)`` holds
throughout a variety iff it holds in the free algebra F(m+1) for the
congruences generated by the obvious pairs of generators.  In a free algebra
the congruence generated by pairs of generators is the kernel of the
substitution identifying them, so membership is read off the element tables
(see :meth:`FreeAlgebra.labels`).  Kernels are exact on any subset of F,
hence a witness found among the first generations of F is a genuine witness;
a negative answer needs the whole of F.

Every search walks the generation prefixes of F in order and reports the
first prefix that decides the question.  Results therefore do not depend on
how far a shared free algebra happens to have been grown already.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import identity as dsl
from . import relations as rel
from .algebra import Var, holds_identity, identity_counterexample, substitute
from .errors import AlgebraError, CapExceeded, ParseError
from .free import FreeAlgebra

VARIANTS = ("J", "Jconv", "Jr", "Jrconv", "D", "DayLevel", "T")

_CACHE = {}
_CACHE_LIMIT = 12


def shared_free_algebra(bases, n, caps=None):
    """Free algebra shared between computations with the same inputs and caps."""
    caps = dict(caps or {})
    key = (tuple(bases), n, tuple(sorted(caps.items())))
    F = _CACHE.get(key)
    if F is None:
        F = FreeAlgebra(bases, n, **caps)
        if len(_CACHE) >= _CACHE_LIMIT:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = F
    return F


def clear_cache():
    _CACHE.clear()


def _prefixes(F):
    """Yield ``(count, final)`` for generation prefixes 0, 1, 2, ... of F.

    ``final`` is True once the prefix is all of F.  Grows F on demand, so
    cap errors surface here.
    """
    g = 0
    while True:
        while F.generations_done() < g and not F.complete:
            F.grow()
        count = F.prefix_count(g)
        final = F.complete and count == len(F)
        yield count, final
        if final:
            return
        g += 1


def _names(bases):
    return [A.name for A in bases]


def _caps_of(F):
    return dict(F.caps)


# ---------------------------------------------------------------- results

@dataclass
class Witness:
    """Chain ``e0 .. e_{k+1}`` of elements of F(n) linking two generators."""
    free: FreeAlgebra = field(repr=False)
    m: int
    k: int
    variant: str
    chain: tuple
    labels: tuple  # relation per step, in identity notation
    prefix: int  # number of elements of F the chain was found among

    def to_dict(self):
        return {
            "generators": self.free.n,
            "chain": list(self.chain),
            "relations": list(self.labels),
            "prefix": self.prefix,
        }


@dataclass
class SpectrumResult:
    variant: str
    m: int
    value: object  # int, or None when the search exceeded k_max
    k_max: int
    algebras: list
    witness: object = None
    terms: object = None
    caps: dict = field(default_factory=dict)
    budget: object = None
    exhaustive: object = None
    details: dict = field(default_factory=dict)
    timing_ms: float = 0.0

    @property
    def exceeded(self):
        return self.value is None

    def to_dict(self, timings=False):
        out = {
            "variant": self.variant,
            "m": self.m,
            "value": "exceeded" if self.value is None else self.value,
            "k_max": self.k_max,
            "algebras": list(self.algebras),
            "caps": dict(self.caps),
        }
        if self.budget is not None or self.exhaustive is not None:
            out["budget"] = self.budget
            out["exhaustive"] = self.exhaustive
        if self.witness is not None:
            out["witness"] = self.witness.to_dict() if hasattr(self.witness, "to_dict") else self.witness
        if self.terms is not None:
            out["terms"] = [str(t) for t in self.terms]
        if self.details:
            out["details"] = self.details
        if timings:
            out["timing_ms"] = round(self.timing_ms, 3)
        return out


# ---------------------------------------------------------------- (m+1,k+1)-dist

def _dist_pairs(m):
    alpha = [(0, m + 1)]
    beta = [(i, i + 1) for i in range(0, m + 1, 2)]
    gamma = [(i, i + 1) for i in range(1, m + 1, 2)]
    return alpha, beta, gamma


class _DistProblem:
    """(y0, y_{m+1}) in a^b * a^c * ... inside F(m+2)."""

    def __init__(self, bases, m, variant, caps):
        if m < 0:
            raise AlgebraError("m must be nonnegative")
        if variant not in ("standard", "converse"):
            raise AlgebraError(f"unknown variant {variant!r}")
        self.m = m
        self.variant = variant
        self.F = shared_free_algebra(bases, m + 2, caps)
        alpha, beta, gamma = _dist_pairs(m)
        if variant == "standard":
            self.rels = ([alpha, beta], [alpha, gamma])
            self.names = ("a^b", "a^c")
        else:
            self.rels = ([alpha, gamma], [alpha, beta])
            self.names = ("a^c", "a^b")
        self.source = self.F.generator(0)
        self.target = self.F.generator(m + 1)

    def layers(self, count, max_steps):
        """Reachability layers from y0; returns (layers, steps to target or None)."""
        labs = [self.F.labels(r, count) for r in self.rels]
        reach = np.zeros(count, dtype=bool)
        reach[self.source] = True
        layers = [reach]
        if reach[self.target]:
            return labs, layers, 0
        for t in range(max_steps):
            L = labs[t % 2]
            nxt = np.isin(L, L[reach])
            layers.append(nxt)
            if nxt[self.target]:
                return labs, layers, t + 1
            if len(layers) >= 3 and np.array_equal(nxt, layers[-2]) and np.array_equal(nxt, layers[-3]):
                break
            reach = nxt
        return labs, layers, None

    def witness(self, count, steps, k):
        labs, layers, j = self.layers(count, steps)
        assert j is not None and j <= steps
        chain = [0] * (j + 1)
        chain[j] = self.target
        for t in range(j - 1, -1, -1):
            L = labs[t % 2]
            cand = layers[t] & (L == L[chain[t + 1]])
            chain[t] = int(np.flatnonzero(cand)[0])
        chain = chain[:1] if j == 0 else chain
        while len(chain) < k + 2:
            chain.append(self.target)
        labels = tuple(self.names[t % 2] for t in range(k + 1))
        return Witness(self.F, self.m, k, self.variant, tuple(chain), labels, count)


def check_dist(bases, m, k, variant="standard", caps=None):
    """Decide (m+1,k+1)-dist (or its converse) for the variety of ``bases``.

    Returns a :class:`Witness` chain, or None when the identity fails.
    Raises CapExceeded when F(m+2) is too large to settle a failure.
    """
    if k < 0:
        raise AlgebraError("k must be nonnegative")
    prob = _DistProblem(bases, m, variant, caps)
    for count, final in _prefixes(prob.F):
        _, _, j = prob.layers(count, k + 1)
        if j is not None:
            return prob.witness(count, k + 1, k)
        # a single step is a pair test, exact on any prefix
        if k == 0 or final:
            return None
    return None


def jonsson_level(bases, m, k_max, variant="standard", caps=None, cross_check=True):
    """Least k <= k_max with (m+1,k+1)-dist (J, or J-converse)."""
    if k_max < 0:
        raise AlgebraError("k_max must be nonnegative")
    t0 = time.perf_counter()
    prob = _DistProblem(bases, m, variant, caps)
    best = None
    for count, final in _prefixes(prob.F):
        limit = k_max + 1 if best is None else best[0] - 1
        if limit < 0:
            break
        _, _, j = prob.layers(count, limit)
        if j is not None:
            best = (j, count)
        # steps <= 1 are pair tests, exact on every prefix
        if best is not None and best[0] <= 2:
            break
        if final:
            break
    name = "J" if variant == "standard" else "Jconv"
    result = SpectrumResult(name, m, None, k_max, _names(bases), caps=_caps_of(prob.F))
    if best is not None:
        k = max(best[0] - 1, 0)
        result.value = k
        result.witness = prob.witness(best[1], best[0], k)
        result.terms = extract_chain_terms(result.witness)
    if cross_check and m == 1 and variant == "standard":
        chain = find_terms(bases, "jonsson", max_len=k_max + 2, caps=caps)
        other = None if not chain.found else chain.length - 2
        if other != result.value:
            raise AlgebraError(
                f"internal inconsistency: J(1) = {result.value} by free-algebra membership "
                f"but {other} by term search"
            )
        result.details["term_search"] = other
    result.timing_ms = (time.perf_counter() - t0) * 1000
    return result


def _sigma_beta(j):
    return j - (j % 2)


def _sigma_gamma(j):
    return j if j == 0 or j % 2 == 1 else j - 1


def chain_identities(terms, m, variant="standard"):
    """The identities (B1)-(B4) for a chain t_0..t_{k+1} of (m+2)-ary terms,
    as (label, lhs, rhs) triples."""
    n = m + 2
    xs = [Var(i) for i in range(n)]
    out = [("B1", terms[0], xs[0])]
    closing = xs[:-1] + [xs[0]]
    for i, t in enumerate(terms):
        out.append((f"B2[{i}]", substitute(t, closing), xs[0]))
    sb = [xs[_sigma_beta(j)] for j in range(n)]
    sg = [xs[_sigma_gamma(j)] for j in range(n)]
    for i in range(len(terms) - 1):
        even = i % 2 == 0
        sigma = sb if even == (variant == "standard") else sg
        out.append((f"B3[{i}]", substitute(terms[i], sigma), substitute(terms[i + 1], sigma)))
    out.append(("B4", terms[-1], xs[-1]))
    return out


def extract_chain_terms(w):
    """Terms t_0..t_{k+1} of a dist witness, verified against (B1)-(B4)."""
    F = w.free
    n = F.n
    terms = [F.element_term(e) for e in w.chain]
    # the endpoints are the generators themselves
    terms[0] = Var(0)
    terms[-1] = Var(n - 1)
    for label, lhs, rhs in chain_identities(terms, w.m, w.variant):
        if not holds_identity(F.bases, lhs, rhs, nvars=n):
            bad = identity_counterexample(F.bases, lhs, rhs, nvars=n)
            raise AlgebraError(f"extracted chain violates {label}: {bad}")
    return terms


# ---------------------------------------------------------------- term search

SCHEMES = ("jonsson", "directed_jonsson", "gumm", "pj")


@dataclass
class TermChain:
    scheme: str
    found: bool
    terms: list
    elements: list
    max_len: int
    algebras: list

    @property
    def length(self):
        return len(self.terms)

    def to_dict(self):
        return {
            "scheme": self.scheme,
            "found": self.found,
            "length": self.length if self.found else None,
            "max_len": self.max_len,
            "algebras": list(self.algebras),
            "terms": [str(t) for t in self.terms],
            "elements": list(self.elements),
        }


class _Ternary:
    """Views of F(3) used by term search, keyed by byte strings."""

    def __init__(self, F):
        xyx, xxz, xzz, xs, zs = [], [], [], [], []
        for A, start, _ in F.segments():
            s = A.size
            for a in range(s):
                for b in range(s):
                    xyx.append(start + (a * s + b) * s + a)
                    xxz.append(start + (a * s + a) * s + b)
                    xzz.append(start + (a * s + b) * s + b)
                    xs.append(a)
                    zs.append(b)
        rows = F.rows
        dt = rows.dtype
        self.j2 = np.all(rows[:, xyx] == np.array(xs, dtype=dt), axis=1)
        self.key = {
            "xxz": [r.tobytes() for r in rows[:, xxz]],
            "xzz": [r.tobytes() for r in rows[:, xzz]],
        }
        self.x_key = np.array(xs, dtype=dt).tobytes()
        self.z_key = np.array(zs, dtype=dt).tobytes()
        self.n = len(F)
        self.groups = {}
        for kind, keys in self.key.items():
            g = {}
            for e in range(self.n):
                if self.j2[e]:
                    g.setdefault(keys[e], []).append(e)
            self.groups[kind] = g

    def step(self, layer, kind):
        """J2 elements linked to ``layer`` by equality of the ``kind`` view."""
        out = set()
        for e in layer:
            out.update(self.groups[kind].get(self.key[kind][e], ()))
        return out

    def back(self, layer, kind, succ, key_kind=None):
        want = self.key[kind if key_kind is None else key_kind][succ]
        return min(e for e in layer if self.key[kind][e] == want)


def _j3_kind(i):
    return "xxz" if i % 2 == 0 else "xzz"


def find_terms(bases, scheme, max_len=8, caps=None):
    """Shortest term chain for ``scheme`` found by search in F(3)."""
    if scheme == "directed":
        scheme = "directed_jonsson"
    if scheme not in SCHEMES:
        raise AlgebraError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")
    if max_len < 2:
        raise AlgebraError("max_len must be at least 2")
    F = shared_free_algebra(bases, 3, caps).build()
    V = _Ternary(F)
    start, target = F.generator(0), F.generator(2)
    elements = None
    if scheme == "jonsson":
        elements = _search_jonsson(V, start, target, max_len)
    elif scheme == "directed_jonsson":
        elements = _search_directed(V, start, target, max_len)
    elif scheme == "gumm":
        elements = _search_gumm(V, target, max_len)
    else:
        elements = _search_pj(V)
    if elements is None:
        return TermChain(scheme, False, [], [], max_len, _names(bases))
    terms = [F.element_term(e) for e in elements]
    if scheme != "pj":
        terms[-1] = Var(2)
        if scheme != "gumm":
            terms[0] = Var(0)
    for label, lhs, rhs in scheme_identities(scheme, terms):
        if not holds_identity(bases, lhs, rhs, nvars=3):
            raise AlgebraError(f"extracted {scheme} chain violates {label}")
    return TermChain(scheme, True, terms, list(elements), max_len, _names(bases))


def _search_jonsson(V, start, target, max_len):
    layers = [{start}]
    for t in range(max_len - 1):
        nxt = V.step(layers[-1], _j3_kind(t))
        layers.append(nxt)
        if target in nxt:
            chain = [target]
            for s in range(t, -1, -1):
                chain.append(V.back(layers[s], _j3_kind(s), chain[-1]))
            return chain[::-1]
        if len(layers) >= 3 and nxt == layers[-2] == layers[-3]:
            return None
    return None


def _search_directed(V, start, target, max_len):
    layers = [{start}]
    seen = []
    for t in range(max_len - 1):
        nxt = set()
        for e in layers[-1]:
            nxt.update(V.groups["xxz"].get(V.key["xzz"][e], ()))
        layers.append(nxt)
        if target in nxt:
            chain = [target]
            for s in range(t, -1, -1):
                chain.append(V.back(layers[s], "xzz", chain[-1], key_kind="xxz"))
            return chain[::-1]
        frozen = frozenset(nxt)
        if not nxt or frozen in seen:
            return None
        seen.append(frozen)
    return None


def _gumm_p_candidates(V):
    return {e for e in range(V.n) if V.key["xzz"][e] == V.x_key}


def _search_gumm(V, target, max_len):
    P = _gumm_p_candidates(V)
    first = set()
    wanted = {V.key["xxz"][p] for p in P}
    for key in wanted:
        first.update(V.groups["xxz"].get(key, ()))
    layers = [P, first]
    t = 1
    while True:
        if target in layers[t]:
            chain = [target]
            for s in range(t - 1, 0, -1):
                chain.append(V.back(layers[s], _j3_kind(s), chain[-1]))
            chain.append(V.back(P, "xxz", chain[-1]))
            return chain[::-1]
        if t + 1 >= max_len:
            return None
        nxt = V.step(layers[t], _j3_kind(t))
        layers.append(nxt)
        if len(layers) >= 4 and nxt == layers[-2] == layers[-3]:
            return None
        t += 1


def _search_pj(V):
    P = sorted(_gumm_p_candidates(V))
    J = [e for e in range(V.n) if V.j2[e] and V.key["xzz"][e] == V.z_key]
    for p in P:
        for j in J:
            if V.key["xxz"][p] == V.key["xxz"][j]:
                return [p, j]
    return None


def scheme_identities(scheme, terms):
    """(label, lhs, rhs) identities over x, y, z defining each term scheme."""
    x, y, z = Var(0), Var(1), Var(2)

    def at(t, a, b, c):
        return substitute(t, [a, b, c])

    out = []
    if scheme in ("jonsson", "directed_jonsson"):
        out.append(("J1", terms[0], x))
        for i, t in enumerate(terms):
            out.append((f"J2[{i}]", at(t, x, y, x), x))
        for i in range(len(terms) - 1):
            if scheme == "jonsson":
                if i % 2 == 0:
                    out.append((f"J3[{i}]", at(terms[i], x, x, z), at(terms[i + 1], x, x, z)))
                else:
                    out.append((f"J3[{i}]", at(terms[i], x, z, z), at(terms[i + 1], x, z, z)))
            else:
                out.append((f"D[{i}]", at(terms[i], x, z, z), at(terms[i + 1], x, x, z)))
        out.append(("J4", terms[-1], z))
    elif scheme == "gumm":
        p, js = terms[0], terms[1:]
        out.append(("P1", at(p, x, z, z), x))
        out.append(("P2", at(p, x, x, z), at(js[0], x, x, z)))
        for i, t in enumerate(js, start=1):
            out.append((f"J2[{i}]", at(t, x, y, x), x))
        for i in range(1, len(js)):
            a, b = js[i - 1], js[i]
            if i % 2 == 0:
                out.append((f"J3[{i}]", at(a, x, x, z), at(b, x, x, z)))
            else:
                out.append((f"J3[{i}]", at(a, x, z, z), at(b, x, z, z)))
        out.append(("J4", js[-1], z))
    elif scheme == "pj":
        p, j = terms
        out += [
            ("pj1", at(p, x, y, y), x),
            ("pj2", at(p, x, x, y), at(j, x, x, y)),
            ("pj3", at(j, x, y, y), y),
            ("pj4", at(j, x, y, x), x),
        ]
    else:
        raise AlgebraError(f"unknown scheme {scheme!r}")
    return out


# ---------------------------------------------------------------- generic identities

@dataclass
class GenericResult:
    holds: bool
    scheme: object
    chain: tuple = ()
    factors: tuple = ()
    prefix: int = 0
    algebras: list = field(default_factory=list)

    def to_dict(self):
        return {
            "identity": str(self.scheme),
            "holds": self.holds,
            "chain": list(self.chain),
            "factors": list(self.factors),
            "prefix": self.prefix,
            "algebras": list(self.algebras),
        }


def _strip_converse(e):
    """Converses only matter on compositions; every variable is a congruence."""
    e = dsl.push_converse(e)

    def go(x):
        if isinstance(x, dsl.RConverse):
            return x.child
        if isinstance(x, dsl.RMeet):
            return dsl.RMeet(tuple(go(i) for i in x.items))
        if isinstance(x, dsl.RCompose):
            return dsl.RCompose(tuple(go(i) for i in x.items))
        return x

    return go(e)


def scheme_pairs(scheme):
    """Generator pairs for each variable of a scheme on x_0..x_m."""
    m = scheme.m
    pairs = {}
    for i, block in enumerate(scheme.chain, start=1):
        for v in block:
            pairs.setdefault(v, []).append((i - 1, i))
    if scheme.alpha is not None:
        pairs.setdefault(scheme.alpha, []).append((0, m))
    for v in dsl.variables(scheme.rhs):
        pairs.setdefault(v, [])
    return pairs


class _Evaluator:
    def __init__(self, F, pairs, count):
        self.F = F
        self.pairs = pairs
        self.count = count

    def _atoms(self, item):
        if isinstance(item, dsl.RVar):
            return True
        return isinstance(item, dsl.RConst)

    def labels(self, names):
        return self.F.labels([self.pairs[v] for v in sorted(names)], self.count)

    def image(self, e, S):
        if not S.any():
            return S.copy()
        if isinstance(e, dsl.RConst):
            return S.copy() if e.value == 0 else np.ones(self.count, dtype=bool)
        if isinstance(e, dsl.RVar):
            L = self.labels({e.name})
            return np.isin(L, L[S])
        if isinstance(e, dsl.RCompose):
            for item in e.items:
                S = self.image(item, S)
            return S
        if isinstance(e, dsl.RMeet):
            if all(self._atoms(i) for i in e.items):
                if any(isinstance(i, dsl.RConst) and i.value == 0 for i in e.items):
                    return S.copy()
                names = {i.name for i in e.items if isinstance(i, dsl.RVar)}
                if not names:
                    return np.ones(self.count, dtype=bool)
                L = self.labels(names)
                return np.isin(L, L[S])
            out = np.zeros(self.count, dtype=bool)
            for a in np.flatnonzero(S):
                one = np.zeros(self.count, dtype=bool)
                one[a] = True
                acc = np.ones(self.count, dtype=bool)
                for item in e.items:
                    acc &= self.image(item, one)
                    if not acc.any():
                        break
                out |= acc
            return out
        raise AlgebraError(f"cannot evaluate {e!r}")


def _rhs_factors(rhs):
    return list(rhs.items) if isinstance(rhs, dsl.RCompose) else [rhs]


def check_identity_generic(bases, scheme, caps=None):
    """Decide ``alpha ^ (C1 * ... * Cm) <= rhs`` for the variety of ``bases``.

    ``scheme`` is an :class:`InclusionScheme` or DSL text.  Variables absent
    from the left side denote the least congruence.
    """
    if isinstance(scheme, str):
        scheme = dsl.parse_inclusion(scheme)
    m = scheme.m
    if m < 1:
        raise ParseError("left side shape: need at least one chain factor")
    F = shared_free_algebra(bases, m + 1, caps)
    pairs = scheme_pairs(scheme)
    factors = [_strip_converse(f) for f in _rhs_factors(scheme.rhs)]
    source, target = F.generator(0), F.generator(m)
    for count, final in _prefixes(F):
        ev = _Evaluator(F, pairs, count)
        S = np.zeros(count, dtype=bool)
        S[source] = True
        layers = [S]
        for f in factors:
            layers.append(ev.image(f, layers[-1]))
        if layers[-1][target]:
            chain = [target]
            for i in range(len(factors) - 1, -1, -1):
                for a in np.flatnonzero(layers[i]):
                    one = np.zeros(count, dtype=bool)
                    one[a] = True
                    if ev.image(factors[i], one)[chain[-1]]:
                        chain.append(int(a))
                        break
            return GenericResult(True, scheme, tuple(chain[::-1]),
                                 tuple(str(f) for f in factors), count, _names(bases))
        if final:
            return GenericResult(False, scheme, (), tuple(str(f) for f in factors), count, _names(bases))
    raise AssertionError("unreachable")


def _ab(x, y):
    return dsl.meet(dsl.RVar(x), dsl.RVar(y))


def dist_scheme(m, k, variant="standard"):
    """(m+1,k+1)-dist as an inclusion scheme."""
    chain = tuple(frozenset("b" if i % 2 == 0 else "c") for i in range(m + 1))
    first, second = (_ab("a", "b"), _ab("a", "c"))
    if variant == "converse":
        first, second = second, first
    return dsl.InclusionScheme("a", chain, dsl.alternate(first, second, k + 1))


def day_scheme(m, k):
    """a ^ (b * a^c * b * ...) <= a^b * a^c * ... (m factors, k factors)."""
    chain = tuple(frozenset("b") if i % 2 == 0 else frozenset("ac") for i in range(m))
    return dsl.InclusionScheme("a", chain, dsl.alternate(_ab("a", "b"), _ab("a", "c"), k))


def tschantz_scheme(m, k):
    """a ^ (b * c * ...) <= a^(c*b) * (a^c * a^b * ...) with k factors in the tail."""
    chain = tuple(frozenset("b" if i % 2 == 0 else "c") for i in range(m))
    head = dsl.meet(dsl.RVar("a"), dsl.compose(dsl.RVar("c"), dsl.RVar("b")))
    tail = dsl.alternate(_ab("a", "c"), _ab("a", "b"), k)
    rhs = head if k == 0 else dsl.compose(head, tail)
    return dsl.InclusionScheme("a", chain, rhs)


def _generic_level(bases, m, k_max, make, variant, caps):
    t0 = time.perf_counter()
    if k_max < 0:
        raise AlgebraError("k_max must be nonnegative")
    probe = make(m, 0)
    F = shared_free_algebra(bases, probe.m + 1, caps)
    found = None
    for count, final in _prefixes(F):
        hi = k_max if found is None else found[0] - 1
        for k in range(0, hi + 1):
            if _generic_on_prefix(F, make(m, k), count):
                found = (k, count)
                break
        if found is not None and found[0] == 0:
            break
        if final:
            break
    res = SpectrumResult(variant, m, None, k_max, _names(bases), caps=_caps_of(F))
    if found is not None:
        res.value = found[0]
        res.details["identity"] = str(make(m, found[0]))
        res.details["prefix"] = found[1]
    res.timing_ms = (time.perf_counter() - t0) * 1000
    return res


def _generic_on_prefix(F, scheme, count):
    ev = _Evaluator(F, scheme_pairs(scheme), count)
    S = np.zeros(count, dtype=bool)
    S[F.generator(0)] = True
    for f in _rhs_factors(scheme.rhs):
        S = ev.image(_strip_converse(f), S)
    return bool(S[F.generator(scheme.m)])


def day_function(bases, m, k_max, caps=None):
    """Least k with a ^ (b *_m a^c) <= a^b *_k a^c (the left chain alternates b, a^c)."""
    if m < 1:
        raise AlgebraError("m must be positive")
    return _generic_level(bases, m, k_max, day_scheme, "D", caps)


def day_level(bases, k_max, caps=None):
    res = day_function(bases, 3, k_max, caps)
    res.variant = "DayLevel"
    return res


def tschantz_function(bases, m, k_max, caps=None, cross_check=True):
    """Least k with a ^ (b *_m c) <= a^(c*b) * (a^c *_k a^b)."""
    if m < 2:
        raise AlgebraError("m must be at least 2")
    res = _generic_level(bases, m, k_max, tschantz_scheme, "T", caps)
    if cross_check and m == 2:
        chain = find_terms(bases, "gumm", max_len=k_max + 2, caps=caps)
        other = chain.length - 2 if chain.found else None
        if other != res.value:
            raise AlgebraError(
                f"internal inconsistency: T(2) = {res.value} by free-algebra membership "
                f"but {other} by Gumm term search"
            )
        res.terms = chain.terms if chain.found else None
        res.details["term_search"] = other
    return res


# ---------------------------------------------------------------- single algebras

def _alphas(A, alpha_kind, budget, rels):
    if alpha_kind == "congruence":
        return rel.congruence_rels(A)
    if alpha_kind == "tolerance":
        return [R for R in rels if R.is_symmetric()]
    raise AlgebraError(f"unknown alpha kind {alpha_kind!r}")


@dataclass
class SmileResult:
    holds: bool
    m: int
    k: int
    ell: int
    alpha_kind: str
    budget: object
    exhaustive: bool
    checked: int
    counterexample: object = None

    def to_dict(self):
        return {
            "holds": self.holds,
            "m": self.m, "k": self.k, "ell": self.ell,
            "alpha_kind": self.alpha_kind,
            "budget": self.budget,
            "exhaustive": self.exhaustive,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


def smile_sides(alpha, S, m, k):
    """Both sides of a ^ (R *_m R') <= Theta *_k Theta' for R = S0 * ... * S_ell."""
    R = rel.compose_all(S)
    Theta = rel.compose_all([rel.meet(alpha, s) for s in S])
    left = rel.meet(alpha, rel.compose_alt(R, rel.converse(R), m))
    right = rel.compose_alt(Theta, rel.converse(Theta), k)
    return left, right


def check_smile_C(A, m, k, ell, alpha_kind="congruence", budget=None, relations=None):
    """Check the relational condition over enumerated relations of ``A``.

    ``relations`` overrides the enumeration of reflexive admissible relations.
    """
    if min(m, k, ell) < 0:
        raise AlgebraError("parameters must be nonnegative")
    rels = list(relations) if relations is not None else list(rel.enumerate_reflexive_admissible(A, budget))
    alphas = _alphas(A, alpha_kind, budget, rels)
    exhaustive = relations is None and rel.is_exhaustive(A, budget)
    checked = 0
    for alpha in alphas:
        for S in itertools.product(rels, repeat=ell + 1):
            checked += 1
            left, right = smile_sides(alpha, S, m, k)
            if not left <= right:
                bad = next(p for p in left.pairs() if p not in right)
                cex = {
                    "alpha": alpha.pairs(),
                    "S": [s.pairs() for s in S],
                    "pair": list(bad),
                }
                return SmileResult(False, m, k, ell, alpha_kind, budget, exhaustive, checked, cex)
    return SmileResult(True, m, k, ell, alpha_kind, budget, exhaustive, checked)


def replay_smile(A, m, k, cex):
    """True iff a counterexample of :func:`check_smile_C` really violates it."""
    n = A.size
    alpha = rel.BinRel.from_pairs(n, cex["alpha"])
    S = [rel.BinRel.from_pairs(n, s) for s in cex["S"]]
    if not all(rel.is_admissible(A, s) and s.is_reflexive() for s in S):
        return False
    left, right = smile_sides(alpha, S, m, k)
    a, b = cex["pair"]
    return (a, b) in left and (a, b) not in right


def relational_level(A, m, k_max, alpha_kind="congruence", budget=None, variant="standard"):
    """Least k with a ^ (S *_{m+1} T) <= aS *_{k+1} aT over enumerated relations of ``A``.

    This is a property of the single algebra ``A``; it bounds the relational
    spectrum of the variety from below but does not decide it.
    """
    t0 = time.perf_counter()
    rels = list(rel.enumerate_reflexive_admissible(A, budget))
    alphas = _alphas(A, alpha_kind, budget, rels)
    worst, where = 0, None
    for alpha in alphas:
        for S, T in itertools.product(rels, repeat=2):
            left = rel.meet(alpha, rel.compose_alt(S, T, m + 1))
            aS, aT = rel.meet(alpha, S), rel.meet(alpha, T)
            if variant == "converse":
                aS, aT = aT, aS
            elif variant != "standard":
                raise AlgebraError(f"unknown variant {variant!r}")
            P = aS
            k = 0
            while not left <= P:
                k += 1
                if k > k_max:
                    break
                P = rel.compose(P, aT if k % 2 == 1 else aS)
            if where is None or k > worst:
                worst = k
                where = {"alpha": alpha.pairs(), "S": S.pairs(), "T": T.pairs()}
            if worst > k_max:
                break
        if worst > k_max:
            break
    name = "Jr" if variant == "standard" else "Jrconv"
    res = SpectrumResult(name, m, None if worst > k_max else worst, k_max, [A.name],
                         budget=budget, exhaustive=rel.is_exhaustive(A, budget))
    res.witness = where
    res.timing_ms = (time.perf_counter() - t0) * 1000
    return res
