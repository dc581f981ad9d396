"""Executable theorem checks over finite algebras and the varieties they generate.

Each ``verify_*`` function returns a :class:`TheoremReport`.  Checks on the
free algebra decide a statement for the whole variety ("variety" level);
checks over all congruences or enumerated relations of concrete members
(the generators and their pairwise products) are necessary conditions only
("member" level).  A failing check always carries a counterexample that
:func:`replay_counterexample` re-validates from scratch.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import identity as dsl
from . import relations as rel
from .algebra import FiniteAlgebra, direct_product, holds_identity, nonindexed_product
from .conditions import (
    check_dist,
    check_identity_generic,
    find_terms,
    jonsson_level,
    scheme_identities,
    tschantz_scheme,
)
from .errors import AlgebraError, CapExceeded

THEOREMS = (
    "corollary_ell",
    "theorem_4gt",
    "corollary_th3d",
    "prop_kk",
    "lemma_gt_jgt",
    "prop_nip",
    "spectrum_basics",
)


class PreconditionError(AlgebraError):
    """The inputs do not meet the hypothesis a check is defined for."""


@dataclass
class TheoremReport:
    theorem: str
    inputs: dict
    status: str = "pass"  # pass | fail | skipped | not-applicable | cap-exceeded
    level: str = "none"  # variety | member | variety+member | none
    checks: list = field(default_factory=list)
    counterexample: object = None
    caps: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, name, status, **info):
        entry = {"name": name, "status": status}
        entry.update(info)
        self.checks.append(entry)
        return entry

    def finish(self):
        states = [c["status"] for c in self.checks]
        routes = {c.get("level") for c in self.checks if c["status"] == "pass"} - {None}
        if "fail" in states:
            self.status = "fail"
        elif "pass" in states:
            self.status = "pass"
        elif "cap-exceeded" in states:
            self.status = "cap-exceeded"
        elif not states:
            self.status = self.status if self.status != "pass" else "skipped"
        else:
            self.status = states[0]
        if routes == {"variety", "member"}:
            self.level = "variety+member"
        elif routes:
            self.level = routes.pop()
        return self

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "inputs": self.inputs,
            "status": self.status,
            "level": self.level,
            "checks": self.checks,
            "counterexample": self.counterexample,
            "caps": self.caps,
            "budgets": self.budgets,
            "notes": self.notes,
        }


def _as_bases(x):
    return [x] if isinstance(x, FiniteAlgebra) else list(x)


def _names(bases):
    return [A.name for A in bases]


def members(bases, products=True):
    """The generators and, optionally, all their pairwise products (squares included)."""
    out = list(bases)
    if products:
        for i, A in enumerate(bases):
            for B in bases[i:]:
                out.append(direct_product(A, B))
    return out


# ---------------------------------------------------------------- congruence identities

def _ab(a, b):
    return rel.meet(a, b)


def _id_three_gumm(a, b, c):
    # a(b*c) <= a(c*b) * ac
    return rel.meet(a, rel.compose(b, c)), rel.compose(rel.meet(a, rel.compose(c, b)), _ab(a, c)), "le"


def _id_swap(a, b, c):
    # a(b*c) * ab = ab * a(c*b)
    lhs = rel.compose(rel.meet(a, rel.compose(b, c)), _ab(a, b))
    rhs = rel.compose(_ab(a, b), rel.meet(a, rel.compose(c, b)))
    return lhs, rhs, "eq"


def _id_tail(a, b, c):
    # a(b*c*b) * ac = a(b*c) * ab * ac
    lhs = rel.compose(rel.meet(a, rel.compose_alt(b, c, 3)), _ab(a, c))
    rhs = rel.compose_all([rel.meet(a, rel.compose(b, c)), _ab(a, b), _ab(a, c)])
    return lhs, rhs, "eq"


def _id_long(a, b, c, m):
    # a(b *_{m+2} c) = a(b*c) * (ab *_m ac)
    lhs = rel.meet(a, rel.compose_alt(b, c, m + 2))
    rhs = rel.compose(rel.meet(a, rel.compose(b, c)), rel.compose_alt(_ab(a, b), _ab(a, c), m))
    return lhs, rhs, "eq"


def _id_four_factor(a, b, c):
    # a(b*c*b) * ac = ab * ac * ab * ac
    lhs = rel.compose(rel.meet(a, rel.compose_alt(b, c, 3)), _ab(a, c))
    rhs = rel.compose_alt(_ab(a, b), _ab(a, c), 4)
    return lhs, rhs, "eq"


def _id_gumm_bound(a, b, c, k):
    # a(b*c*b) <= a(c*b) * (ac *_{2k} ab)
    lhs = rel.meet(a, rel.compose_alt(b, c, 3))
    rhs = rel.compose(rel.meet(a, rel.compose(c, b)), rel.compose_alt(_ab(a, c), _ab(a, b), 2 * k))
    return lhs, rhs, "le"


def _id_dist(a, b, c, m, k):
    # a(b *_{m+1} c) <= ab *_{k+1} ac
    return rel.meet(a, rel.compose_alt(b, c, m + 1)), rel.compose_alt(_ab(a, b), _ab(a, c), k + 1), "le"


def _id_permute(a, b, c, k):
    # b *_k c = c *_k b
    return rel.compose_alt(b, c, k), rel.compose_alt(c, b, k), "eq"


IDENTITIES = {
    "three_gumm": _id_three_gumm,
    "swap": _id_swap,
    "tail": _id_tail,
    "long": _id_long,
    "four_factor": _id_four_factor,
    "gumm_bound": _id_gumm_bound,
    "dist": _id_dist,
    "permute": _id_permute,
}


def _violation(lhs, rhs, mode):
    for p in lhs.pairs():
        if p not in rhs:
            return list(p), "left-only"
    if mode == "eq":
        for p in rhs.pairs():
            if p not in lhs:
                return list(p), "right-only"
    return None


def congruence_identity_check(algebras, name, params=None):
    """Check identity ``name`` over all congruence triples of each algebra.

    Returns (holds, triples checked, counterexample or None).
    """
    params = dict(params or {})
    fn = IDENTITIES[name]
    checked = 0
    for A in algebras:
        congs = [c.rel() for c in rel.all_congruences(A)]
        for a, b, c in itertools.product(congs, repeat=3):
            checked += 1
            lhs, rhs, mode = fn(a, b, c, **params)
            bad = _violation(lhs, rhs, mode)
            if bad is not None:
                cex = {
                    "kind": "congruence-identity",
                    "identity": name,
                    "params": params,
                    "algebra": A.name,
                    "alpha": a.pairs(), "beta": b.pairs(), "gamma": c.pairs(),
                    "pair": bad[0], "side": bad[1],
                }
                return False, checked, cex
    return True, checked, None


# ---------------------------------------------------------------- relation identities

def _split_sides(alpha, R, S, T):
    # a(T * T' * R * S) = a(T * T') * aR * aS
    Tc = rel.converse(T)
    lhs = rel.meet(alpha, rel.compose_all([T, Tc, R, S]))
    rhs = rel.compose_all([rel.meet(alpha, rel.compose(T, Tc)), rel.meet(alpha, R), rel.meet(alpha, S)])
    return lhs, rhs, "eq"


def split_check(A, budget=None):
    rels = list(rel.enumerate_reflexive_admissible(A, budget))
    alphas = [c.rel() for c in rel.all_congruences(A)]
    checked = 0
    for T in rels:
        Tc = rel.converse(T)
        Rs = [R for R in rels if R <= T]
        Ss = [S for S in rels if S <= Tc]
        for alpha in alphas:
            for R in Rs:
                for S in Ss:
                    checked += 1
                    bad = _violation(*_split_sides(alpha, R, S, T))
                    if bad is not None:
                        cex = {
                            "kind": "split", "algebra": A.name,
                            "alpha": alpha.pairs(), "R": R.pairs(), "S": S.pairs(), "T": T.pairs(),
                            "pair": bad[0], "side": bad[1],
                        }
                        return False, checked, cex
    return True, checked, None


def _kk_sides(alpha, S, k):
    # a(S1 * ... * Sl) <= (aS1 * ... * aSl)^(k-1)
    lhs = rel.meet(alpha, rel.compose_all(S))
    rhs = rel.power_rel(rel.compose_all([rel.meet(alpha, s) for s in S]), k - 1)
    return lhs, rhs, "le"


def _kk_alt_sides(alpha, S, T, ell, count):
    # a(S *_l T) <= aS *_count aT
    lhs = rel.meet(alpha, rel.compose_alt(S, T, ell))
    rhs = rel.compose_alt(rel.meet(alpha, S), rel.meet(alpha, T), count)
    return lhs, rhs, "le"


def replay_counterexample(cex, algebras):
    """Re-validate a counterexample; ``algebras`` maps names to algebras."""
    kind = cex["kind"]
    if kind == "dist-free":
        bases = [algebras[n] for n in cex["algebras"]]
        return check_dist(bases, cex["m"], cex["k"]) is None
    if kind == "inequality":
        return not _INEQ[cex["relation"]](cex["value"], cex["bound"])
    if kind == "generic-free":
        bases = [algebras[n] for n in cex["algebras"]]
        return not check_identity_generic(bases, cex["identity"]).holds
    A = algebras[cex["algebra"]]
    n = A.size

    def R(pairs):
        return rel.BinRel.from_pairs(n, [tuple(p) for p in pairs])

    if kind == "congruence-identity":
        a, b, c = R(cex["alpha"]), R(cex["beta"]), R(cex["gamma"])
        if not all(rel.is_congruence(A, x) for x in (a, b, c)):
            return False
        lhs, rhs, mode = IDENTITIES[cex["identity"]](a, b, c, **cex["params"])
    elif kind == "split":
        alpha, Rr, S, T = R(cex["alpha"]), R(cex["R"]), R(cex["S"]), R(cex["T"])
        if not (rel.is_congruence(A, alpha) and Rr <= T and S <= rel.converse(T)):
            return False
        if not all(rel.is_admissible(A, x) and x.is_reflexive() for x in (Rr, S, T)):
            return False
        lhs, rhs, mode = _split_sides(alpha, Rr, S, T)
    elif kind == "kk":
        alpha = R(cex["alpha"])
        S = [R(s) for s in cex["S"]]
        if not all(rel.is_admissible(A, x) and x.is_reflexive() for x in S + [alpha]):
            return False
        if cex["form"] == "product":
            lhs, rhs, mode = _kk_sides(alpha, S, cex["k"])
        else:
            lhs, rhs, mode = _kk_alt_sides(alpha, S[0], S[1], cex["ell"], cex["count"])
    else:
        raise AlgebraError(f"unknown counterexample kind {kind!r}")
    pair = tuple(cex["pair"])
    if cex["side"] == "left-only":
        return pair in lhs and pair not in rhs
    return pair in rhs and pair not in lhs


# ---------------------------------------------------------------- theorem checks

_INEQ = {"<=": lambda a, b: a <= b, "==": lambda a, b: a == b}


def _inequality(value, relation, bound, what):
    return {"kind": "inequality", "quantity": what, "value": value, "relation": relation, "bound": bound}


def _fail(report, name, cex, **info):
    report.add(name, "fail", **info)
    if report.counterexample is None:
        report.counterexample = cex


def verify_corollary_ell(bases, m, ell, k_max=8, caps=None):
    """J(m) = k implies J(m * ell) <= k * ell."""
    bases = _as_bases(bases)
    report = TheoremReport("corollary_ell", {"algebras": _names(bases), "m": m, "ell": ell, "k_max": k_max},
                           caps=dict(caps or {}))
    try:
        base = jonsson_level(bases, m, k_max, caps=caps)
    except CapExceeded as exc:
        report.add(f"J({m})", "cap-exceeded", detail=str(exc))
        return report.finish()
    if base.value is None:
        report.status = "not-applicable"
        report.notes.append(f"J({m}) exceeds {k_max}")
        return report.finish()
    k = base.value
    bound = k * ell
    info = {"J": k, "bound": bound, "level": "variety"}
    if ell == 1:
        report.add(f"J({m * ell}) <= {bound}", "pass", **info, note="tautological")
        return report.finish()
    try:
        w = check_dist(bases, m * ell, bound, caps=caps)
    except CapExceeded as exc:
        report.add(f"J({m * ell}) <= {bound}", "cap-exceeded", detail=str(exc))
        return report.finish()
    if w is None:
        _fail(report, f"J({m * ell}) <= {bound}",
              {"kind": "dist-free", "algebras": _names(bases), "m": m * ell, "k": bound}, **info)
    else:
        report.add(f"J({m * ell}) <= {bound}", "pass", **info, witness=w.to_dict())
    return report.finish()


def verify_theorem_4gt(algebras, m_max=4, budget=None):
    """Under three Gumm terms: the swap, tail and long-chain equalities on
    congruences, and the split equality on reflexive admissible relations.

    Checked on each algebra and its square (and pairwise products of a list).
    """
    bases = _as_bases(algebras)
    report = TheoremReport("theorem_4gt", {"algebras": _names(bases), "m_max": m_max},
                           budgets={"relations": budget})
    chain = find_terms(bases, "gumm", max_len=3)
    if not chain.found:
        report.status = "skipped"
        report.notes.append("hypothesis not established: no chain of 3 Gumm terms")
        return report.finish()
    report.notes.append("Gumm terms: " + ", ".join(str(t) for t in chain.terms))
    mems = members(bases)
    checks = [("swap", {}), ("tail", {})] + [("long", {"m": m}) for m in range(2, m_max + 1)]
    for name, params in checks:
        ok, n, cex = congruence_identity_check(mems, name, params)
        label = name if not params else f"{name}(m={params['m']})"
        if ok:
            report.add(label, "pass", level="member", triples=n)
        else:
            _fail(report, label, cex, level="member", triples=n)
    for A in mems:
        ok, n, cex = split_check(A, budget)
        info = {"level": "member", "algebra": A.name, "cases": n,
                "exhaustive": rel.is_exhaustive(A, budget)}
        if ok:
            report.add("split", "pass", **info)
        else:
            _fail(report, "split", cex, **info)
    return report.finish()


def verify_corollary_th3d(bases, n_max=3, caps=None):
    """J(1) = 2 implies J(n) <= n for n >= 3 and the four-factor equality."""
    bases = _as_bases(bases)
    report = TheoremReport("corollary_th3d", {"algebras": _names(bases), "n_max": n_max},
                           caps=dict(caps or {}))
    j1 = jonsson_level(bases, 1, 2, caps=caps)
    if j1.value != 2:
        report.status = "skipped"
        report.notes.append(f"precondition J(1) = 2 fails (J(1) = {j1.to_dict()['value']})")
        return report.finish()
    for n in range(3, n_max + 1):
        try:
            w = check_dist(bases, n, n, caps=caps)
        except CapExceeded as exc:
            report.add(f"J({n}) <= {n}", "cap-exceeded", detail=str(exc), note="member-check only")
            continue
        if w is None:
            _fail(report, f"J({n}) <= {n}",
                  {"kind": "dist-free", "algebras": _names(bases), "m": n, "k": n}, level="variety")
        else:
            report.add(f"J({n}) <= {n}", "pass", level="variety", witness=w.to_dict())
    ok, n, cex = congruence_identity_check(members(bases), "four_factor")
    if ok:
        report.add("four_factor", "pass", level="member", triples=n)
    else:
        _fail(report, "four_factor", cex, level="member", triples=n)
    return report.finish()


def verify_prop_kk(A, chain, ell, alpha_kind="tolerance", budget=None):
    """A chain d_0..d_k of directed terms bounds a(S1*...*Sl) by (aS1*...*aSl)^(k-1)."""
    terms = list(chain)
    if len(terms) < 2:
        raise PreconditionError("need at least two directed terms")
    for label, lhs, rhs in scheme_identities("directed_jonsson", terms):
        if not holds_identity([A], lhs, rhs, nvars=3):
            raise PreconditionError(f"chain is not a directed Jonsson chain on {A.name}: {label} fails")
    k = len(terms) - 1
    report = TheoremReport("prop_kk", {"algebra": A.name, "chain": [str(t) for t in terms], "k": k,
                                       "ell": ell, "alpha_kind": alpha_kind},
                           budgets={"relations": budget, "exhaustive": rel.is_exhaustive(A, budget)})
    rels = list(rel.enumerate_reflexive_admissible(A, budget))
    if alpha_kind == "tolerance":
        alphas = [R for R in rels if R.is_symmetric()]
    elif alpha_kind == "congruence":
        alphas = [c.rel() for c in rel.all_congruences(A)]
    else:
        raise AlgebraError(f"unknown alpha kind {alpha_kind!r}")

    def run(name, cases, sides, make_cex):
        n = 0
        for case in cases:
            n += 1
            bad = _violation(*sides(*case))
            if bad is not None:
                cex = make_cex(*case)
                cex.update({"pair": bad[0], "side": bad[1], "algebra": A.name, "kind": "kk"})
                _fail(report, name, cex, level="member", cases=n)
                return
        report.add(name, "pass", level="member", cases=n)

    run("product",
        ((alpha, S) for alpha in alphas for S in itertools.product(rels, repeat=ell)),
        lambda alpha, S: _kk_sides(alpha, S, k),
        lambda alpha, S: {"form": "product", "k": k, "alpha": alpha.pairs(), "S": [s.pairs() for s in S]})
    if ell % 2 == 0:
        count = ell * (k - 1)
        S_set = rels
        name = f"alternating({count})"
    else:
        count = ell * (k - 1) - k + 2
        S_set = [c.rel() for c in rel.all_congruences(A)]
        name = f"alternating_congruence({count})"
    run(name,
        ((alpha, S, T) for alpha in alphas for S in S_set for T in rels),
        lambda alpha, S, T: _kk_alt_sides(alpha, S, T, ell, count),
        lambda alpha, S, T: {"form": "alternating", "ell": ell, "count": count,
                             "alpha": alpha.pairs(), "S": [S.pairs(), T.pairs()]})
    return report.finish()


def jgt_bounds(j1, jc1, k):
    """Upper bounds for (J(2), J-converse(2)) from k+2 Gumm terms.

    The parity refinement absorbs one factor into the tail ac *_{2k} ab,
    so it needs k >= 1.
    """
    b1 = jc1 + 2 * k - (1 if k >= 1 and jc1 % 2 == 1 else 0)
    b2 = j1 + 2 * k - (1 if k >= 1 and j1 % 2 == 0 else 0)
    return b1, b2


def verify_lemma_gt_and_jgt(bases, k_max=8, caps=None):
    """k+2 Gumm terms give a(b*c*b) <= a(c*b) * (ac *_{2k} ab), hence bounds on J(2)."""
    bases = _as_bases(bases)
    report = TheoremReport("lemma_gt_jgt", {"algebras": _names(bases), "k_max": k_max},
                           caps=dict(caps or {}))
    chain = find_terms(bases, "gumm", max_len=k_max + 2, caps=caps)
    if not chain.found:
        report.status = "not-applicable"
        report.notes.append(f"no Gumm chain within {k_max + 2} terms")
        return report.finish()
    k = chain.length - 2
    report.inputs["gumm_k"] = k
    ok, n, cex = congruence_identity_check(members(bases), "gumm_bound", {"k": k})
    if ok:
        report.add("gumm_bound", "pass", level="member", triples=n)
    else:
        _fail(report, "gumm_bound", cex, level="member", triples=n)
    scheme = tschantz_scheme(3, 2 * k)
    res = check_identity_generic(bases, scheme, caps=caps)
    if res.holds:
        report.add("gumm_bound_free", "pass", level="variety", identity=str(scheme))
    else:
        _fail(report, "gumm_bound_free",
              {"kind": "generic-free", "algebras": _names(bases), "identity": str(scheme)}, level="variety")
    spectra = {}
    for key, m, variant in (("J1", 1, "standard"), ("Jc1", 1, "converse"),
                            ("J2", 2, "standard"), ("Jc2", 2, "converse")):
        spectra[key] = jonsson_level(bases, m, k_max, variant=variant, caps=caps).value
    report.inputs["spectra"] = {key: ("exceeded" if v is None else v) for key, v in spectra.items()}
    if any(v is None for v in spectra.values()):
        report.notes.append("a spectrum value exceeds k_max; inequalities not applicable")
        return report.finish()
    b1, b2 = jgt_bounds(spectra["J1"], spectra["Jc1"], k)
    for name, value, bound in (("J(2) bound", spectra["J2"], b1), ("Jconv(2) bound", spectra["Jc2"], b2)):
        if value <= bound:
            report.add(name, "pass", level="variety", value=value, bound=bound)
        else:
            _fail(report, name, _inequality(value, "<=", bound, name), level="variety")
    if k == 0:
        report.notes.append("k = 0: parity refinement not applied (no tail factor to absorb)")
    return report.finish()


def verify_prop_nip(A, B, m_list=(1,), k_max=8, caps=None, rename=None):
    """J of the non-indexed product equals the pointwise maximum of the factors."""
    P = nonindexed_product(A, B, rename=rename)
    report = TheoremReport("prop_nip", {"algebras": [A.name, B.name], "product": P.name,
                                        "m_list": list(m_list), "k_max": k_max}, caps=dict(caps or {}))
    for m in m_list:
        try:
            ja = jonsson_level([A], m, k_max, caps=caps).value
            jb = jonsson_level([B], m, k_max, caps=caps).value
            jp = jonsson_level([P], m, k_max, caps=caps).value
        except CapExceeded as exc:
            report.add(f"J({m})", "cap-exceeded", detail=str(exc))
            continue
        if ja is None or jb is None:
            report.add(f"J({m})", "not-applicable", note="a factor exceeds k_max")
            continue
        expect = max(ja, jb)
        info = {"level": "variety", "factors": [ja, jb], "product_value": "exceeded" if jp is None else jp}
        if jp == expect:
            report.add(f"J({m})", "pass", **info)
        else:
            _fail(report, f"J({m})", _inequality(-1 if jp is None else jp, "==", expect,
                                                 f"J({m}) of {P.name}"), **info)
    return report.finish()


def verify_spectrum_basics(bases, m_max=3, k_max=8, caps=None):
    """Monotonicity of J, |Jconv(1) - J(1)| <= 1, J(1) = 1 implying J(m) <= m,
    and J(k) < k implying k-permutability on F(k+2)."""
    bases = _as_bases(bases)
    report = TheoremReport("spectrum_basics", {"algebras": _names(bases), "m_max": m_max, "k_max": k_max},
                           caps=dict(caps or {}))
    values = {}
    for m in range(1, m_max + 1):
        try:
            values[m] = jonsson_level(bases, m, k_max, caps=caps).value
        except CapExceeded as exc:
            report.add(f"J({m})", "cap-exceeded", detail=str(exc))
            break
    report.inputs["J"] = {str(m): ("exceeded" if v is None else v) for m, v in values.items()}
    known = [m for m in sorted(values) if values[m] is not None]
    drops = [(a, b) for a, b in zip(known, known[1:]) if values[a] > values[b]]
    if not drops:
        report.add("monotone", "pass", level="variety")
    else:
        a, b = drops[0]
        _fail(report, "monotone", _inequality(values[a], "<=", values[b], f"J({a}) vs J({b})"),
              level="variety")
    jc = jonsson_level(bases, 1, k_max, variant="converse", caps=caps).value
    if values.get(1) is not None and jc is not None:
        gap = abs(jc - values[1])
        if gap <= 1:
            report.add("converse gap", "pass", level="variety", J=values[1], Jconv=jc)
        else:
            _fail(report, "converse gap", _inequality(gap, "<=", 1, "|Jconv(1) - J(1)|"), level="variety")
    if values.get(1) == 1:
        for m in known:
            if values[m] <= m:
                report.add(f"J({m}) <= {m}", "pass", level="variety")
            else:
                _fail(report, f"J({m}) <= {m}", _inequality(values[m], "<=", m, f"J({m})"), level="variety")
    for m in known:
        if values[m] < m:
            scheme = permute_scheme(m)
            res = check_identity_generic(bases, scheme, caps=caps)
            if res.holds:
                report.add(f"{m}-permutable", "pass", level="variety", identity=str(scheme))
            else:
                _fail(report, f"{m}-permutable",
                      {"kind": "generic-free", "algebras": _names(bases), "identity": str(scheme)},
                      level="variety")
    return report.finish()


def permute_scheme(k):
    """b *_k c <= c *_k b, which for congruences is k-permutability."""
    chain = tuple(frozenset("b" if i % 2 == 0 else "c") for i in range(k))
    return dsl.InclusionScheme(None, chain, dsl.alternate(dsl.RVar("c"), dsl.RVar("b"), k))


def _corpus():
    from .corpus_data import load_corpus
    return load_corpus()


NIP_PAIRS = (("lattice2", "majmin2"), ("lattice2", "implication2"), ("lattice2", "trivial"))


def _reports_ell(corpus, caps):
    for A in corpus:
        for m in (1, 2):
            for ell in (1, 2):
                yield verify_corollary_ell([A], m, ell, caps=caps)


def _reports_4gt(corpus, caps):
    for A in corpus:
        yield verify_theorem_4gt(A)


def _reports_th3d(corpus, caps):
    for A in corpus:
        yield verify_corollary_th3d([A], caps=caps)


def _reports_kk(corpus, caps):
    for A in corpus:
        chain = find_terms([A], "directed_jonsson", max_len=8, caps=caps)
        if not chain.found:
            continue
        for ell in (1, 2):
            for kind in ("congruence", "tolerance"):
                yield verify_prop_kk(A, chain.terms, ell, kind)


def _reports_jgt(corpus, caps):
    for A in corpus:
        yield verify_lemma_gt_and_jgt([A], caps=caps)


def _reports_nip(corpus, caps):
    by = {A.name: A for A in corpus}
    pairs = [(by[a], by[b]) for a, b in NIP_PAIRS if a in by and b in by]
    if not pairs:
        pairs = list(itertools.combinations(corpus, 2))
    for A, B in pairs:
        yield verify_prop_nip(A, B, caps=caps)


def _reports_basics(corpus, caps):
    for A in corpus:
        yield verify_spectrum_basics([A], caps=caps)


_RUNNERS = {
    "corollary_ell": _reports_ell,
    "theorem_4gt": _reports_4gt,
    "corollary_th3d": _reports_th3d,
    "prop_kk": _reports_kk,
    "lemma_gt_jgt": _reports_jgt,
    "prop_nip": _reports_nip,
    "spectrum_basics": _reports_basics,
}


def run_theorem(theorem, corpus=None, caps=None):
    """Reports for one theorem id (or ``all``) over ``corpus``, in a fixed order."""
    if theorem == "all":
        return verify_all(corpus, caps)
    if theorem not in _RUNNERS:
        raise AlgebraError(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)} or all")
    return list(_RUNNERS[theorem](list(corpus or _corpus()), caps))


def verify_all(corpus=None, caps=None):
    """Every theorem check over the shipped corpus, in a fixed order."""
    corpus = list(corpus or _corpus())
    reports = []
    for theorem in THEOREMS:
        reports.extend(_RUNNERS[theorem](corpus, caps))
    return reports
