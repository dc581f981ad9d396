import itertools

import numpy as np
import pytest

from cdspectrum import conditions as cond
from cdspectrum import identity as dsl
from cdspectrum import relations as rel
from cdspectrum.algebra import Var, eval_term, holds_identity, parse_term
from cdspectrum.conditions import (
    chain_identities,
    check_dist,
    check_identity_generic,
    check_smile_C,
    day_function,
    day_level,
    dist_scheme,
    extract_chain_terms,
    find_terms,
    jonsson_level,
    relational_level,
    replay_smile,
    scheme_identities,
    shared_free_algebra,
    tschantz_function,
)
from cdspectrum.errors import AlgebraError, CapExceeded, ParseError
from cdspectrum.free import free_algebra

from oracles import jonsson_oracle

NAMES = ["lattice2", "implication2", "majmin2", "baker2", "trivial"]

# J(m) for m = 1, 2 and J-converse(1); computed by the brute-force oracle
J_TABLE = {
    "lattice2": (1, 2, 2),
    "implication2": (2, 2, 2),
    "majmin2": (1, 1, 1),
    "baker2": (3, 4, 4),
    "trivial": (0, 0, 0),
}
GUMM_LENGTH = {"lattice2": 3, "implication2": 3, "majmin2": 2, "baker2": 5, "trivial": 2}
DAY_LEVEL = {"lattice2": 3, "implication2": 3, "majmin2": 2, "baker2": 5, "trivial": 0}


# ---------------------------------------------------------------- check_dist

def test_check_dist_examples(lattice, implication, trivial):
    assert check_dist([lattice], 1, 1) is not None
    assert check_dist([implication], 1, 1) is None
    assert check_dist([implication], 1, 2) is not None
    for m in range(4):
        assert check_dist([trivial], m, 0) is not None


@pytest.mark.parametrize("name", NAMES)
def test_oracle_agreement_m1(name, corpus):
    A = corpus[name]
    j1, _, jc1 = J_TABLE[name]
    assert jonsson_oracle([A], 1, 8) == j1
    assert jonsson_oracle([A], 1, 8, converse=True) == jc1
    assert jonsson_level([A], 1, 8).value == j1
    assert jonsson_level([A], 1, 8, "converse").value == jc1


@pytest.mark.slow
def test_oracle_agreement_lattice_m2(lattice):
    assert jonsson_oracle([lattice], 2, 6) == 2
    assert jonsson_level([lattice], 2, 6).value == 2
    assert jonsson_oracle([lattice], 2, 6, converse=True) == 3
    assert jonsson_level([lattice], 2, 6, "converse").value == 3


def test_oracle_agreement_baker_m2(baker):
    # F(4) has 53 elements; the pure-Python oracle is too slow for larger ones
    assert jonsson_oracle([baker], 2, 8) == J_TABLE["baker2"][1]


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("variant", ["standard", "converse"])
def test_witness_invariants_and_minimality(name, variant, corpus):
    A = corpus[name]
    for m in (1, 2):
        res = jonsson_level([A], m, 8, variant)
        k = res.value
        if variant == "standard":
            assert k == J_TABLE[name][m - 1]
        elif m == 1:
            assert k == J_TABLE[name][2]
        w = res.witness
        F = w.free
        assert w.chain[0] == F.generator(0)
        assert w.chain[-1] == F.generator(m + 1)
        assert len(w.chain) == k + 2
        labs = {
            "a^b": F.labels(cond._dist_pairs(m)[:2]),
            "a^c": F.labels([cond._dist_pairs(m)[0], cond._dist_pairs(m)[2]]),
        }
        for i, lab in enumerate(w.labels):
            L = labs[lab]
            assert L[w.chain[i]] == L[w.chain[i + 1]]
        assert check_dist([A], m, k, variant) is not None
        if k > 0:
            assert check_dist([A], m, k - 1, variant) is None


def test_majmin_arithmetical(majmin):
    for m in (1, 2, 3):
        assert jonsson_level([majmin], m, 4).value == 1


def test_exceeded_and_caps(implication, lattice):
    res = jonsson_level([implication], 1, 0)
    assert res.value is None and res.exceeded
    assert res.to_dict()["value"] == "exceeded"
    cond.clear_cache()
    with pytest.raises(CapExceeded):
        jonsson_level([implication], 1, 1, caps={"max_elements": 20})
    # a positive answer is found on a prefix within the cap; minimality needs all of F(3)
    assert check_dist([implication], 1, 2, caps={"max_elements": 35}) is not None
    with pytest.raises(CapExceeded):
        jonsson_level([implication], 1, 4, caps={"max_elements": 35})
    with pytest.raises(AlgebraError):
        jonsson_level([lattice], 1, -1)
    with pytest.raises(AlgebraError):
        check_dist([lattice], 1, -1)


def test_results_do_not_depend_on_growth(implication):
    cond.clear_cache()
    lazy = jonsson_level([implication], 2, 6).to_dict()
    cond.clear_cache()
    shared_free_algebra([implication], 4).build()
    eager = jonsson_level([implication], 2, 6).to_dict()
    assert lazy == eager


# ---------------------------------------------------------------- term extraction

@pytest.mark.parametrize("name", NAMES)
def test_extracted_terms_satisfy_b_identities(name, corpus):
    A = corpus[name]
    for m in (1, 2):
        for variant in ("standard", "converse"):
            res = jonsson_level([A], m, 8, variant)
            terms = extract_chain_terms(res.witness)
            assert len(terms) == res.value + 2
            for label, lhs, rhs in chain_identities(terms, m, variant):
                assert holds_identity([A], lhs, rhs, nvars=m + 2), label


def test_lattice_middle_term_is_median(lattice):
    terms = jonsson_level([lattice], 1, 4).terms
    assert len(terms) == 3
    med = parse_term("join(join(meet(x0,x1),meet(x0,x2)),meet(x1,x2))")
    assert holds_identity([lattice], terms[1], med, nvars=3)


def test_trivial_chain(trivial):
    w = check_dist([trivial], 1, 0)
    assert extract_chain_terms(w) == [Var(0), Var(2)]


def test_implication_four_terms(implication):
    w = check_dist([implication], 1, 2)
    assert len(extract_chain_terms(w)) == 4


# ---------------------------------------------------------------- term search

@pytest.mark.parametrize("name", NAMES)
def test_term_search_cross_oracles(name, corpus):
    A = corpus[name]
    chain = find_terms([A], "jonsson")
    assert chain.length - 2 == J_TABLE[name][0]
    gumm = find_terms([A], "gumm")
    assert gumm.length == GUMM_LENGTH[name]
    assert tschantz_function([A], 2, 6).value == gumm.length - 2


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("scheme", ["jonsson", "directed_jonsson", "gumm", "pj"])
def test_found_chains_verify(name, scheme, corpus):
    A = corpus[name]
    chain = find_terms([A], scheme)
    if not chain.found:
        assert name == "baker2" and scheme == "pj"
        return
    for label, lhs, rhs in scheme_identities(scheme, chain.terms):
        assert holds_identity([A], lhs, rhs, nvars=3), label


def test_term_search_examples(lattice, baker, majmin):
    assert [str(t) for t in find_terms([baker], "directed").terms] == [
        "x0", "f(x0,x1,x2)", "f(x2,x0,x1)", "x2"]
    gumm = find_terms([majmin], "gumm")
    assert [str(t) for t in gumm.terms] == ["minor(x0,x1,x2)", "x2"]
    assert find_terms([lattice], "jonsson").length == 3
    with pytest.raises(AlgebraError):
        find_terms([lattice], "nope")
    with pytest.raises(AlgebraError):
        find_terms([lattice], "jonsson", max_len=1)


def test_term_search_max_len(baker):
    res = find_terms([baker], "jonsson", max_len=4)
    assert not res.found and res.to_dict()["length"] is None
    assert find_terms([baker], "jonsson", max_len=5).found


def test_pj_terms(implication, baker):
    chain = find_terms([implication], "pj")
    assert chain.found and chain.length == 2
    assert not find_terms([baker], "pj").found


# ---------------------------------------------------------------- generic identities

@pytest.mark.parametrize("name", NAMES)
def test_generic_matches_check_dist(name, corpus):
    A = corpus[name]
    for m in (1, 2):
        for k in range(0, 5):
            for variant in ("standard", "converse"):
                direct = check_dist([A], m, k, variant) is not None
                generic = check_identity_generic([A], dist_scheme(m, k, variant)).holds
                assert direct == generic, (m, k, variant)


def test_generic_text_and_witness(lattice):
    res = check_identity_generic([lattice], "a^(b*c) <= a^b * a^c * a^b")
    assert res.holds
    F = shared_free_algebra([lattice], 3)
    assert res.chain[0] == F.generator(0) and res.chain[-1] == F.generator(2)
    assert not check_identity_generic([lattice], "a^(b*c) <= a^b").holds
    with pytest.raises(ParseError):
        check_identity_generic([lattice], "a^(b*(c*b)') <= a")


def _direct_relation_check(A, m, pairs_by_var, rhs):
    """Evaluate ``rhs`` with the relations module on the finite algebra F(m+1)."""
    F = free_algebra([A], m + 1)
    FA = F.as_algebra()
    n = len(F)
    cong = {v: rel.congruence_generate(FA, [(F.generator(i), F.generator(j)) for i, j in ps]).rel()
            for v, ps in pairs_by_var.items()}

    def ev(e):
        if isinstance(e, dsl.RVar):
            return cong.get(e.name, rel.BinRel.diagonal(n))
        if isinstance(e, dsl.RConst):
            return rel.BinRel.diagonal(n) if e.value == 0 else rel.BinRel.full(n)
        if isinstance(e, dsl.RConverse):
            return rel.converse(ev(e.child))
        if isinstance(e, dsl.RMeet):
            out = ev(e.items[0])
            for i in e.items[1:]:
                out = rel.meet(out, ev(i))
            return out
        return rel.compose_all([ev(i) for i in e.items])

    return (F.generator(0), F.generator(m)) in ev(rhs)


@pytest.mark.parametrize("name", ["lattice2", "implication2", "majmin2", "baker2"])
def test_tschantz_shape_against_relations(name, corpus):
    A = corpus[name]
    for k in range(0, 4):
        scheme = cond.tschantz_scheme(2, k)
        pairs = {"a": [(0, 2)], "b": [(0, 1)], "c": [(1, 2)]}
        assert check_identity_generic([A], scheme).holds == _direct_relation_check(A, 2, pairs, scheme.rhs)


@pytest.mark.parametrize("name", ["lattice2", "baker2"])
def test_day_shape_against_relations(name, corpus):
    A = corpus[name]
    for k in range(0, 6):
        scheme = cond.day_scheme(3, k)
        pairs = {"a": [(0, 3), (1, 2)], "b": [(0, 1), (2, 3)], "c": [(1, 2)]}
        assert check_identity_generic([A], scheme).holds == _direct_relation_check(A, 3, pairs, scheme.rhs)


@pytest.mark.parametrize("name", NAMES)
def test_day_level(name, corpus):
    A = corpus[name]
    res = day_level([A], 8)
    assert res.value == DAY_LEVEL[name]
    assert res.variant == "DayLevel"
    assert check_identity_generic([A], cond.day_scheme(3, res.value)).holds
    if res.value:
        assert not check_identity_generic([A], cond.day_scheme(3, res.value - 1)).holds


def test_day_function_small_m(majmin, lattice):
    assert day_function([majmin], 1, 4).value == 1
    assert day_function([lattice], 1, 4).value == 1
    with pytest.raises(AlgebraError):
        day_function([lattice], 0, 4)


def test_tschantz(majmin, lattice, trivial):
    assert tschantz_function([majmin], 2, 4).value == 0
    assert tschantz_function([trivial], 2, 4).value == 0
    assert tschantz_function([lattice], 2, 4).value == find_terms([lattice], "gumm").length - 2
    assert tschantz_function([lattice], 3, 6).value is not None
    with pytest.raises(AlgebraError):
        tschantz_function([lattice], 1, 4)


# ---------------------------------------------------------------- spectrum properties

@pytest.mark.parametrize("name", NAMES)
def test_monotone_and_converse_gap(name, corpus):
    A = corpus[name]
    js = [jonsson_level([A], m, 10).value for m in (1, 2)]
    assert js[0] <= js[1]
    jc = jonsson_level([A], 1, 10, "converse").value
    assert abs(jc - js[0]) <= 1


@pytest.mark.parametrize("name", NAMES)
def test_alpha_one_degeneracy(name, corpus):
    A = corpus[name]
    for m in (1, 2):
        k = jonsson_level([A], m, 10).value
        if k >= m:
            continue
        chain = tuple(frozenset("b" if i % 2 == 0 else "c") for i in range(m + 1))
        rhs = dsl.alternate(dsl.RVar("b"), dsl.RVar("c"), k + 1)
        assert check_identity_generic([A], dsl.InclusionScheme(None, chain, rhs)).holds


def test_alpha_one_on_congruence_pairs(majmin):
    # J(2) = 1 < 2, so b o c o b <= b o c for congruences of F(4)
    F = free_algebra([majmin], 4)
    FA = F.as_algebra()
    gens = [F.generator(g) for g in range(4)]
    pairs = list(itertools.combinations(gens, 2))
    congs = [rel.congruence_generate(FA, [p], method="unionfind").rel() for p in pairs]
    congs.append(rel.BinRel.full(len(F)))
    for b, c in itertools.product(congs, repeat=2):
        assert rel.compose_alt(b, c, 3) <= rel.compose(b, c)


# ---------------------------------------------------------------- single algebras

def test_smile_examples(lattice, implication):
    assert check_smile_C(lattice, 1, 1, 1).holds
    assert check_smile_C(lattice, 1, 1, 1).exhaustive
    assert check_smile_C(implication, 2, 16, 1).holds
    # no counterexample on the two-element algebra itself
    assert check_smile_C(implication, 1, 1, 1).holds


def test_smile_counterexample_on_free_algebra(implication):
    F = free_algebra([implication], 3)
    FA = F.as_algebra()
    y0, y1, y2 = (F.generator(g) for g in range(3))
    alpha = rel.congruence_generate(FA, [(y0, y2)]).rel()
    S = [rel.admissible_closure(FA, [(y0, y1)]), rel.admissible_closure(FA, [(y1, y2)])]
    res = check_smile_C(FA, 1, 1, 1, relations=S + [rel.BinRel.diagonal(len(F))])
    assert not res.holds
    assert replay_smile(FA, 1, 1, res.counterexample)
    left, right = cond.smile_sides(alpha, S, 1, 1)
    assert (y0, y2) in left and (y0, y2) not in right


@pytest.mark.parametrize("name", NAMES)
def test_relational_level(name, corpus):
    A = corpus[name]
    for variant in ("standard", "converse"):
        for kind in ("congruence", "tolerance"):
            res = relational_level(A, 1, 6, kind, variant=variant)
            assert res.value == (0 if name == "trivial" else 1)
            assert res.exhaustive


def test_relational_level_lattice_bounds_jonsson(lattice):
    assert relational_level(lattice, 1, 6).value >= jonsson_level([lattice], 1, 6).value


def test_relational_level_budget_labels(majmin):
    res = relational_level(majmin, 1, 6, budget=0)
    assert res.value == 0 and not res.exhaustive
    d = res.to_dict()
    assert d["budget"] == 0 and d["exhaustive"] is False
