import json

import pytest

from cdspectrum import relations as rel
from cdspectrum.algebra import FiniteAlgebra, Signature, direct_product, parse_term
from cdspectrum.conditions import find_terms
from cdspectrum.errors import AlgebraError
from cdspectrum.verify import (
    THEOREMS,
    PreconditionError,
    congruence_identity_check,
    jgt_bounds,
    members,
    replay_counterexample,
    run_theorem,
    split_check,
    verify_corollary_ell,
    verify_corollary_th3d,
    verify_lemma_gt_and_jgt,
    verify_prop_kk,
    verify_prop_nip,
    verify_spectrum_basics,
    verify_theorem_4gt,
)


@pytest.fixture(scope="module")
def bare_set():
    """Three elements with only the identity map: congruence lattice is the
    partition lattice of a 3-set, which is not distributive."""
    return FiniteAlgebra("set3", 3, Signature((("u", 1),)), {"u": [0, 1, 2]})


def _check(report, name):
    return next(c for c in report.checks if c["name"] == name)


def test_corollary_ell_examples(lattice, implication):
    r = verify_corollary_ell([lattice], 1, 2)
    assert r.status == "pass" and r.level == "variety"
    c = _check(r, "J(2) <= 2")
    assert c["J"] == 1 and len(c["witness"]["chain"]) == 4
    r = verify_corollary_ell([implication], 1, 2)
    assert r.status == "pass"
    assert _check(r, "J(2) <= 4")["J"] == 2
    r = verify_corollary_ell([implication], 2, 1)
    assert r.checks[0]["note"] == "tautological"


def test_corollary_ell_not_applicable(bare_set):
    r = verify_corollary_ell([bare_set], 1, 2, k_max=3)
    assert r.status == "not-applicable"


def test_theorem_4gt(lattice, trivial, baker, implication):
    r = verify_theorem_4gt(lattice)
    assert r.status == "pass" and r.level == "member"
    names = [c["name"] for c in r.checks]
    assert names[:5] == ["swap", "tail", "long(m=2)", "long(m=3)", "long(m=4)"]
    # lattice and its square: 2 and 4 congruences
    assert _check(r, "swap")["triples"] == 2 ** 3 + 4 ** 3
    assert all(c["exhaustive"] for c in r.checks if c["name"] == "split")
    assert verify_theorem_4gt(trivial).status == "pass"
    assert verify_theorem_4gt(implication).status == "pass"
    skipped = verify_theorem_4gt(baker)
    assert skipped.status == "skipped" and not skipped.checks


def test_corollary_th3d(implication, lattice):
    r = verify_corollary_th3d([implication])
    assert r.status == "pass" and r.level == "variety+member"
    assert _check(r, "J(3) <= 3")["status"] == "pass"
    assert _check(r, "four_factor")["triples"] > 0
    assert verify_corollary_th3d([lattice]).status == "skipped"


def test_corollary_th3d_cap_falls_back_to_members(implication):
    r = verify_corollary_th3d([implication], caps={"max_elements": 1000})
    assert _check(r, "J(3) <= 3")["status"] == "cap-exceeded"
    assert r.status == "pass" and r.level == "member"


def test_prop_kk_baker_terms(baker):
    chain = [parse_term(t) for t in ("x0", "f(x0,x1,x2)", "f(x2,x0,x1)", "x2")]
    for ell in (1, 2):
        for kind in ("congruence", "tolerance"):
            r = verify_prop_kk(baker, chain, ell, kind)
            assert r.status == "pass"
            assert r.inputs["k"] == 3
            assert r.budgets["exhaustive"]


def test_prop_kk_precondition(baker):
    bad = [parse_term(t) for t in ("x0", "f(x1,x0,x2)", "x2")]
    with pytest.raises(PreconditionError):
        verify_prop_kk(baker, bad, 1)


def test_prop_kk_searched_chains(corpus):
    for A in corpus.values():
        chain = find_terms([A], "directed_jonsson")
        r = verify_prop_kk(A, chain.terms, 2, "tolerance")
        assert r.status == "pass"


def test_jgt_bounds():
    # J-converse(1) odd: refinement applies when k >= 1
    assert jgt_bounds(1, 1, 1) == (2, 3)
    assert jgt_bounds(1, 1, 0) == (1, 1)
    assert jgt_bounds(2, 2, 1) == (4, 3)
    assert jgt_bounds(3, 4, 3) == (10, 9)


def test_lemma_gt_and_jgt(lattice, majmin, bare_set):
    r = verify_lemma_gt_and_jgt([lattice])
    assert r.status == "pass" and r.level == "variety+member"
    assert r.inputs["gumm_k"] == 1
    # Jconv(2) = 3 meets the bound J(1) + 2k exactly
    assert r.inputs["spectra"] == {"J1": 1, "Jc1": 2, "J2": 2, "Jc2": 3}
    r = verify_lemma_gt_and_jgt([majmin])
    assert r.status == "pass" and r.inputs["gumm_k"] == 0
    assert any("parity refinement not applied" in n for n in r.notes)
    r = verify_lemma_gt_and_jgt([bare_set], k_max=3)
    assert r.status == "not-applicable"


def test_prop_nip(lattice, majmin, implication, trivial):
    r = verify_prop_nip(lattice, majmin)
    assert r.status == "pass" and _check(r, "J(1)")["product_value"] == 1
    r = verify_prop_nip(lattice, implication)
    assert _check(r, "J(1)")["product_value"] == 2
    r = verify_prop_nip(lattice, trivial, m_list=(1, 2))
    assert [c["product_value"] for c in r.checks] == [1, 2]


def test_spectrum_basics(majmin, lattice):
    r = verify_spectrum_basics([majmin])
    assert r.status == "pass"
    assert r.inputs["J"] == {"1": 1, "2": 1, "3": 1}
    assert _check(r, "2-permutable")["status"] == "pass"
    r = verify_spectrum_basics([lattice], m_max=2)
    assert _check(r, "J(2) <= 2")["status"] == "pass"


def test_fabricated_failure_replays(bare_set, lattice):
    ok, n, cex = congruence_identity_check([bare_set], "dist", {"m": 1, "k": 1})
    assert not ok
    algebras = {"set3": bare_set}
    assert replay_counterexample(cex, algebras)
    forged = dict(cex, pair=[0, 0])
    assert not replay_counterexample(forged, algebras)
    not_congruence = dict(cex, beta=[[0, 1]])
    assert not replay_counterexample(not_congruence, algebras)
    ok, _, _ = congruence_identity_check(members([lattice]), "dist", {"m": 1, "k": 1})
    assert ok


def test_other_counterexample_kinds(implication, lattice):
    algebras = {"implication2": implication, "lattice2": lattice}
    assert replay_counterexample({"kind": "dist-free", "algebras": ["implication2"], "m": 1, "k": 1}, algebras)
    assert not replay_counterexample({"kind": "dist-free", "algebras": ["implication2"], "m": 1, "k": 2}, algebras)
    assert replay_counterexample({"kind": "generic-free", "algebras": ["lattice2"],
                                  "identity": "a^(b*c) <= a^b"}, algebras)
    ineq = {"kind": "inequality", "quantity": "J(2)", "value": 5, "relation": "<=", "bound": 4}
    assert replay_counterexample(ineq, algebras)
    assert not replay_counterexample(dict(ineq, value=4), algebras)
    with pytest.raises(AlgebraError):
        replay_counterexample({"kind": "nope", "algebra": "lattice2"}, algebras)


def test_permutability_identity_fails_on_bare_set(bare_set):
    ok, _, cex = congruence_identity_check([bare_set], "permute", {"k": 2})
    assert not ok
    assert replay_counterexample(cex, {"set3": bare_set})


def test_split_check(lattice, implication):
    for A in (lattice, implication, direct_product(lattice, lattice)):
        ok, n, _ = split_check(A)
        assert ok and n > 0


def test_run_theorem_and_determinism(corpus):
    algebras = [corpus["lattice2"], corpus["majmin2"]]
    first = [r.to_dict() for r in run_theorem("prop_nip", algebras)]
    again = [r.to_dict() for r in run_theorem("prop_nip", algebras)]
    assert json.dumps(first, sort_keys=True) == json.dumps(again, sort_keys=True)
    assert len(first) == 1 and first[0]["theorem"] == "prop_nip"
    with pytest.raises(AlgebraError):
        run_theorem("nope")
    assert "spectrum_basics" in THEOREMS
