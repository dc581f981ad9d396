import itertools

import numpy as np
import pytest

from cdspectrum.algebra import FiniteAlgebra, Var, eval_term, holds_identity, parse_term, term_values
from cdspectrum.errors import AlgebraError, CapExceeded
from cdspectrum.free import FreeAlgebra, element_term, free_algebra

from oracles import free_tuples

SIZES = {  # brute-force closure of projections, frozen
    "lattice2": [1, 4, 18],
    "implication2": [2, 6, 38],
    "majmin2": [1, 2, 8],
    "baker2": [1, 3, 10],
    "trivial": [1, 1, 1],
}


@pytest.mark.parametrize("name", sorted(SIZES))
def test_sizes_match_oracle(name, corpus):
    A = corpus[name]
    for n, expected in zip((1, 2, 3), SIZES[name]):
        assert len(free_algebra([A], n)) == expected
        assert len(free_tuples([A], n)[0]) == expected


def test_lattice_four_generators(lattice):
    assert len(free_algebra([lattice], 4)) == 166


def test_two_bases(lattice, baker):
    # the lattice and its f-reduct do not share a signature
    with pytest.raises(AlgebraError):
        FreeAlgebra([lattice, baker], 2)


def test_multiple_bases_sizes(majmin, corpus):
    from cdspectrum.algebra import direct_product
    A = majmin
    B = direct_product(A, A)
    # B lies in the variety of A: same free algebra
    assert len(free_algebra([A, B], 3)) == len(free_algebra([A], 3))


def test_generators_are_projections(lattice):
    F = free_algebra([lattice], 3)
    for g in range(3):
        e = F.generator(g)
        assert element_term(F, e) == Var(g)
        for a in itertools.product(range(2), repeat=3):
            assert F.value(e, 0, a) == a[g]


@pytest.mark.parametrize("name", sorted(SIZES))
def test_terms_reproduce_tuples(name, corpus):
    A = corpus[name]
    F = free_algebra([A], 3)
    for e in range(len(F)):
        t = F.element_term(e)
        for seg_base, start, grid in F.segments():
            cols = [grid[:, i] for i in range(3)]
            vals = np.broadcast_to(term_values(seg_base, t, cols), (grid.shape[0],))
            assert np.array_equal(vals, F.rows[e, start:start + grid.shape[0]])


def test_median_element(lattice):
    F = free_algebra([lattice], 3)
    med = parse_term("join(join(meet(x0,x1),meet(x0,x2)),meet(x1,x2))")
    target = [eval_term(lattice, med, list(a)) for a in itertools.product(range(2), repeat=3)]
    hits = [e for e in range(len(F)) if F.rows[e].tolist() == target]
    assert len(hits) == 1
    assert holds_identity([lattice], F.element_term(hits[0]), med, nvars=3)


@pytest.mark.parametrize("name", ["lattice2", "implication2", "majmin2", "baker2"])
def test_universal_property(name, corpus):
    A = corpus[name]
    F = free_algebra([A], 2)
    FA = F.as_algebra()
    for assignment in itertools.product(range(A.size), repeat=2):
        h = [F.value(e, 0, assignment) for e in range(len(F))]
        for symbol, arity in A.signature.ops:
            for args in itertools.product(range(len(F)), repeat=arity):
                assert h[FA.op(symbol, *args)] == A.op(symbol, *[h[a] for a in args])


def test_identity_iff_elements_coincide(lattice, implication):
    for A in (lattice, implication):
        F = free_algebra([A], 2)
        elements = list(range(len(F)))
        for a, b in itertools.combinations(elements, 2):
            assert not holds_identity([A], F.element_term(a), F.element_term(b), nvars=2)


def test_permuted_base_order(lattice, corpus):
    from cdspectrum.algebra import direct_product
    L2 = direct_product(lattice, lattice)
    F1 = free_algebra([lattice, L2], 3)
    F2 = free_algebra([L2, lattice], 3)
    assert len(F1) == len(F2) == 18
    # same terms up to the reordering of columns
    w = 2 ** 3
    for e in range(len(F1)):
        t = F1.element_term(e)
        row = F1.rows[e]
        swapped = np.concatenate([row[w:], row[:w]])
        assert F2.index_of(swapped) is not None
        assert holds_identity([lattice], t, F2.element_term(F2.index_of(swapped)), nvars=3)


def test_idempotent_single_generator(lattice, majmin, baker):
    for A in (lattice, majmin, baker):
        assert len(free_algebra([A], 1)) == 1


def test_growth_is_deterministic(implication):
    a = free_algebra([implication], 3)
    b = free_algebra([implication], 3)
    assert np.array_equal(a.rows, b.rows)
    assert [str(a.element_term(e)) for e in range(len(a))] == [str(b.element_term(e)) for e in range(len(b))]


def test_caps(lattice, implication):
    with pytest.raises(CapExceeded) as info:
        FreeAlgebra([lattice], 4, max_width=8)
    assert info.value.details["width"] == 16
    with pytest.raises(CapExceeded) as info:
        free_algebra([implication], 4, max_elements=100)
    assert info.value.details["count"] > 0


def test_prefixes_are_subsets(implication):
    F = FreeAlgebra([implication], 3)
    seen = 0
    while not F.complete:
        F.grow()
        assert len(F) >= seen
        seen = len(F)
    assert F.prefix_count(F.generations_done()) == len(F)
