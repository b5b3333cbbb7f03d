import json

import numpy as np
import pytest
from hypothesis import given

from latforge.catalog import boolean, catalog, chain, d4, d4hat, m33, m_n, n5
from latforge.errors import BadParam, CyclicCovers, NotALattice, UnknownName
from latforge.lattice import (FiniteLattice, all_lattices_upto, bounds_extension, dual,
                              find_isomorphism, interval, is_hom, is_isomorphic, product,
                              quotient, sublattice, sublattice_closure)
from strategies import lattice_with_elements, lattices


def test_from_covers_builds_tables():
    L = FiniteLattice.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)], ["0", "a", "b", "1"])
    assert L.join[1, 2] == 3 and L.meet[1, 2] == 0
    assert L.bottom == 0 and L.top == 3
    assert L.elem("a") == 1


def test_cyclic_covers_rejected():
    with pytest.raises(CyclicCovers):
        FiniteLattice.from_covers(3, [(0, 1), (1, 2), (2, 0)])


def test_non_lattice_rejected():
    # two minimal upper bounds for the atoms
    with pytest.raises(NotALattice):
        FiniteLattice.from_covers(6, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4),
                                      (3, 5), (4, 5)])


def test_catalog_sizes():
    assert [catalog(k).n for k in ("D4", "D4hat", "N5", "M33")] == [7, 8, 5, 8]
    assert m_n(4).n == 6 and boolean(3).n == 8 and chain(5).n == 5
    assert catalog("M_3") == m_n(3)
    with pytest.raises(UnknownName):
        catalog("Q7")
    with pytest.raises(BadParam):
        chain(0)


def test_n5_covers():
    L = n5()
    named = {(L.names[a], L.names[b]) for a, b in L.covers()}
    assert named == {("0", "p1"), ("p1", "p2"), ("p2", "1"), ("0", "p3"), ("p3", "1")}


def test_spec_roundtrip():
    for L in (m33(), d4hat(), boolean(3)):
        spec = json.loads(json.dumps(L.to_spec()))
        assert FiniteLattice.from_spec(spec) == L


@given(lattices())
def test_tables_are_lattice_operations(L):
    assert L.check_tables()
    i = np.arange(L.n)
    assert (L.meet[i, i] == i).all() and (L.join[i, i] == i).all()
    assert np.array_equal(L.meet, L.meet.T) and np.array_equal(L.join, L.join.T)


@given(lattice_with_elements(3))
def test_absorption_and_associativity(case):
    L, (x, y, z) = case
    assert L.join[x, L.meet[x, y]] == x
    assert L.meet[x, L.join[x, y]] == x
    assert L.join[L.join[x, y], z] == L.join[x, L.join[y, z]]
    assert L.meet[L.meet[x, y], z] == L.meet[x, L.meet[y, z]]


@given(lattices())
def test_dual_of_dual(L):
    assert dual(dual(L)) == L
    D = dual(L)
    assert D.bottom == L.top


@given(lattices(max_n=5), lattices(max_n=5))
def test_product_projections_are_homs(A, B):
    P = product(A, B)
    assert P.n == A.n * B.n
    assert is_hom(P, A, [i // B.n for i in range(P.n)])
    assert is_hom(P, B, [i % B.n for i in range(P.n)])


@given(lattice_with_elements(2))
def test_quotient_map_is_surjective_hom(case):
    L, (x, y) = case
    K, h = quotient(L, [(x, y)])
    assert is_hom(L, K, h)
    assert set(h) == set(range(K.n))
    assert h[x] == h[y]


@given(lattice_with_elements(2))
def test_sublattice_closure_is_closed_and_minimal(case):
    L, gens = case
    S = sublattice_closure(L, gens)
    sub = sublattice(L, S)
    assert sub.check_tables()
    for s in S:
        if s in gens:
            continue
        rest = [t for t in S if t != s]
        closed = all(L.meet[a, b] in rest and L.join[a, b] in rest for a in rest for b in rest)
        assert not closed


def test_interval_and_bounds_extension():
    B = boolean(3)
    I = interval(B, 1, 7)
    assert is_isomorphic(I, boolean(2))
    E = bounds_extension(m_n(3))
    assert E.n == 7 and E.bottom == 0 and E.top == 6


def test_lattice_counts_up_to_isomorphism():
    # OEIS A006966
    counts = [0] * 7
    for L in all_lattices_upto(6):
        counts[L.n] += 1
    assert counts[1:] == [1, 1, 1, 2, 5, 15]


def test_isomorphism_search():
    B = boolean(2)
    assert find_isomorphism(B, product(chain(2), chain(2))) is not None
    assert not is_isomorphic(m_n(3), n5())
    assert not is_isomorphic(d4(), m_n(5))


def test_heights():
    assert list(n5().heights) == [0, 1, 2, 1, 3]
    assert list(chain(4).heights) == [0, 1, 2, 3]
