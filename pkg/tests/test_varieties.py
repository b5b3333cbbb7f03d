import itertools

import numpy as np
import pytest

from latforge.catalog import chain, m33, m_n, n5
from latforge.errors import CapExceeded, NotMaterialized
from latforge.lattice import product, sublattice_closure
from latforge.terms import JONSSON, holds, parse_identity, parse_quasi_identity
from latforge.varieties import (QUASI_MOMEGA, Presentation, assignments, beta, beta0,
                                count_premise_solutions, dot_sequence, f_m, fm_presentation, in_Momega,
                                no_mid_search, omega_m, point_vector, presented_lattice,
                                satisfies_identity, satisfies_quasi_identity, solve_pointwise,
                                tuple_of)

DISTRIBUTIVE = parse_identity("(= (meet x (join y z)) (join (meet x y) (meet x z)))")


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_jonsson_on_mn(k):
    assert satisfies_identity(m_n(k), JONSSON)
    assert in_Momega(m_n(k))


def test_jonsson_fails_on_m33():
    v = satisfies_identity(m33(), JONSSON)
    L = m33()
    assert not v
    assert {k: L.names[x] for k, x in v.witness.items()} == {"x": "v0", "y": "v1", "u": "u0",
                                                              "v": "u1"}
    assert not in_Momega(m33())
    assert not in_Momega(n5())


def test_identity_witness_violates():
    v = satisfies_identity(n5(), DISTRIBUTIVE)
    L = n5()
    x, y, z = (v.witness[k] for k in "xyz")
    assert L.meet[x, L.join[y, z]] != L.join[L.meet[x, y], L.meet[x, z]]


def test_quasi_identity_catalog():
    for L in (m_n(3), m_n(4), product(m_n(3), chain(2))):
        assert satisfies_quasi_identity(L, QUASI_MOMEGA)
    v = satisfies_quasi_identity(m33(), QUASI_MOMEGA)
    assert not v
    L, w = m33(), v.witness
    # the counterexample satisfies the premises and breaks the conclusion
    assert w["b0'"] == L.join_all([w["b0"], w["a0"], w["a1"]])
    assert L.leq[L.meet[w["b0"], w["b1"]], L.join[w["a0"], w["a1"]]]
    top = L.meet[w["b0'"], w["b1'"]]
    lhs = L.join[L.meet[w["a0'"], top], L.meet[w["a1'"], top]]
    assert lhs != top


def test_premise_count_matches_brute_force():
    q = parse_quasi_identity("(implies (and (<= x y) (<= y z)) (<= x z))")
    L = n5()
    brute = sum(L.leq[x, y] and L.leq[y, z] for x in range(5) for y in range(5) for z in range(5))
    assert count_premise_solutions(L, q) == brute
    assert len(assignments(L, q.names, q.premises)) == brute


def test_presented_lattice_small():
    F = presented_lattice(chain(2), Presentation(("a",)))
    assert F.size == 1
    F = presented_lattice(chain(2), Presentation(("a", "b", "c", "d")))
    assert F.size == 166  # free distributive lattice on 4 generators
    assert no_mid_search(F) is None


def test_free_distributive_three():
    F = presented_lattice(chain(2), Presentation(("a", "b", "c")))
    assert F.size == 18


@pytest.mark.parametrize("m", [0, 1])
def test_omega_matches_brute_force(m):
    L = n5()
    pres = fm_presentation(m)
    brute = [z for z in itertools.product(range(L.n), repeat=len(pres.generators))
             if all(holds(L, r, dict(zip(pres.generators, z))) for r in pres.relations)]
    assert omega_m(m) == brute


def test_omega_members():
    om = set(omega_m(1))
    z = tuple_of(1, dot_sequence("p1", [0, 1], 1), dot_sequence("p3", [0, 1], 1), "p2", "p2")
    assert z in om
    assert (0, 0, 0, 0, 4, 4) not in om  # c ^ d = 1 is not below a0 v b0 = 0
    assert (0, 0, 1, 1) not in set(omega_m(0))


def test_f0_exceeds_default_cap_quickly():
    with pytest.raises(CapExceeded):
        f_m(0, cap=5000)
    F = f_m(0, cap=3000, strict=False)
    assert not F.complete
    with pytest.raises(NotMaterialized):
        no_mid_search(F, 0)


def test_beta0_of_point_vector():
    F = f_m(0, cap=3000, strict=False)
    t = point_vector(F, (1, 3, 2, 2), "p3")
    assert beta0(F, t).tolist() == F.generator("b0").tolist()


def test_beta_on_complete_presentation():
    F = presented_lattice(chain(2), Presentation(("a", "b")))
    assert F.size == 4
    for t in F.elements:
        assert np.array_equal(beta(F, t), t)


def test_solve_pointwise_systems():
    L = n5()
    pi = parse_identity
    assert solve_pointwise(L, [pi("(= t (join t #p2))"),
                               pi("(= t (join (meet t #p1) (meet t #p3)))")]) == [L.top]
    assert solve_pointwise(L, [pi("(= t (meet (join t #p2) (join t #p3)))"),
                               pi("(= t (join (meet t #p1) (meet t #p3)))")]) == \
        sorted(L.elem(e) for e in ("0", "p3", "1"))
    assert solve_pointwise(L, [pi("(= t (meet (join t #p2) (join t #p3)))"),
                               pi("(= t (meet t #p1))")]) == [L.bottom]


def test_generated_sublattice():
    L = n5()
    assert sublattice_closure(L, [L.elem("p1"), L.elem("p3")]) == [0, 1, 3, 4]
