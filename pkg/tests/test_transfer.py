import itertools
import random

import pytest

from latforge.catalog import boolean, chain, d4, d4hat, m33, m_n, n5
from latforge.errors import (BadFloor, ConclusionFailed, IndexOutOfWindow, NotConvexSublattice,
                             NotDistributive, NotInMomega, NotJoinHom, NotJoinIrreducible,
                             NoWitness, PreconditionFailed, PremiseViolated)
from latforge.lattice import is_hom, is_isomorphic, product, quotient, random_lattice
from latforge.linear import full_subspace_lattice
from latforge.partial import enumerate_homs
from latforge.properties import find_doubly_reducible, is_distributive, is_modular
from latforge.transfer import (IdealMap, antitone_tuples, build_choice_floor, d4_lift_relcompl,
                               d4_repair, has_transfer, ideal_project_search, ineq_chain_holds,
                               is_choice, is_convex_sublattice, is_surjective, notpure_diagnostic,
                               notpure_system_solve, p_dagger, pullback, rcml_choice_hom,
                               res_sys_solutions, sharp_transfer_witness, verify_choice_witness,
                               weakly_distributive, window_generators, window_lattice)


def embeddings(D, L, limit=None):
    gen = enumerate_homs(D, L, require_embedding=True)
    return [h.map for h, _ in zip(gen, range(limit or 10**9))]


def test_ideal_map_basics():
    L = boolean(2)
    phi = IdealMap(chain(2), L, (1, 3))
    assert phi.ideal(0) == [0, 1] and phi.contains(1, 2)
    assert phi.is_embedding()
    assert is_choice(phi, (0, 2)) and not is_choice(phi, (2, 2))
    assert has_transfer(phi, (0, 2)) and not has_transfer(phi, (1, 1))


def test_choice_floor_and_no_witness():
    D, L = d4(), product(m_n(3), m_n(3))
    phi = IdealMap(D, L, embeddings(D, L, 1)[0])
    f0 = build_choice_floor(phi)
    assert is_choice(phi, f0)
    with pytest.raises(NoWitness):
        build_choice_floor(IdealMap(chain(2), chain(2), (1, 1)))


def test_sharp_transfer_d4_into_products():
    D = d4()
    for L in (product(m_n(3), m_n(3)), product(m_n(3), chain(3))):
        embs = embeddings(D, L)
        assert embs
        for e in embs[:20]:
            phi = IdealMap(D, L, e)
            w = sharp_transfer_witness(phi, build_choice_floor(phi))
            assert w is not None and verify_choice_witness(phi, w)


def test_d4_does_not_embed_into_mn_or_chains():
    # M_n and chains have no doubly reducible element
    for L in (m_n(3), m_n(6), chain(5)):
        assert not find_doubly_reducible(L)
        assert embeddings(d4(), L) == []


def test_ideal_project_search_over_arbitrary_floors():
    D = d4()
    for L in (m_n(4), chain(3)):
        for hom in itertools.islice(enumerate_homs(D, L), 30):
            phi = IdealMap(D, L, hom.map)
            for f0 in itertools.islice(itertools.product(*[phi.ideal(x) for x in range(D.n)]), 40):
                w = ideal_project_search(phi, f0)
                assert w is not None
                assert all(L.leq[a, b] for a, b in zip(f0, w.map))
                assert verify_choice_witness(phi, w)
    with pytest.raises(BadFloor):
        ideal_project_search(IdealMap(chain(2), chain(2), (0, 0)), (1, 1))


def test_sharp_transfer_distributive_pairs():
    rng = random.Random(5)
    for D, L in [(boolean(2), boolean(3)), (chain(3), boolean(3)), (d4(), boolean(4)),
                 (boolean(2), m_n(4)), (chain(3), full_subspace_lattice(2, 3).lattice)]:
        embs = embeddings(D, L, 200)
        for e in rng.sample(embs, min(5, len(embs))):
            phi = IdealMap(D, L, e)
            w = sharp_transfer_witness(phi, build_choice_floor(phi))
            assert w is not None and verify_choice_witness(phi, w)


def test_weakly_distributive_examples():
    L = m33()
    assert weakly_distributive(L, L, range(L.n))
    assert weakly_distributive(boolean(2), chain(3), (0, 0, 0, 0))
    with pytest.raises(NotJoinHom):
        weakly_distributive(boolean(2), chain(3), (1, 1, 1, 0))


def test_d4hat_collapse_is_not_weakly_distributive():
    # c1 lies under the image a0 v a1 = c, but every join of elements
    # mapped under a0 and under a1 stays below c0
    K, D = d4hat(), d4()
    h = (0, 1, 2, 3, 3, 4, 5, 6)
    assert is_hom(K, D, h)
    v = weakly_distributive(K, D, h)
    assert not v
    x, y0, y1 = v.witness
    assert (K.names[x], D.names[y0], D.names[y1]) == ("c1", "a0", "a1")


def test_weakly_distributive_violation_found_by_search():
    B, C = boolean(2), chain(3)
    bad = []
    for h in itertools.product(range(C.n), repeat=B.n):
        if is_hom(B, C, h, join_only=True):
            v = weakly_distributive(B, C, h)
            if not v:
                bad.append((h, v.witness))
    assert bad
    h, (x, y0, y1) = bad[0]
    assert C.leq[h[x], C.join[y0, y1]]
    # no split of x exists
    assert not any(B.leq[x, B.join[a, b]] and C.leq[h[a], y0] and C.leq[h[b], y1]
                   for a in range(B.n) for b in range(B.n))


def test_pullback_identity_is_source():
    P, K = boolean(2), chain(3)
    f = next(enumerate_homs(P, K)).map
    Q, proj_f, proj_h = pullback(P, K, K, f, range(K.n))
    assert is_isomorphic(Q, P)
    assert is_hom(Q, P, proj_h) and is_hom(Q, K, proj_f)


def test_pullback_transfer_random():
    rng = random.Random(9)
    for it in range(100):
        L = random_lattice(rng.randrange(2, 7), rng)
        K, h = quotient(L, [(rng.randrange(L.n), rng.randrange(L.n))])
        P = random_lattice(rng.randrange(2, 7), rng)
        f = rng.choice([g.map for g, _ in zip(enumerate_homs(P, K), range(50))])
        Q, proj_f, proj_h = pullback(P, K, L, f, h)
        assert all(f[proj_h[q]] == h[proj_f[q]] for q in range(Q.n))
        assert is_surjective(proj_h, P.n)
        if weakly_distributive(L, K, h):
            assert weakly_distributive(Q, P, proj_h)


def test_d4_repair():
    r = d4_repair(m_n(4), "a1", "a2", "1", "1", "a1", "a2")
    assert is_hom(d4(), m_n(4), r.image)
    L = m33()
    with pytest.raises(NotInMomega):
        d4_repair(L, 0, 3, 1, 2, 5, 6)
    with pytest.raises(ConclusionFailed):
        d4_repair(L, 0, 3, 1, 2, 5, 6, check_variety=False)
    with pytest.raises(PremiseViolated) as exc:
        d4_repair(m_n(4), "a1", "a2", "1", "1", "0", "a2")
    assert exc.value.index == 1


def test_p_dagger():
    assert d4().names[p_dagger(d4(), 4)] == "b1"
    assert p_dagger(boolean(3), 1) == 6
    assert p_dagger(chain(3), 2) == 1
    with pytest.raises(NotDistributive):
        p_dagger(m_n(3), 1)
    with pytest.raises(NotJoinIrreducible):
        p_dagger(boolean(2), 3)


def test_rcml_choice_hom_samples():
    rng = random.Random(0)
    Ms = [boolean(4), full_subspace_lattice(2, 3).lattice, full_subspace_lattice(2, 4).lattice,
          product(m_n(3), boolean(2))]
    count = 0
    for D in (chain(3), boolean(2), boolean(3), d4()):
        for M in Ms:
            embs = embeddings(D, M, 200)
            for e in rng.sample(embs, min(3, len(embs))):
                phi = IdealMap(D, M, e)
                w = rcml_choice_hom(D, M, phi)
                assert verify_choice_witness(phi, w) and w.satisfies_transfer
                count += 1
    assert count >= 20
    with pytest.raises(PreconditionFailed):
        rcml_choice_hom(chain(2), n5(), IdealMap(chain(2), n5(), (0, 4)))


def relatively_complemented_cases():
    yield boolean(3), boolean(2), [s & 3 for s in range(8)]
    yield boolean(5), boolean(4), [s & 15 for s in range(32)]
    L = product(m_n(3), boolean(2))
    yield L, m_n(3), [i // 4 for i in range(L.n)]
    L = product(m_n(4), m_n(3))
    yield L, m_n(4), [i // 5 for i in range(L.n)]
    S = full_subspace_lattice(2, 3).lattice
    L = product(S, boolean(2))
    yield L, S, [i // 4 for i in range(L.n)]


def test_d4_lift_relcompl_samples():
    count = 0
    for L, K, h in relatively_complemented_cases():
        quads = [(a0, a1, b0, b1) for a0, a1, b0, b1 in itertools.product(range(K.n), repeat=4)
                 if K.join[a0, a1] == K.meet[b0, b1]]
        for a0, a1, b0, b1 in random.Random(K.n).sample(quads, min(10, len(quads))):
            x0, x1, y0, y1 = d4_lift_relcompl(K, L, h, a0, a1, b0, b1)
            assert (h[x0], h[x1], h[y0], h[y1]) == (a0, a1, b0, b1)
            assert L.join[x0, x1] == L.meet[y0, y1]
            count += 1
    assert count >= 20
    with pytest.raises(PreconditionFailed):
        d4_lift_relcompl(chain(2), chain(3), (0, 1, 1), 0, 0, 0, 0)


def test_windows_and_antitone_tuples():
    W = window_lattice(chain(3), range(3), 1)
    assert len(W) == 10  # weakly decreasing triples over 3 values
    assert len(antitone_tuples(chain(3), 3)) == 10
    L = m33()
    W = window_lattice(L, ["u", "v"], 1)
    C = {L.elem("u"), L.elem("v")}
    brute = [t for t in itertools.product(range(L.n), repeat=3)
             if L.leq[t[1], t[0]] and L.leq[t[2], t[1]] and C & set(t)]
    assert sorted(W.elements) == sorted(brute)
    assert W.check_closure()
    assert is_modular(W.lattice)
    with pytest.raises(NotConvexSublattice):
        window_lattice(L, ["v0", "v1"], 1)
    assert is_convex_sublattice(L, [L.elem("u"), L.elem("v")])


def test_window_generators_range():
    W = window_lattice(m33(), ["u", "v"], 2)
    for n in range(-1, 3):
        window_generators(W, 0, n)
    with pytest.raises(IndexOutOfWindow):
        window_generators(W, 0, 3)
    assert all(ineq_chain_holds(W, n) for n in range(-1, 2))


def test_res_sys_solutions():
    L = m33()
    named = {tuple(L.names[v] for v in q) for q in res_sys_solutions()}
    assert named == {("u0", "u1", "1", "1"), ("u1", "u0", "1", "1"), ("0", "0", "v0", "v1"),
                     ("0", "0", "v1", "v0"), ("u", "u", "u", "v"), ("u", "u", "v", "u"),
                     ("u", "v", "v", "v"), ("v", "u", "v", "v")}


@pytest.mark.parametrize("w", [1, 2, 3])
def test_notpure_window_system(w):
    assert notpure_system_solve(w) is None
    x0, x1, y0, y1 = notpure_system_solve(w, relaxed=True)
    assert len(x0) == 2 * w + 1
    diag = notpure_diagnostic(w)
    assert set(diag) == set(range(-w, w + 1))


def test_distributive_checks_used_by_rcml():
    assert is_distributive(d4()) and not is_distributive(full_subspace_lattice(2, 3).lattice)
