"""Registry of regression claims run by ``latforge verify-paper``.

Each claim is a function ``(ctx) -> (ok, witness)`` with its expected
outcome built in; ``ok`` is True when the computation matches. A claim that
cannot be decided within the closure cap raises CapExceeded and is reported
as skipped, together with any sub-claims it managed to check.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from latforge.catalog import boolean, catalog, chain, d4, m33, m_n, n5
from latforge.errors import CapExceeded
from latforge.lattice import product, quotient, random_lattice
from latforge.linear import cd_family, full_subspace_lattice
from latforge.partial import diamond, enumerate_homs, whitman_partial
from latforge.properties import (find_doubly_reducible, has_sublattice_copy,
                                 is_semidistributive, satisfies_whitman)
from latforge.terms import JONSSON, parse_identity
from latforge.transfer import (IdealMap, d4_lift_relcompl, ineq_chain_holds, is_surjective,
                               notpure_system_solve, pullback, rcml_choice_hom,
                               res_sys_solutions, verify_choice_witness, weakly_distributive,
                               window_lattice)
from latforge.varieties import (DEFAULT_CAP, QUASI_MOMEGA, beta0, dot_sequence, f_m, in_Momega,
                                no_mid_search, omega_m, point_vector, satisfies_identity,
                                satisfies_quasi_identity, solve_pointwise, tuple_of)


@dataclass
class Context:
    cap: int = DEFAULT_CAP
    seed: int = 0
    notes: dict = field(default_factory=dict)


def default_cap():
    env = os.environ.get("LATFORGE_CAP")
    return int(env) if env else DEFAULT_CAP


def _named(L, tup):
    return tuple(L.names[int(v)] for v in tup)


# -- window system -----------------------------------------------------------

RESSYS_EXPECTED = {
    ("u0", "u1", "1", "1"), ("u1", "u0", "1", "1"), ("0", "0", "v0", "v1"),
    ("0", "0", "v1", "v0"), ("u", "u", "u", "v"), ("u", "u", "v", "u"),
    ("u", "v", "v", "v"), ("v", "u", "v", "v"),
}


def claim_ressys(ctx):
    L = m33()
    found = [_named(L, q) for q in res_sys_solutions(L)]
    return set(found) == RESSYS_EXPECTED and len(found) == 8, found


def _notpure(w):
    def run(ctx):
        strict = notpure_system_solve(w)
        relaxed = notpure_system_solve(w, relaxed=True)
        L = m33()
        witness = None if relaxed is None else [_named(L, t) for t in relaxed]
        return strict is None and relaxed is not None, {"strict": strict, "relaxed": witness}
    return run


def claim_ineq_chain(ctx):
    rows = {}
    for w in (1, 2, 3):
        W = window_lattice(m33(), ["u", "v"], w)
        rows[w] = {n: ineq_chain_holds(W, n) for n in range(-w + 1, w)}
    return all(all(r.values()) for r in rows.values()), rows


# -- identities -----------------------------------------------------------

def claim_jonsson_mn(ctx):
    cases = [(f"M_{k}", m_n(k)) for k in range(3, 7)]
    cases += [(f"chain_{k}", chain(k)) for k in range(1, 6)]
    cases.append(("M_3xM_3", product(m_n(3), m_n(3))))
    rows = {name: bool(satisfies_identity(L, JONSSON)) for name, L in cases}
    rows.update({f"in_Momega(M_{k})": in_Momega(m_n(k)) for k in range(3, 7)})
    return all(rows.values()), rows


def claim_jonsson_m33(ctx):
    L = m33()
    v = satisfies_identity(L, JONSSON)
    witness = None if v else {k: L.names[x] for k, x in v.witness.items()}
    return not v and not in_Momega(L), witness


def claim_quasi_momega(ctx):
    rows = {}
    for name, L in [("M_3", m_n(3)), ("M_4", m_n(4)), ("M_5", m_n(5)),
                    ("M_3xchain_2", product(m_n(3), chain(2)))]:
        rows[name] = bool(satisfies_quasi_identity(L, QUASI_MOMEGA))
    L = m33()
    v = satisfies_quasi_identity(L, QUASI_MOMEGA)
    rows["M33 refuted"] = not v
    witness = None if v else {k: L.names[x] for k, x in v.witness.items()}
    return all(rows.values()), {"checks": rows, "M33 counterexample": witness}


# -- presented lattices F_m --------------------------------------------------

POINTWISE = [
    ("{1}", ["(= t (join t #p2))", "(= t (join (meet t #p1) (meet t #p3)))"], ["1"]),
    ("{0,p3,1}", ["(= t (meet (join t #p2) (join t #p3)))",
                  "(= t (join (meet t #p1) (meet t #p3)))"], ["0", "p3", "1"]),
    ("{0}", ["(= t (meet (join t #p2) (join t #p3)))", "(= t (meet t #p1))"], ["0"]),
]


def pointwise_subclaims():
    """The three one-variable systems in N5 and the omega memberships."""
    L = n5()
    rows = {}
    for label, texts, expected in POINTWISE:
        got = solve_pointwise(L, [parse_identity(t) for t in texts])
        rows[f"pointwise {label}"] = sorted(got) == sorted(L.elem(e) for e in expected)
    for m in range(3):
        om = set(omega_m(m))
        full = range(m + 1)
        rows[f"omega_{m} (p1,p3,p2,p2)"] = tuple_of(
            m, dot_sequence("p1", full, m), dot_sequence("p3", full, m), "p2", "p2") in om
        rows[f"omega_{m} (p1.m,p2,p3)"] = tuple_of(
            m, dot_sequence("p1", [], m), dot_sequence("p1", [m], m), "p2", "p3") in om
        for k in range(m):
            rows[f"omega_{m} k={k}"] = tuple_of(
                m, dot_sequence("p3", range(k + 1, m + 1), m),
                dot_sequence("p1", range(k, m + 1), m), "p2", "p3") in om
    return rows


def claim_nomid_pointwise(ctx):
    rows = pointwise_subclaims()
    return all(rows.values()), rows


def claim_nomid_m0(ctx):
    ctx.notes["subclaims"] = pointwise_subclaims()
    F = f_m(0, cap=ctx.cap)
    t = point_vector(F, (1, 3, 2, 2), "p3")
    ok_beta = beta0(F, t).tolist() == F.generator("b0").tolist()
    hit = no_mid_search(F, 0)
    return hit is None and ok_beta, {"size": F.size, "witness": None if hit is None else hit.tolist()}


# -- linear -------------------------------------------------------------------

def claim_cd_family(ctx):
    rows = {}
    for N, q in [(5, 2), (6, 2), (5, 3)]:
        rows[f"N={N},q={q}"] = all(all(v for k, v in r.items() if k != "n")
                                   for r in cd_family(N, q).check())
    return all(rows.values()), rows


# -- transfer -------------------------------------------------------------------

def claim_rcml_demo(ctx):
    D = d4()
    M = full_subspace_lattice(2, 4).lattice
    hom = next(enumerate_homs(D, M, require_embedding=True))
    phi = IdealMap(D, M, hom.map)
    w = rcml_choice_hom(D, M, phi)
    return verify_choice_witness(phi, w) and w.satisfies_transfer, \
        {"phi": _named(M, phi.map), "f": _named(M, w.map)}


def claim_d4_lift(ctx):
    cases = []
    L = boolean(3)
    h = [s & 3 for s in range(8)]  # B_3 -> B_2 forgetting the third atom
    cases.append((boolean(2), L, h, 1, 2, 3, 3))
    L = product(m_n(3), boolean(2))
    cases.append((m_n(3), L, [i // 4 for i in range(L.n)], 1, 2, 4, 4))
    # a proper doubly reducible element {0,1} = {0} v {1} = {0,1,2} ^ {0,1,3} of B_4
    cases.append((boolean(4), boolean(5), [s & 15 for s in range(32)], 1, 2, 7, 11))
    out = []
    for K, L, h, a0, a1, b0, b1 in cases:
        out.append(d4_lift_relcompl(K, L, h, a0, a1, b0, b1))
    return True, out


def claim_diamond_w(ctx):
    rows = {n: bool(whitman_partial(diamond(n))) for n in range(1, 6)}
    return all(rows[n] == (n <= 3) for n in rows), rows


def claim_whitman_catalog(ctx):
    v = satisfies_whitman(d4())
    rows = {
        "D4 fails (W)": not v,
        "M_3 satisfies (W)": bool(satisfies_whitman(m_n(3))),
        "M_3 not semidistributive": not is_semidistributive(m_n(3)),
    }
    return all(rows.values()), {"checks": rows, "D4 witness": _named(d4(), v.witness)}


def random_pullback_instance(rng, it):
    L = random_lattice(rng.randrange(2, 7), random.Random(rng.random()))
    K, h = quotient(L, [(rng.randrange(L.n), rng.randrange(L.n))])
    P = random_lattice(rng.randrange(2, 7), random.Random(rng.random()))
    homs = [f.map for f, _ in zip(enumerate_homs(P, K), range(50))]
    return P, K, L, rng.choice(homs), h


def claim_pullback_wd(ctx, instances=100):
    rng = random.Random(ctx.seed)
    stats = {"instances": 0, "wd": 0, "failures": []}
    for it in range(instances):
        P, K, L, f, h = random_pullback_instance(rng, it)
        Q, proj_f, proj_h = pullback(P, K, L, f, h)
        stats["instances"] += 1
        if not is_surjective(proj_h, P.n):
            stats["failures"].append((it, "surjective"))
        if weakly_distributive(L, K, h):
            stats["wd"] += 1
            if not weakly_distributive(Q, P, proj_h):
                stats["failures"].append((it, "weakly distributive"))
    return not stats["failures"], stats


def catalog_lattices():
    names = ["D4", "D4hat", "N5", "M33"] + [f"M_{k}" for k in range(3, 7)]
    names += [f"B_{k}" for k in range(1, 5)] + [f"chain_{k}" for k in range(1, 6)]
    return [(name, catalog(name)) for name in names]


def claim_doubly_reducible(ctx, samples=200):
    rng = random.Random(ctx.seed)
    D = d4()
    bad = []
    cases = catalog_lattices()
    cases += [(f"random#{i}", random_lattice(rng.randrange(1, 9), rng)) for i in range(samples)]
    hits = 0
    for name, L in cases:
        dr = bool(find_doubly_reducible(L))
        hits += dr
        if dr != (has_sublattice_copy(L, D) is not None):
            bad.append(name)
    return not bad, {"cases": len(cases), "with D4 copy": hits, "mismatches": bad}


REGISTRY = {
    "ressys": claim_ressys,
    "notpure-w1": _notpure(1),
    "notpure-w2": _notpure(2),
    "ineq-chain": claim_ineq_chain,
    "jonsson-mn": claim_jonsson_mn,
    "jonsson-m33": claim_jonsson_m33,
    "quasi-momega": claim_quasi_momega,
    "nomid-m0": claim_nomid_m0,
    "nomid-pointwise": claim_nomid_pointwise,
    "cd-family": claim_cd_family,
    "rcml-demo": claim_rcml_demo,
    "d4-lift": claim_d4_lift,
    "diamond-w": claim_diamond_w,
    "whitman-catalog": claim_whitman_catalog,
    "pullback-wd": claim_pullback_wd,
    "doubly-reducible": claim_doubly_reducible,
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def run_claim(claim_id, cap=DEFAULT_CAP, seed=0) -> dict:
    """Run one registered claim; status is PASS, FAIL or SKIPPED(CapExceeded)."""
    ctx = Context(cap=cap, seed=seed)
    start = time.perf_counter()
    try:
        ok, witness = REGISTRY[claim_id](ctx)
        status = "PASS" if ok else "FAIL"
    except CapExceeded as exc:
        status, witness = "SKIPPED(CapExceeded)", {"cap": exc.cap, "reached": exc.reached}
        sub = ctx.notes.get("subclaims")
        if sub is not None and not all(sub.values()):
            status = "FAIL"
    except AssertionError as exc:
        status, witness = "FAIL", {"assertion": str(exc)}
    report = {"id": claim_id, "status": status,
              "runtime": round(time.perf_counter() - start, 3),
              "witness": _jsonable(witness)}
    if ctx.notes:
        report["subclaims"] = _jsonable(ctx.notes.get("subclaims"))
    return report


def _run_star(args):
    return run_claim(*args)


def run_claims(ids=None, cap=DEFAULT_CAP, seed=0, parallel=False) -> list:
    """Reports in registry order whatever the execution order."""
    ids = list(REGISTRY) if ids is None else list(ids)
    jobs = [(i, cap, seed) for i in ids]
    if parallel and len(jobs) > 1:
        with ProcessPoolExecutor() as pool:
            reports = list(pool.map(_run_star, jobs))
    else:
        reports = [run_claim(*j) for j in jobs]
    order = {k: i for i, k in enumerate(REGISTRY)}
    return sorted(reports, key=lambda r: order[r["id"]])
