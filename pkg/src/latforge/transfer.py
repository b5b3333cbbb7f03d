"""Choice homomorphisms, transfer witnesses and the window lattices over M33.

For a finite lattice L every ideal is principal, so a homomorphism into
Id L is recorded by ``IdealMap`` as the map x -> generator of its ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct

import numpy as np

from latforge.catalog import d4, m33
from latforge.errors import (BadFloor, ConclusionFailed, IndexOutOfWindow,
                             NoRelativeComplement, NotConvexSublattice, NotDistributive,
                             NotInMomega, NotJoinHom, NotJoinIrreducible,
                             NoWitness, PreconditionFailed, PremiseViolated)
from latforge.lattice import FiniteLattice, is_hom, is_order_embedding
from latforge.partial import PartialLattice, as_partial, enumerate_homs, is_partial_hom
from latforge.properties import (Verdict, is_distributive, is_modular, is_relatively_complemented,
                                 join_irreducibles, relative_complements)
from latforge.search import Search
from latforge.varieties import in_Momega


@dataclass(frozen=True)
class IdealMap:
    """phi(x) = principal ideal of ``target`` generated by ``map[x]``."""
    source: object
    target: FiniteLattice
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))

    @property
    def partial(self) -> PartialLattice:
        return as_partial(self.source)

    def contains(self, x, t) -> bool:
        """t in phi(x)."""
        return bool(self.target.leq[t, self.map[x]])

    def ideal(self, x):
        return [int(t) for t in np.flatnonzero(self.target.leq[:, self.map[x]])]

    def is_hom(self) -> bool:
        return is_partial_hom(self.partial, self.target, self.map)

    def is_embedding(self) -> bool:
        P = self.partial
        f = np.asarray(self.map)
        return self.is_hom() and bool(
            np.array_equal(self.target.leq[f[:, None], f[None, :]], P.leq))


@dataclass(frozen=True)
class ChoiceWitness:
    map: tuple
    satisfies_transfer: bool
    details: dict = field(default_factory=dict, compare=False)


def is_choice(phi: IdealMap, f) -> bool:
    return all(phi.contains(x, int(f[x])) for x in range(len(phi.map)))


def has_transfer(phi: IdealMap, f) -> bool:
    """f(x) in phi(y) implies x <= y."""
    P = phi.partial
    L = phi.target
    for x in range(P.n):
        for y in range(P.n):
            if L.leq[f[x], phi.map[y]] and not P.leq[x, y]:
                return False
    return True


def verify_choice_witness(phi: IdealMap, w: ChoiceWitness) -> bool:
    ok = is_partial_hom(phi.partial, phi.target, w.map) and is_choice(phi, w.map)
    if w.satisfies_transfer:
        ok = ok and has_transfer(phi, w.map)
    return ok


# -- weak distributivity and pullbacks --------------------------------------

def weakly_distributive(K: FiniteLattice, L: FiniteLattice, h) -> Verdict:
    """Def of weak distributivity for a join-homomorphism ``h: K -> L``.

    Witness ``(x, y0, y1)``. The best candidates are x_i = the largest
    element of K whose image is below y_i (it exists iff some image is).
    """
    h = np.asarray(h, dtype=np.int64)
    if not is_hom(K, L, h, join_only=True):
        raise NotJoinHom("map does not preserve joins")
    below = L.leq[h][:, :]  # below[t, y]: h(t) <= y
    largest = []
    for y in range(L.n):
        ts = np.flatnonzero(below[:, y])
        largest.append(K.join_all(ts) if len(ts) else None)
    for x in range(K.n):
        for y0 in range(L.n):
            for y1 in range(L.n):
                if not L.leq[h[x], L.join[y0, y1]]:
                    continue
                r0, r1 = largest[y0], largest[y1]
                if r0 is None or r1 is None or not K.leq[x, K.join[r0, r1]]:
                    return Verdict(False, (x, y0, y1))
    return Verdict(True)


def pullback(P, K, L, f, h):
    """``Q = {(x, y) : f(x) = h(y)}`` with projections to L and to P."""
    f = [int(v) for v in f]
    h = [int(v) for v in h]
    pairs = [(x, y) for x in range(P.n) for y in range(L.n) if f[x] == h[y]]
    if not pairs:
        raise ValueError("empty pullback")
    Q = FiniteLattice.from_elements(
        pairs,
        lambda s, t: (int(P.meet[s[0], t[0]]), int(L.meet[s[1], t[1]])),
        lambda s, t: (int(P.join[s[0], t[0]]), int(L.join[s[1], t[1]])),
        names=[f"({P.names[x]},{L.names[y]})" for x, y in pairs])
    proj_f = tuple(y for _, y in pairs)
    proj_h = tuple(x for x, _ in pairs)
    return Q, proj_f, proj_h


def is_surjective(f, target_n) -> bool:
    return set(int(v) for v in f) == set(range(target_n))


# -- choice floors and witness searches -------------------------------------

def build_choice_floor(phi: IdealMap) -> tuple:
    """f0(x) = o v join of a_{x,y} over y with x not <= y, where o is the
    first element of phi(0) and a_{x,y} the first element of
    phi(x) outside phi(y)."""
    P = phi.partial
    L = phi.target
    bottom = P.bottom
    if bottom is None:
        raise PreconditionFailed("source has no least element")
    o = phi.ideal(bottom)[0]
    f0 = []
    for x in range(P.n):
        acc = o
        for y in range(P.n):
            if P.leq[x, y]:
                continue
            cand = [t for t in phi.ideal(x) if not phi.contains(y, t)]
            if not cand:
                raise NoWitness(f"phi({P.names[x]}) is inside phi({P.names[y]})")
            acc = int(L.join[acc, cand[0]])
        f0.append(acc)
    return tuple(f0)


def sharp_transfer_witness(phi: IdealMap, floor=None):
    """First choice homomorphism (above ``floor``) with the transfer
    condition, or None. The transfer condition only involves f(x), so it is
    applied as a filter on each element's candidates."""
    P = phi.partial
    L = phi.target
    domains = []
    for x in range(P.n):
        outside = [y for y in range(P.n) if not P.leq[x, y]]
        domains.append([t for t in phi.ideal(x)
                        if not any(phi.contains(y, t) for y in outside)])
    hom = next(enumerate_homs(P, L, floor=floor, domains=domains), None)
    if hom is None:
        return None
    return ChoiceWitness(hom.map, True)


def ideal_project_search(phi: IdealMap, f0):
    """First choice homomorphism f with f0 <= f, or None."""
    f0 = tuple(int(v) for v in f0)
    if not is_choice(phi, f0):
        raise BadFloor("floor is not a choice function")
    hom = next(enumerate_homs(phi.partial, phi.target, floor=f0,
                              domains=[phi.ideal(x) for x in range(len(f0))]), None)
    return None if hom is None else ChoiceWitness(hom.map, False)


# -- D4 in M_omega ----------------------------------------------------------

@dataclass(frozen=True)
class D4Repair:
    a_star: tuple
    b_prime: tuple
    image: tuple  # indexed by the D4 labels 0, a0, a1, c, b0, b1, 1


def d4_repair(M, a0, a1, b0, b1, a0p, a1p, check_variety=True) -> D4Repair:
    """b'_i = b_i v a0 v a1 and a*_i = a'_i ^ b'0 ^ b'1, assembled into a
    homomorphic image of D4.

    Premise indices: 1 is a_i <= a'_i, 3 is b0 ^ b1 <= a0 v a1, 4 is
    b'0 ^ b'1 <= a'0 v a'1 (2 holds by construction of b').
    """
    a0, a1, b0, b1, a0p, a1p = (M.elem(v) for v in (a0, a1, b0, b1, a0p, a1p))
    if check_variety and not in_Momega(M):
        raise NotInMomega("lattice is outside M_omega")
    if not (M.leq[a0, a0p] and M.leq[a1, a1p]):
        raise PremiseViolated(1, "need a_i <= a'_i")
    a = int(M.join[a0, a1])
    bp = (int(M.join[b0, a]), int(M.join[b1, a]))
    if not M.leq[M.meet[b0, b1], a]:
        raise PremiseViolated(3, "need b0 ^ b1 <= a0 v a1")
    top = int(M.meet[bp[0], bp[1]])
    if not M.leq[top, M.join[a0p, a1p]]:
        raise PremiseViolated(4, "need b'0 ^ b'1 <= a'0 v a'1")
    star = (int(M.meet[a0p, top]), int(M.meet[a1p, top]))
    if int(M.join[star[0], star[1]]) != top:
        raise ConclusionFailed(
            f"a*0 v a*1 = {M.names[M.join[star[0], star[1]]]} but b'0 ^ b'1 = {M.names[top]}")
    image = (int(M.meet[star[0], star[1]]), star[0], star[1], top, bp[0], bp[1],
             int(M.join[bp[0], bp[1]]))
    assert is_hom(d4(), M, image)
    return D4Repair(star, bp, image)


# -- finite distributive into relatively complemented modular -----------------

def p_dagger(D, p) -> int:
    """Largest t with p not <= t, for join-irreducible p of distributive D."""
    if not is_distributive(D):
        raise NotDistributive("lattice is not distributive")
    lower = D.lower_covers(p)
    if len(lower) != 1:
        raise NotJoinIrreducible(f"{D.names[p]} is not join-irreducible")
    pd = D.join_all([t for t in range(D.n) if not D.leq[p, t]])
    assert not D.leq[p, pd]
    assert int(D.meet[p, pd]) == lower[0]
    return pd


def rcml_choice_hom(D, M, phi: IdealMap) -> ChoiceWitness:
    """Choice homomorphism with the transfer condition for an embedding of a
    finite distributive D into a relatively complemented modular M.

    o = phi(0) generator, a_k = phi(p_k) generator (already above o), and
    f(x) = o v join of the b_i with p_i <= x; the empty join is o so that
    f(0) = f(p) ^ f(q) for disjoint join-irreducibles.
    """
    if not is_distributive(D):
        raise PreconditionFailed("D is not distributive")
    if not is_modular(M):
        raise PreconditionFailed("M is not modular")
    if not is_relatively_complemented(M):
        raise PreconditionFailed("M is not relatively complemented")
    if not (is_hom(D, M, phi.map) and is_order_embedding(D, M, phi.map)):
        raise PreconditionFailed("phi is not a lattice embedding")
    ji = sorted(join_irreducibles(D), key=lambda p: (int(D.leq[:, p].sum()), p))
    o = phi.map[D.bottom]
    daggers = [p_dagger(D, p) for p in ji]
    a, b = [], []
    prefix = o  # a_{<k}
    for k, p in enumerate(ji):
        ak = int(M.join[phi.map[p], o])
        assert not phi.contains(daggers[k], ak)
        low = int(M.meet[ak, prefix])
        comps = relative_complements(M, low, o, ak)
        if not comps:
            raise NoRelativeComplement(f"no complement of {M.names[low]} in [o, a_{k + 1}]")
        bk = comps[0]
        # Claim: a_k ^ a_<k lies in phi(p_*) and b_k in phi(p) minus phi(p†)
        assert phi.contains(D.lower_covers(p)[0], low)
        assert phi.contains(p, bk) and not phi.contains(daggers[k], bk)
        a.append(ak)
        b.append(bk)
        prefix = int(M.join[prefix, ak])
    # independence over o
    acc = o
    for bk in b:
        assert int(M.meet[bk, acc]) == o
        acc = int(M.join[acc, bk])
    f = []
    for x in range(D.n):
        val = o
        for p, bk in zip(ji, b):
            if D.leq[p, x]:
                val = int(M.join[val, bk])
        f.append(val)
    f = tuple(f)
    assert is_hom(D, M, f), "f is not a lattice homomorphism"
    assert is_choice(phi, f)
    assert has_transfer(phi, f)
    return ChoiceWitness(f, True, {"o": o, "ji": ji, "a": a, "b": b, "dagger": daggers})


def d4_lift_relcompl(K, L, h, a0, a1, b0, b1):
    """Lift a0 v a1 = b0 ^ b1 in K along a surjective hom h: L -> K with L
    relatively complemented. Returns (x0, x1, y0, y1)."""
    h = tuple(int(v) for v in h)
    a0, a1, b0, b1 = (K.elem(v) for v in (a0, a1, b0, b1))
    if int(K.join[a0, a1]) != int(K.meet[b0, b1]):
        raise PreconditionFailed("need a0 v a1 = b0 ^ b1")
    if set(h) != set(range(K.n)):
        raise PreconditionFailed("h is not surjective")
    if not is_hom(L, K, h):
        raise PreconditionFailed("h is not a lattice homomorphism")
    if not is_relatively_complemented(L):
        raise PreconditionFailed("L is not relatively complemented")

    def pre(t):
        return h.index(t)

    u0, x1, y0, y1 = pre(a0), pre(a1), pre(b0), pre(b1)
    s = int(L.join[u0, x1])
    y0, y1 = int(L.join[y0, s]), int(L.join[y1, s])
    top = int(L.meet[y0, y1])
    comps = relative_complements(L, s, u0, top)
    if not comps:
        raise NoRelativeComplement("no relative complement in [u0, y0 ^ y1]")
    x0 = comps[0]
    assert (h[x0], h[x1], h[y0], h[y1]) == (a0, a1, b0, b1)
    assert int(L.join[x0, x1]) == top
    return x0, x1, y0, y1


# -- window lattices ---------------------------------------------------------

def is_convex_sublattice(L, C) -> bool:
    C = set(int(c) for c in C)
    if not C:
        return False
    for a in C:
        for b in C:
            if int(L.meet[a, b]) not in C or int(L.join[a, b]) not in C:
                return False
            if L.leq[a, b]:
                between = np.flatnonzero(L.leq[a] & L.leq[:, b])
                if not set(int(t) for t in between) <= C:
                    return False
    return True


def antitone_tuples(L, length):
    """All weakly decreasing tuples of the given length, lexicographically."""
    out = []
    cur = []

    def rec():
        if len(cur) == length:
            out.append(tuple(cur))
            return
        for t in range(L.n):
            if not cur or L.leq[t, cur[-1]]:
                cur.append(t)
                rec()
                cur.pop()

    rec()
    return out


class WindowLattice:
    """Antitone maps [-w, w] -> L whose range meets the convex sublattice C.

    Position k of the window is tuple index k + w.
    """

    def __init__(self, L, C, w):
        if w < 0:
            raise ValueError("w must be >= 0")
        C = sorted(set(L.elem(c) for c in C))
        if not is_convex_sublattice(L, C):
            raise NotConvexSublattice("C is not a convex sublattice")
        self.base, self.convex, self.w = L, tuple(C), w
        inC = np.zeros(L.n, dtype=bool)
        inC[C] = True
        self._in_convex = inC
        self.elements = [t for t in antitone_tuples(L, 2 * w + 1) if inC[list(t)].any()]
        self._index = {t: i for i, t in enumerate(self.elements)}

    @property
    def positions(self):
        return range(-self.w, self.w + 1)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, t):
        return tuple(t) in self._index

    def index(self, t):
        return self._index[tuple(t)]

    def meet(self, s, t):
        return tuple(int(self.base.meet[a, b]) for a, b in zip(s, t))

    def join(self, s, t):
        return tuple(int(self.base.join[a, b]) for a, b in zip(s, t))

    def leq(self, s, t):
        return all(self.base.leq[a, b] for a, b in zip(s, t))

    def constant(self, x):
        return (self.base.elem(x),) * (2 * self.w + 1)

    def check_closure(self) -> bool:
        """Componentwise meets and joins stay inside (vectorized)."""
        T = np.array(self.elements, dtype=np.int64)
        codes = self._codes(T)
        order = np.sort(codes)
        for i in range(len(T)):
            for table in (self.base.meet, self.base.join):
                c = self._codes(table[T[i][None, :], T])
                pos = np.searchsorted(order, c)
                pos = np.minimum(pos, len(order) - 1)
                if not (order[pos] == c).all():
                    return False
        return True

    def _codes(self, T):
        weights = self.base.n ** np.arange(T.shape[1] - 1, -1, -1, dtype=np.int64)
        return T @ weights

    @cached_property
    def lattice(self) -> FiniteLattice:
        """Materialized with index order a linear extension (height sum)."""
        heights = np.asarray(self.base.heights)
        T = np.array(self.elements, dtype=np.int64)
        perm = np.lexsort(tuple(T[:, ::-1].T) + (heights[T].sum(axis=1),))
        T = T[perm]
        codes = self._codes(T)
        order = np.argsort(codes)
        sorted_codes = codes[order]
        n = len(T)
        meet = np.empty((n, n), dtype=np.int32)
        join = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            for out, table in ((meet, self.base.meet), (join, self.base.join)):
                c = self._codes(table[T[i][None, :], T])
                out[i] = order[np.searchsorted(sorted_codes, c)]
        leq = meet == np.arange(n)[:, None]
        names = ["".join(self.base.names[v] + "," for v in row).rstrip(",") for row in T]
        return FiniteLattice(leq, meet, join, names)


def window_lattice(L, C, w) -> WindowLattice:
    return WindowLattice(L, C, w)


def window_generators(W: WindowLattice, i, n):
    """(a_{i,n}, b_{i,n}) restricted to the window, as tuples."""
    if i not in (0, 1):
        raise ValueError("i must be 0 or 1")
    if not -W.w + 1 <= n <= W.w:
        raise IndexOutOfWindow(f"n={n} needs -w+1 <= n <= w for w={W.w}")
    L = W.base
    ui, vi = L.elem(f"u{i}"), L.elem(f"v{i}")
    u, v, zero, one = L.elem("u"), L.elem("v"), L.elem("0"), L.elem("1")
    a = tuple(ui if k <= n - 1 else u if k == n else zero for k in W.positions)
    b = tuple(one if k <= n - 2 else v if k == n - 1 else vi for k in W.positions)
    assert a in W and b in W
    return a, b


def ineq_chain_holds(W: WindowLattice, n) -> bool:
    """b0n ^ b1n <= a0n v a1n <= b0(n+1) ^ b1(n+1)."""
    a0, b0 = window_generators(W, 0, n)
    a1, b1 = window_generators(W, 1, n)
    a0s, b0s = window_generators(W, 0, n + 1)
    a1s, b1s = window_generators(W, 1, n + 1)
    mid = W.join(a0, a1)
    return W.leq(W.meet(b0, b1), mid) and W.leq(mid, W.meet(b0s, b1s))


def _res_sys_ok(L, x0, x1, y0, y1):
    u, v = L.elem("u"), L.elem("v")
    J, M = L.join, L.meet
    top = M[y0, y1]
    return bool(J[x0, x1] == top
                and J[x0, v] == J[y0, y1] and J[x1, v] == J[y0, y1]
                and M[y0, u] == M[x0, x1] and M[y1, u] == M[x0, x1])


def res_sys_solutions(L=None):
    """All (x0, x1, y0, y1) in M33^4 solving the three equation groups."""
    L = L or m33()
    return [q for q in iproduct(range(L.n), repeat=4) if _res_sys_ok(L, *q)]


def _notpure_supports(W: WindowLattice):
    L = W.base
    sols = res_sys_solutions(L)
    a00, _ = window_generators(W, 0, 0)
    a10, _ = window_generators(W, 1, 0)
    _, b01 = window_generators(W, 0, 1)
    _, b11 = window_generators(W, 1, 1)
    lower = list(zip(a00, a10, b01, b11))
    return sols, [[q for q in sols if all(L.leq[lo, x] for lo, x in zip(lower[j], q))]
                  for j in range(2 * W.w + 1)]


def notpure_diagnostic(w):
    """Per window position, the quadruples allowed by the pointwise system
    and the lower bounds alone."""
    W = window_lattice(m33(), ["u", "v"], w)
    _, supp = _notpure_supports(W)
    return {k: supp[k + w] for k in W.positions}


def notpure_system_solve(w, relaxed=False):
    """Solve the four constraint groups for (x0, x1, y0, y1) in W^4.

    The equations are componentwise, so position k of a solution is one of
    the pointwise solutions above the parameters at k. The search picks one
    per position, keeps the four rows antitone, and at the end requires
    each row to meet {u, v} (dropped when ``relaxed``, where C = M33).
    Returns a tuple of four window tuples, or None.
    """
    L = m33()
    W = window_lattice(L, ["u", "v"], w)
    _, supp = _notpure_supports(W)
    C = np.zeros(L.n, dtype=bool)
    C[[L.elem("u"), L.elem("v")]] = True
    s = Search([range(len(d)) for d in supp])
    for j in range(1, len(supp)):
        s.add((j - 1, j), lambda p, q, j=j: all(
            L.leq[x, y] for x, y in zip(supp[j][q], supp[j - 1][p])))
    if not relaxed:
        def meets(*choice):
            rows = zip(*[supp[j][c] for j, c in enumerate(choice)])
            return all(C[list(r)].any() for r in rows)
        s.add(tuple(range(len(supp))), meets)
    sol = s.first()
    if sol is None:
        return None
    quads = [supp[j][c] for j, c in enumerate(sol)]
    x0, x1, y0, y1 = (tuple(q[r] for q in quads) for r in range(4))
    if not relaxed:
        assert all(t in W for t in (x0, x1, y0, y1))
    ubar, vbar = W.constant("u"), W.constant("v")
    assert W.join(x0, x1) == W.meet(y0, y1)
    assert W.join(x0, vbar) == W.join(x1, vbar) == W.join(y0, y1)
    assert W.meet(y0, ubar) == W.meet(y1, ubar) == W.meet(x0, x1)
    return x0, x1, y0, y1
