"""Partial lattices, their homomorphisms, and the Davey-Sands lifting."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from latforge.catalog import boolean, subset_name
from latforge.errors import (BadParam, NoMinimum, NotHomomorphism, NotSurjective,
                             PreconditionW, UnknownName)
from latforge.lattice import FiniteLattice, is_hom, order_from_covers
from latforge.properties import Verdict
from latforge.search import Search


class PartialLattice:
    """A poset with declared finite joins and meets.

    ``joins`` and ``meets`` are tuples of ``(members, value)`` with
    ``members`` a frozenset of element indices.
    """

    def __init__(self, leq, joins=(), meets=(), names=None):
        leq = np.array(leq, dtype=bool)
        leq.setflags(write=False)
        self.n = leq.shape[0]
        self.leq = leq
        self.joins = tuple((frozenset(int(x) for x in X), int(a)) for X, a in joins)
        self.meets = tuple((frozenset(int(x) for x in X), int(a)) for X, a in meets)
        for X, _ in self.joins + self.meets:
            if not X:
                raise ValueError("constraint sets must be nonempty")
        if names is None:
            names = [str(i) for i in range(self.n)]
        self.names = tuple(str(s) for s in names)
        self._index = {s: i for i, s in enumerate(self.names)}

    @classmethod
    def from_lattice(cls, L: FiniteLattice):
        """Total partial lattice: binary joins and meets of incomparable pairs.

        Comparable pairs are omitted since isotone maps preserve them anyway.
        """
        joins, meets = [], []
        for x, y in combinations(range(L.n), 2):
            if not L.leq[x, y] and not L.leq[y, x]:
                joins.append(({x, y}, int(L.join[x, y])))
                meets.append(({x, y}, int(L.meet[x, y])))
        return cls(L.leq, joins, meets, L.names)

    def elem(self, x):
        if isinstance(x, (int, np.integer)):
            return int(x)
        try:
            return self._index[x]
        except KeyError:
            raise UnknownName(f"no element named {x!r}") from None

    @property
    def bottom(self):
        least = np.flatnonzero(self.leq.all(axis=1))
        return int(least[0]) if len(least) else None

    @property
    def top(self):
        greatest = np.flatnonzero(self.leq.all(axis=0))
        return int(greatest[0]) if len(greatest) else None

    def covers(self):
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        return [(int(a), int(b)) for a, b in np.argwhere(lt & ~between)]

    def to_spec(self):
        return {
            "n": self.n,
            "covers": [list(c) for c in self.covers()],
            "names": list(self.names),
            "joins": [[sorted(X), a] for X, a in self.joins],
            "meets": [[sorted(X), a] for X, a in self.meets],
        }

    @classmethod
    def from_spec(cls, spec):
        L_order = order_from_covers(spec["n"], spec["covers"])
        return cls(L_order, [(X, a) for X, a in spec.get("joins", [])],
                   [(X, a) for X, a in spec.get("meets", [])], spec.get("names"))


def validate_partial(P: PartialLattice) -> Verdict:
    """Check the poset axioms and the up-set/down-set conditions.

    Witness: ``("order", x, y)`` or ``("join" | "meet", value, sorted members)``.
    """
    L = P.leq
    n = P.n
    for x in range(n):
        if not L[x, x]:
            return Verdict(False, ("order", x, x))
    anti = np.argwhere(L & L.T & ~np.eye(n, dtype=bool))
    if len(anti):
        return Verdict(False, ("order",) + tuple(int(v) for v in anti[0]))
    trans = (L.astype(np.int32) @ L.astype(np.int32)) > 0
    bad = np.argwhere(trans & ~L)
    if len(bad):
        return Verdict(False, ("order",) + tuple(int(v) for v in bad[0]))
    for X, a in P.joins:
        common_up = np.logical_and.reduce([L[x] for x in X])
        if not np.array_equal(L[a], common_up):
            return Verdict(False, ("join", a, tuple(sorted(X))))
    for X, a in P.meets:
        common_down = np.logical_and.reduce([L[:, x] for x in X])
        if not np.array_equal(L[:, a], common_down):
            return Verdict(False, ("meet", a, tuple(sorted(X))))
    return Verdict(True)


def diamond(n: int) -> PartialLattice:
    """The n-diamond: B_n plus a new element e with a ^ e = 0, a v e = 1
    for every atom a. ``e`` is the last index.

    For n = 1 the only atom of B_1 is its top, so the construction degenerates;
    there the chain 0 < a < 1 is used as the base instead.
    """
    if n < 1:
        raise BadParam("diamond needs n >= 1")
    if n == 1:
        names = ["0", "a", "1", "e"]
        leq = order_from_covers(4, [(0, 1), (1, 2), (0, 3), (3, 2)])
        return PartialLattice(leq, [({1, 3}, 2)], [({1, 3}, 0)], names)
    B = boolean(n)
    base = PartialLattice.from_lattice(B)
    size = B.n
    e = size
    leq = np.zeros((size + 1, size + 1), dtype=bool)
    leq[:size, :size] = B.leq
    leq[e, e] = True
    leq[0, e] = True
    leq[e, size - 1] = True
    atoms = [1 << i for i in range(n)]
    joins = list(base.joins) + [({a, e}, size - 1) for a in atoms]
    meets = list(base.meets) + [({a, e}, 0) for a in atoms]
    names = [subset_name(s, n) for s in range(size)] + ["e"]
    return PartialLattice(leq, joins, meets, names)


def whitman_partial(P: PartialLattice) -> Verdict:
    """(W) over declared meets and joins; witness ``(U, V)`` as sorted tuples."""
    L = P.leq
    for U, m in P.meets:
        for V, j in P.joins:
            if not L[m, j]:
                continue
            if any(L[u, j] for u in U) or any(L[m, v] for v in V):
                continue
            return Verdict(False, (tuple(sorted(U)), tuple(sorted(V))))
    return Verdict(True)


@dataclass(frozen=True)
class PartialHom:
    source: PartialLattice
    target: FiniteLattice
    map: tuple

    def __getitem__(self, x):
        return self.map[x]

    def verify(self) -> bool:
        return is_partial_hom(self.source, self.target, self.map)

    def is_embedding(self) -> bool:
        f = np.asarray(self.map)
        return bool(np.array_equal(self.target.leq[f[:, None], f[None, :]], self.source.leq))


def is_partial_hom(P, L, f) -> bool:
    """Independent re-check: isotone and sends declared joins/meets to joins/meets."""
    P = as_partial(P)
    f = [int(v) for v in f]
    if len(f) != P.n:
        return False
    for x in range(P.n):
        for y in range(P.n):
            if P.leq[x, y] and not L.leq[f[x], f[y]]:
                return False
    for X, a in P.joins:
        if L.join_all(f[x] for x in X) != f[a]:
            return False
    for X, a in P.meets:
        if L.meet_all(f[x] for x in X) != f[a]:
            return False
    return True


def as_partial(P):
    return PartialLattice.from_lattice(P) if isinstance(P, FiniteLattice) else P


def enumerate_homs(P, L: FiniteLattice, floor: Sequence[int] | None = None,
                   require_embedding: bool = False, domains=None,
                   rng=None) -> Iterator[PartialHom]:
    """Stream partial-lattice homomorphisms ``P -> L`` in lexicographic order.

    ``floor`` restricts to maps pointwise above it; ``domains`` (per element
    of P) further restricts candidate images. With ``rng`` the candidate
    order of each element is shuffled, which samples rather than enumerates
    in order.
    """
    P = as_partial(P)
    Lleq = L.leq.tolist()
    Ljoin = L.join.tolist()
    Lmeet = L.meet.tolist()
    doms = []
    for x in range(P.n):
        cand = range(L.n) if domains is None else domains[x]
        if floor is not None:
            cand = [t for t in cand if Lleq[floor[x]][t]]
        cand = list(cand)
        if rng is not None:
            rng.shuffle(cand)
        doms.append(cand)
    s = Search(doms)
    for x, y in P.covers():
        s.add((x, y), lambda fx, fy: Lleq[fx][fy])

    def join_of(*vals):
        acc = vals[0]
        for v in vals[1:]:
            acc = Ljoin[acc][v]
        return acc

    def meet_of(*vals):
        acc = vals[0]
        for v in vals[1:]:
            acc = Lmeet[acc][v]
        return acc

    derived = set()
    for X, a in P.joins:
        members = tuple(sorted(X))
        if a not in X and max(members) < a and a not in derived:
            derived.add(a)
            s.derive(a, members, join_of)
        else:
            s.add(members + (a,), lambda *v: join_of(*v[:-1]) == v[-1])
    for X, a in P.meets:
        members = tuple(sorted(X))
        s.add(members + (a,), lambda *v: meet_of(*v[:-1]) == v[-1])
    if require_embedding:
        for x in range(P.n):
            for y in range(P.n):
                if x != y and not P.leq[x, y]:
                    s.add((x, y), lambda fx, fy: not Lleq[fx][fy])
    for sol in s.solutions():
        yield PartialHom(P, L, sol)


def lower_adjoint(K: FiniteLattice, L: FiniteLattice, h) -> tuple:
    """For a surjective lattice hom ``h: K -> L``, map each y in L to the
    least element of its preimage."""
    h = [int(v) for v in h]
    beta = []
    for y in range(L.n):
        pre = [x for x in range(K.n) if h[x] == y]
        if not pre:
            raise NotSurjective(f"{L.names[y]} has empty preimage")
        low = K.meet_all(pre)
        if h[low] != y:
            raise NoMinimum(f"preimage of {L.names[y]} has no least element")
        beta.append(low)
    return tuple(beta)


def davey_sands_lift(P, K: FiniteLattice, L: FiniteLattice, h, f) -> PartialHom:
    """Lift ``f: P -> K`` along a surjective lattice hom ``h: L -> K``.

    Starts from ``beta o f`` and repeatedly repairs the first violated meet
    constraint by joining ``e = meet g[U]`` into every g(x) with a <= x.
    Requires (W) on P.
    """
    P = as_partial(P)
    if not whitman_partial(P):
        raise PreconditionW("source partial lattice fails (W)")
    h = tuple(int(v) for v in h)
    f = tuple(int(v) for v in f)
    if not is_hom(L, K, h):
        raise NotHomomorphism("h is not a lattice homomorphism")
    if not is_partial_hom(P, K, f):
        raise NotHomomorphism("f is not a homomorphism of partial lattices")
    beta = lower_adjoint(L, K, h)
    g = [beta[v] for v in f]
    steps = 0
    while True:
        violated = next(((U, a) for U, a in P.meets if L.meet_all(g[u] for u in U) != g[a]), None)
        if violated is None:
            break
        U, a = violated
        e = L.meet_all(g[u] for u in U)
        g = [int(L.join[g[x], e]) if P.leq[a, x] else g[x] for x in range(P.n)]
        steps += 1
        assert all(L.join_all(g[v] for v in V) == g[b] for V, b in P.joins), \
            "join constraint broken during lift"
    assert all(h[g[x]] == f[x] for x in range(P.n)), "lift does not cover f"
    assert all(L.leq[beta[f[x]], g[x]] for x in range(P.n))
    result = PartialHom(P, L, tuple(g))
    assert result.verify()
    return result
