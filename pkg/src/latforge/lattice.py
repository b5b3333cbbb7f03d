"""Finite lattices as immutable meet/join tables over elements ``0..n-1``."""

from __future__ import annotations

from collections import deque
from functools import cached_property
from itertools import product as iproduct

import numpy as np

from latforge.errors import BadInterval, CapExceeded, CyclicCovers, NotALattice, UnknownName



def order_from_covers(n, covers):
    """Order matrix of the reflexive-transitive closure; raises CyclicCovers."""
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for lo, hi in covers:
        if not (0 <= lo < n and 0 <= hi < n):
            raise ValueError(f"cover ({lo}, {hi}) out of range")
        succ[lo].append(hi)
        indeg[hi] += 1
    order = []
    queue = deque(i for i in range(n) if indeg[i] == 0)
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != n:
        raise CyclicCovers("cover relation contains a cycle")
    leq = np.eye(n, dtype=bool)
    for v in reversed(order):
        for w in succ[v]:
            leq[v] |= leq[w]
    return leq


class FiniteLattice:
    """A finite lattice given by its order matrix and operation tables.

    Elements are the integers ``0..n-1``. ``leq[x, y]`` is True iff x <= y;
    ``meet`` and ``join`` are dense ``int32`` tables. Instances are treated as
    immutable: the arrays are made read-only on construction.
    """

    def __init__(self, leq, meet, join, names=None):
        leq = np.array(leq, dtype=bool)
        meet = np.array(meet, dtype=np.int32)
        join = np.array(join, dtype=np.int32)
        n = leq.shape[0]
        if n < 1:
            raise ValueError("a lattice needs at least one element")
        for arr in (leq, meet, join):
            if arr.shape != (n, n):
                raise ValueError("tables must be n x n")
            arr.setflags(write=False)
        self.n = n
        self.leq = leq
        self.meet = meet
        self.join = join
        if names is None:
            names = [str(i) for i in range(n)]
        names = [str(s) for s in names]
        if len(names) != n:
            raise ValueError("need one name per element")
        self.names = tuple(names)
        self._index = {s: i for i, s in enumerate(self.names)}

    # -- construction -------------------------------------------------------

    @classmethod
    def from_leq(cls, leq, names=None):
        """Build tables from an order matrix; raises NotALattice."""
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        down = leq.sum(axis=0)  # |down-set of z|
        up = leq.sum(axis=1)
        meet = np.empty((n, n), dtype=np.int32)
        join = np.empty((n, n), dtype=np.int32)
        idx = np.arange(n)
        for x in range(n):
            # common lower bounds: column y of lb is the set below x and y
            lb = leq[:, x][:, None] & leq
            score = np.where(lb, down[:, None], -1)
            z = score.argmax(axis=0)
            ok = lb[z, idx] & (down[z] == lb.sum(axis=0))
            meet[x] = z
            ub = leq[x, :][:, None] & leq.T  # column y: elements above x and y
            score = np.where(ub, up[:, None], -1)
            w = score.argmax(axis=0)
            okj = ub[w, idx] & (up[w] == ub.sum(axis=0))
            join[x] = w
            bad = np.flatnonzero(~(ok & okj))
            if len(bad):
                y = int(bad[0])
                raise NotALattice(x, y, "join" if not okj[y] else "meet")
        return cls(leq, meet, join, names)

    @classmethod
    def from_covers(cls, n, covers, names=None):
        """Reflexive-transitive closure of a cover list, then tables."""
        return cls.from_leq(order_from_covers(n, covers), names)

    @classmethod
    def from_elements(cls, elements, meet_fn, join_fn, leq_fn=None, names=None):
        """Materialize a lattice of hashable values closed under the given ops."""
        elements = list(elements)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        meet = np.empty((n, n), dtype=np.int32)
        join = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(elements):
            for j in range(i, n):
                b = elements[j]
                try:
                    m = index[meet_fn(a, b)]
                    jn = index[join_fn(a, b)]
                except KeyError:
                    raise ValueError(f"elements {i}, {j} leave the set") from None
                meet[i, j] = meet[j, i] = m
                join[i, j] = join[j, i] = jn
        leq = meet == np.arange(n)[:, None]
        if names is None:
            names = [str(e) for e in elements]
        return cls(leq, meet, join, names)

    # -- basic access -------------------------------------------------------

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FiniteLattice(n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.meet, other.meet)
                and np.array_equal(self.join, other.join))

    def __hash__(self):
        return hash((self.n, self.meet.tobytes()))

    def elem(self, x):
        """Resolve an element name or index to an index."""
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.n:
                raise UnknownName(f"index {x} out of range")
            return int(x)
        try:
            return self._index[x]
        except KeyError:
            raise UnknownName(f"no element named {x!r}") from None

    def name(self, x):
        return self.names[x]

    def le(self, x, y):
        return bool(self.leq[x, y])

    def lt(self, x, y):
        return x != y and bool(self.leq[x, y])

    def m(self, x, y):
        return int(self.meet[x, y])

    def j(self, x, y):
        return int(self.join[x, y])

    def meet_all(self, xs):
        acc = self.top
        for x in xs:
            acc = self.meet[acc, x]
        return int(acc)

    def join_all(self, xs):
        acc = self.bottom
        for x in xs:
            acc = self.join[acc, x]
        return int(acc)

    @cached_property
    def bottom(self):
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self):
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    @cached_property
    def cover_matrix(self):
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        return lt & ~between

    def covers(self):
        """Cover pairs ``(lower, upper)`` in lexicographic order."""
        return [(int(a), int(b)) for a, b in np.argwhere(self.cover_matrix)]

    def lower_covers(self, x):
        return [int(a) for a in np.flatnonzero(self.cover_matrix[:, x])]

    def upper_covers(self, x):
        return [int(b) for b in np.flatnonzero(self.cover_matrix[x])]

    @cached_property
    def heights(self):
        """Length of the longest chain from the bottom to each element."""
        h = [0] * self.n
        for x in sorted(range(self.n), key=lambda v: int(self.leq[:, v].sum())):
            for c in self.lower_covers(x):
                h[x] = max(h[x], h[c] + 1)
        return tuple(h)

    def down(self, x):
        return [int(a) for a in np.flatnonzero(self.leq[:, x])]

    def up(self, x):
        return [int(a) for a in np.flatnonzero(self.leq[x])]

    def check_tables(self):
        """Exhaustively verify the lattice laws; returns True or raises AssertionError."""
        n = self.n
        M, J, L = self.meet, self.join, self.leq
        idx = np.arange(n)
        assert (L[idx, idx]).all()
        assert not (L & L.T & ~np.eye(n, dtype=bool)).any()
        assert np.array_equal(M, M.T) and np.array_equal(J, J.T)
        assert np.array_equal(L, M == idx[:, None])
        assert np.array_equal(L, J == idx[None, :])
        assert (M[idx[:, None], J] == idx[:, None]).all()  # x ^ (x v y) = x
        assert (J[idx[:, None], M] == idx[:, None]).all()
        for x in range(n):
            assert (M[M[x]][:, :] == M[x][M]).all()
            assert (J[J[x]][:, :] == J[x][J]).all()
        return True

    def to_spec(self):
        """Interchange form ``{"n", "covers", "names"}``."""
        return {"n": self.n, "covers": [list(c) for c in self.covers()], "names": list(self.names)}

    @classmethod
    def from_spec(cls, spec):
        return cls.from_covers(spec["n"], [tuple(c) for c in spec["covers"]], spec.get("names"))


# -- constructions ------------------------------------------------------------

def dual(L):
    return FiniteLattice(L.leq.T, L.join, L.meet, L.names)


def product(L1, L2):
    """Direct product; element (a, b) has index a * |L2| + b."""
    n1, n2 = L1.n, L2.n
    a = np.repeat(np.arange(n1), n2)
    b = np.tile(np.arange(n2), n1)
    leq = L1.leq[a[:, None], a[None, :]] & L2.leq[b[:, None], b[None, :]]
    meet = L1.meet[a[:, None], a[None, :]] * n2 + L2.meet[b[:, None], b[None, :]]
    join = L1.join[a[:, None], a[None, :]] * n2 + L2.join[b[:, None], b[None, :]]
    names = [f"({L1.names[i]},{L2.names[k]})" for i, k in zip(a, b)]
    return FiniteLattice(leq, meet, join, names)


def sublattice(L, elements, names=None):
    """Induced lattice on a subset closed under meet and join (order kept)."""
    elements = sorted(set(int(e) for e in elements))
    pos = np.full(L.n, -1, dtype=np.int64)
    pos[elements] = np.arange(len(elements))
    sel = np.array(elements)
    meet = pos[L.meet[sel[:, None], sel[None, :]]]
    join = pos[L.join[sel[:, None], sel[None, :]]]
    if (meet < 0).any() or (join < 0).any():
        raise ValueError("subset is not closed under meet and join")
    if names is None:
        names = [L.names[e] for e in elements]
    return FiniteLattice(L.leq[sel[:, None], sel[None, :]], meet, join, names)


def interval(L, a, b):
    if not L.leq[a, b]:
        raise BadInterval(f"{L.names[a]} is not below {L.names[b]}")
    members = np.flatnonzero(L.leq[a] & L.leq[:, b])
    return sublattice(L, members)


def bounds_extension(L, bottom_name="0'", top_name="1'"):
    """Adjoin a new bottom (index 0) and a new top (index n+1)."""
    n = L.n
    leq = np.zeros((n + 2, n + 2), dtype=bool)
    leq[1:n + 1, 1:n + 1] = L.leq
    leq[0, :] = True
    leq[:, n + 1] = True
    meet = np.zeros((n + 2, n + 2), dtype=np.int32)
    join = np.zeros((n + 2, n + 2), dtype=np.int32)
    meet[1:n + 1, 1:n + 1] = L.meet + 1
    join[1:n + 1, 1:n + 1] = L.join + 1
    for x in range(n + 2):
        meet[0, x] = meet[x, 0] = 0
        join[n + 1, x] = join[x, n + 1] = n + 1
        meet[n + 1, x] = meet[x, n + 1] = x
        join[0, x] = join[x, 0] = x
    names = [bottom_name] + list(L.names) + [top_name]
    return FiniteLattice(leq, meet, join, names)


def quotient(L, pairs):
    """Quotient by the least congruence collapsing every pair in ``pairs``.

    Returns ``(K, h)`` with ``h`` the canonical surjection as a tuple. Classes
    are numbered by their least member's index.
    """
    parent = list(range(L.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
            return True
        return False

    for x, y in pairs:
        union(int(x), int(y))
    changed = True
    while changed:
        changed = False
        cls = [find(x) for x in range(L.n)]
        for x in range(L.n):
            for y in range(x + 1, L.n):
                if cls[x] != cls[y]:
                    continue
                for z in range(L.n):
                    if union(int(L.join[x, z]), int(L.join[y, z])):
                        changed = True
                    if union(int(L.meet[x, z]), int(L.meet[y, z])):
                        changed = True
    roots = sorted({find(x) for x in range(L.n)})
    number = {r: i for i, r in enumerate(roots)}
    h = tuple(number[find(x)] for x in range(L.n))
    k = len(roots)
    meet = np.empty((k, k), dtype=np.int32)
    join = np.empty((k, k), dtype=np.int32)
    for i, ri in enumerate(roots):
        for j, rj in enumerate(roots):
            meet[i, j] = h[L.meet[ri, rj]]
            join[i, j] = h[L.join[ri, rj]]
    leq = meet == np.arange(k)[:, None]
    names = [L.names[r] for r in roots]
    return FiniteLattice(leq, meet, join, names), h


def sublattice_closure(L, S, cap=None):
    """Least subset containing ``S`` closed under meet and join (sorted)."""
    S = [int(s) for s in S]
    if not S:
        raise ValueError("generating set must be nonempty")
    members = []
    seen = set()
    for s in S:
        if s not in seen:
            seen.add(s)
            members.append(s)
    if cap is not None and len(members) > cap:
        raise CapExceeded(cap, reached=len(members))
    i = 0
    while i < len(members):
        x = members[i]
        for y in members[: i + 1]:
            for v in (int(L.meet[x, y]), int(L.join[x, y])):
                if v not in seen:
                    seen.add(v)
                    members.append(v)
                    if cap is not None and len(members) > cap:
                        raise CapExceeded(cap, reached=len(members))
        i += 1
    return sorted(members)


def is_hom(K, L, f, join_only=False):
    """True iff ``f`` (a sequence indexed by K) preserves meet and join."""
    f = np.asarray(f, dtype=np.int64)
    ok = np.array_equal(f[K.join], L.join[f[:, None], f[None, :]])
    if ok and not join_only:
        ok = np.array_equal(f[K.meet], L.meet[f[:, None], f[None, :]])
    return bool(ok)


def is_order_embedding(K, L, f):
    f = np.asarray(f, dtype=np.int64)
    return bool(np.array_equal(L.leq[f[:, None], f[None, :]], K.leq))


def _signature(L, x):
    return (L.heights[x], int(L.leq[:, x].sum()), int(L.leq[x].sum()),
            len(L.lower_covers(x)), len(L.upper_covers(x)))


def find_isomorphism(K, L):
    """Backtracking isomorphism search on degree/height signatures."""
    if K.n != L.n:
        return None
    sk = [_signature(K, x) for x in range(K.n)]
    sl = [_signature(L, y) for y in range(L.n)]
    if sorted(sk) != sorted(sl):
        return None
    order = sorted(range(K.n), key=lambda x: (K.heights[x], x))
    cands = {x: [y for y in range(L.n) if sl[y] == sk[x]] for x in order}
    f = [-1] * K.n
    used = [False] * L.n

    def ok(x, y):
        for w in order:
            fw = f[w]
            if fw < 0:
                continue
            if bool(K.leq[x, w]) != bool(L.leq[y, fw]) or bool(K.leq[w, x]) != bool(L.leq[fw, y]):
                return False
        return True

    def rec(i):
        if i == len(order):
            return True
        x = order[i]
        for y in cands[x]:
            if not used[y] and ok(x, y):
                f[x] = y
                used[y] = True
                if rec(i + 1):
                    return True
                f[x] = -1
                used[y] = False
        return False

    return tuple(f) if rec(0) else None


def is_isomorphic(K, L):
    return find_isomorphism(K, L) is not None


def random_lattice(n, rng, p=0.4, max_tries=10_000):
    """Random lattice with exactly ``n`` elements (bounded, index order is a
    linear extension). Rejection-samples DAGs on ``1..n-2`` between 0 and 1."""
    if n <= 2:
        return FiniteLattice.from_covers(n, [(0, 1)] if n == 2 else [])
    for _ in range(max_tries):
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        for i in range(1, n - 1):
            for j in range(i + 1, n - 1):
                if rng.random() < p:
                    leq[i, j] = True
        # transitive closure (index order is topological)
        for j in range(n):
            for i in range(j - 1, -1, -1):
                if leq[i, j]:
                    leq[i] |= leq[j]
        try:
            return FiniteLattice.from_leq(leq)
        except NotALattice:
            continue
    raise RuntimeError("failed to sample a lattice")


def all_lattices_upto(n_max):
    """Every lattice (up to isomorphism) with at most ``n_max`` elements.

    Only meant for tiny ``n_max`` (<= 6); brute force over index-ordered DAGs.
    """
    found = []
    for n in range(1, n_max + 1):
        inner = [(i, j) for i in range(1, n - 1) for j in range(i + 1, n - 1)]
        for bits in iproduct((False, True), repeat=len(inner)):
            leq = np.eye(n, dtype=bool)
            leq[0, :] = True
            leq[:, n - 1] = True
            for (i, j), b in zip(inner, bits):
                if b:
                    leq[i, j] = True
            closed = leq.copy()
            for j in range(n):
                for i in range(j - 1, -1, -1):
                    if closed[i, j]:
                        closed[i] |= closed[j]
            if not np.array_equal(closed, leq):
                continue
            try:
                L = FiniteLattice.from_leq(leq)
            except NotALattice:
                continue
            if not any(is_isomorphic(L, K) for K in found if K.n == n):
                found.append(L)
    return found
