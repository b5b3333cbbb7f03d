"""Subspaces of GF(q)^n in reduced row-echelon form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product as iproduct

import numpy as np

from latforge.errors import (BadInterval, BadParam, CapExceeded, DimensionMismatch,
                             FieldMismatch, IndexOutOfTruncation)
from latforge.lattice import FiniteLattice


def _check_prime(q):
    if q < 2 or any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
        raise BadParam(f"q must be prime, got {q}")


def rref(M, q) -> np.ndarray:
    """Reduced row-echelon form over GF(q) with zero rows dropped."""
    A = np.atleast_2d(np.array(M, dtype=np.int64)) % q
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not len(nz):
            continue
        p = r + nz[0]
        A[[r, p]] = A[[p, r]]
        A[r] = A[r] * pow(int(A[r, c]), q - 2, q) % q
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] = (A[others] - np.outer(A[others, c], A[r])) % q
        r += 1
    return A[:r]


def nullspace(M, q) -> np.ndarray:
    """Basis (as rows) of {v : M v = 0} over GF(q)."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R = rref(M, q)
    pivots = [int(np.flatnonzero(row)[0]) for row in R]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for row, p in zip(R, pivots):
            v[p] = -row[f] % q
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


class Subspace:
    """Row space of a matrix over GF(q), stored canonically in RREF."""

    def __init__(self, q, n, rows=()):
        self.q = int(q)
        self.n = int(n)
        R = rref(np.array(rows, dtype=np.int64).reshape(-1, n), q)
        R.setflags(write=False)
        self.basis = R

    @classmethod
    def zero(cls, q, n):
        return cls(q, n)

    @classmethod
    def full(cls, q, n):
        return cls(q, n, np.eye(n, dtype=np.int64))

    @property
    def dim(self):
        return len(self.basis)

    @cached_property
    def key(self):
        return (self.q, self.n, self.basis.tobytes())

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Subspace(q={self.q}, n={self.n}, rows={self.basis.tolist()})"

    def to_json(self):
        return {"q": self.q, "dim": self.n, "rows": self.basis.tolist()}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["q"], obj["dim"], obj["rows"])

    def contains(self, v):
        stacked = np.vstack([self.basis, np.asarray(v, dtype=np.int64).reshape(1, -1)])
        return len(rref(stacked, self.q)) == self.dim

    def __add__(self, other):
        return sum_(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def __le__(self, other):
        return leq(self, other)


def _compatible(X, Y):
    if X.q != Y.q:
        raise FieldMismatch(f"GF({X.q}) vs GF({Y.q})")
    if X.n != Y.n:
        raise DimensionMismatch(f"ambient dimensions {X.n} and {Y.n}")


def sum_(X: Subspace, Y: Subspace) -> Subspace:
    _compatible(X, Y)
    return Subspace(X.q, X.n, np.vstack([X.basis, Y.basis]))


def intersect(X: Subspace, Y: Subspace) -> Subspace:
    """Kernel method: c with c [X; Y] = 0 gives c_X X in both spaces."""
    _compatible(X, Y)
    if X.dim == 0 or Y.dim == 0:
        return Subspace.zero(X.q, X.n)
    stacked = np.vstack([X.basis, Y.basis])
    K = nullspace(stacked.T, X.q)
    if not len(K):
        return Subspace.zero(X.q, X.n)
    return Subspace(X.q, X.n, K[:, :X.dim] @ X.basis % X.q)


def leq(X: Subspace, Y: Subspace) -> bool:
    return intersect(X, Y) == X


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(q, n):
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_subspaces(q, n):
    """All subspaces of GF(q)^n, by dimension then pivot pattern then entries."""
    _check_prime(q)
    for k in range(n + 1):
        for pivots in combinations(range(n), k):
            free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n)
                    if c not in pivots]
            for vals in iproduct(range(q), repeat=len(free)):
                M = np.zeros((k, n), dtype=np.int64)
                for i, p in enumerate(pivots):
                    M[i, p] = 1
                for (i, c), v in zip(free, vals):
                    M[i, c] = v
                yield Subspace(q, n, M)


@dataclass
class SubspaceLattice:
    q: int
    n: int
    subspaces: list
    lattice: FiniteLattice

    def index(self, X: Subspace) -> int:
        return self._lookup[X]

    @cached_property
    def _lookup(self):
        return {X: i for i, X in enumerate(self.subspaces)}


def full_subspace_lattice(q, n, cap=1000) -> SubspaceLattice:
    total = subspace_count(q, n)
    if total > cap:
        raise CapExceeded(cap, total, q=q, n=n)
    subs = list(enumerate_subspaces(q, n))
    names = [",".join("".join(map(str, r)) for r in X.basis.tolist()) or "0" for X in subs]
    L = FiniteLattice.from_elements(subs, intersect, sum_, names=names)
    return SubspaceLattice(q, n, subs, L)


def relative_complement_linear(X: Subspace, A: Subspace, B: Subspace) -> Subspace:
    """Y with X & Y = A and X + Y = B: extend a basis of X to one of B and
    add the new vectors to A."""
    _compatible(X, A)
    _compatible(X, B)
    if not (leq(A, X) and leq(X, B)):
        raise BadInterval("need A <= X <= B")
    span = X
    extra = []
    for v in B.basis:
        if not span.contains(v):
            extra.append(v)
            span = Subspace(X.q, X.n, np.vstack([span.basis, v]))
    Y = Subspace(X.q, X.n, np.vstack([A.basis] + [np.reshape(v, (1, -1)) for v in extra]))
    assert intersect(X, Y) == A and sum_(X, Y) == B
    return Y


class CDFamily:
    """The subspaces A_n, B_n, C_n, D_n of GF(q)^(2N) with generating
    sequences cut at index N-1.

    Basis vector a_i is e_i and b_i is e_(N+i). Only 0 <= n <= N-2 are
    served, so that every pattern involving index n+1 fits the cut.
    """

    def __init__(self, N, q):
        if N < 3:
            raise BadParam("cd_family needs N >= 3")
        _check_prime(q)
        self.N, self.q = N, q
        self.dim = 2 * N

    def _vec(self, a=(), b=()):
        v = np.zeros(self.dim, dtype=np.int64)
        for i in a:
            v[i] += 1
        for i in b:
            v[self.N + i] += 1
        return v % self.q

    def a(self, i):
        return self._vec(a=[i])

    def b(self, i):
        return self._vec(b=[i])

    def span(self, vecs):
        return Subspace(self.q, self.dim, np.array(vecs).reshape(-1, self.dim))

    def _guard(self, n):
        if not 0 <= n <= self.N - 2:
            raise IndexOutOfTruncation(f"n={n} outside [0, {self.N - 2}]")

    def A(self, n):
        self._guard(n)
        return self.span([self.a(i) for i in range(n + 1)])

    def B(self, n):
        self._guard(n)
        return self.span([self.b(i) for i in range(n + 1)])

    @cached_property
    def C0(self):
        gens = [self._vec(a=[0], b=[0])]
        gens += [self._vec(a=[k, k - 1], b=[k]) for k in range(1, self.N)]
        return self.span(gens)

    @cached_property
    def D0(self):
        return self.span([self._vec(a=[k], b=[k]) for k in range(self.N)])

    def C(self, n):
        self._guard(n)
        return self.C0 if n == 0 else self.C0 + self.A(n - 1) + self.B(n - 1)

    def D(self, n):
        self._guard(n)
        return self.D0 if n == 0 else self.D0 + self.A(n - 1) + self.B(n - 1)

    def expected_C(self, n):
        """Displayed generators of C_n, n >= 1."""
        self._guard(n)
        gens = [v for i in range(n) for v in (self.a(i), self.b(i))]
        gens.append(self._vec(a=[n], b=[n]))
        gens += [self._vec(a=[k, k - 1], b=[k]) for k in range(n + 1, self.N)]
        return self.span(gens)

    def expected_D(self, n):
        self._guard(n)
        gens = [v for i in range(n) for v in (self.a(i), self.b(i))]
        gens += [self._vec(a=[k], b=[k]) for k in range(n, self.N)]
        return self.span(gens)

    def expected_meet(self, n):
        """Displayed value of C_n & D_n."""
        self._guard(n)
        gens = [v for i in range(n) for v in (self.a(i), self.b(i))]
        gens.append(self._vec(a=[n], b=[n]))
        return self.span(gens)

    def check(self):
        """Per-n booleans for the closed forms and the sandwich."""
        out = []
        for n in range(self.N - 1):
            meet = intersect(self.C(n), self.D(n))
            row = {"n": n, "meet": meet == self.expected_meet(n)}
            if n >= 1:
                row["C"] = self.C(n) == self.expected_C(n)
                row["D"] = self.D(n) == self.expected_D(n)
            if n <= self.N - 3:
                AB = self.A(n) + self.B(n)
                upper = intersect(self.C(n + 1), self.D(n + 1))
                row["sandwich"] = leq(meet, AB) and leq(AB, upper)
            out.append(row)
        return out


def cd_family(N, q) -> CDFamily:
    return CDFamily(N, q)
