"""Structural property checkers for finite lattices.

Each checker is exhaustive and returns a :class:`Verdict`; on failure the
witness is the first violating tuple in lexicographic index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from latforge import kernels
from latforge.errors import BadInterval
from latforge.lattice import FiniteLattice


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Any = None

    def __bool__(self):
        return self.holds


def _tables(L):
    return (np.ascontiguousarray(L.leq, dtype=np.uint8),
            np.ascontiguousarray(L.meet, dtype=np.int32),
            np.ascontiguousarray(L.join, dtype=np.int32))


def _verdict(hit):
    return Verdict(hit is None, hit)


def is_modular(L: FiniteLattice) -> Verdict:
    """x <= z implies x v (y ^ z) = (x v y) ^ z; witness ``(x, y, z)``."""
    return _verdict(kernels.modular_violation(*_tables(L)))


def is_distributive(L: FiniteLattice) -> Verdict:
    """x ^ (y v z) = (x ^ y) v (x ^ z); witness ``(x, y, z)``."""
    return _verdict(kernels.distributive_violation(*_tables(L)))


def is_semidistributive(L: FiniteLattice) -> Verdict:
    """Join- then meet-semidistributivity; witness ``(law, x, y, z)``."""
    return _verdict(kernels.semidistributive_violation(*_tables(L)))


def satisfies_whitman(L: FiniteLattice) -> Verdict:
    """Whitman's condition; witness ``(y0, y1, x0, x1)`` with
    y0 ^ y1 <= x0 v x1 but no single joinand or meetand works."""
    return _verdict(kernels.whitman_violation(*_tables(L)))


def relative_complements(L, x, a, b):
    """All y with x ^ y = a and x v y = b, ascending."""
    if not (L.leq[a, x] and L.leq[x, b]):
        raise BadInterval(f"need {L.names[a]} <= {L.names[x]} <= {L.names[b]}")
    return [int(y) for y in np.flatnonzero((L.meet[x] == a) & (L.join[x] == b))]


def is_relatively_complemented(L) -> Verdict:
    """Every a <= x <= b has a complement of x in [a, b]; witness ``(x, a, b)``."""
    for x in range(L.n):
        below = np.flatnonzero(L.leq[:, x])
        above = np.flatnonzero(L.leq[x])
        # has[a, b]: some y with meet(x, y) = a and join(x, y) = b
        has = np.zeros((L.n, L.n), dtype=bool)
        has[L.meet[x], L.join[x]] = True
        for a in below:
            missing = above[~has[a, above]]
            if len(missing):
                return Verdict(False, (x, int(a), int(missing[0])))
    return Verdict(True)


def join_irreducibles(L):
    """Elements with exactly one lower cover, ascending."""
    return [x for x in range(L.n) if len(L.lower_covers(x)) == 1]


def meet_irreducibles(L):
    return [x for x in range(L.n) if len(L.upper_covers(x)) == 1]


def is_join_prime(L, x) -> bool:
    """x <= a v b implies x <= a or x <= b, for all a, b.

    Under this literal reading the bottom element is join-prime.
    """
    below_join = L.leq[x][L.join]
    split = L.leq[x][:, None] | L.leq[x][None, :]
    return bool(not (below_join & ~split).any())


def find_doubly_reducible(L):
    """One ``(c, a0, a1, b0, b1)`` per doubly reducible c, with the
    lexicographically first witnesses ``a0 < a1`` and ``b0 < b1``."""
    out = []
    for c in range(L.n):
        strictly_below = [a for a in range(L.n) if a != c and L.leq[a, c]]
        strictly_above = [b for b in range(L.n) if b != c and L.leq[c, b]]
        lower = next(((a0, a1) for i, a0 in enumerate(strictly_below)
                      for a1 in strictly_below[i + 1:] if L.join[a0, a1] == c), None)
        if lower is None:
            continue
        upper = next(((b0, b1) for i, b0 in enumerate(strictly_above)
                      for b1 in strictly_above[i + 1:] if L.meet[b0, b1] == c), None)
        if upper is not None:
            out.append((c,) + lower + upper)
    return out


def has_sublattice_copy(L, P):
    """A lattice embedding of ``P`` into ``L`` (tuple indexed by P) or None."""
    from latforge.partial import PartialLattice, enumerate_homs  # partial imports this module

    return next((h.map for h in enumerate_homs(PartialLattice.from_lattice(P), L,
                                               require_embedding=True)), None)
