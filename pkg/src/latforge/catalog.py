"""Named lattices with fixed labelings.

Index order is always a linear extension of the order, so the bottom is 0
and the top is the last element.
"""

import re

from latforge.errors import BadParam, UnknownName
from latforge.lattice import FiniteLattice


def d4():
    """Two squares glued at c: 0 < a0, a1 < c < b0, b1 < 1."""
    names = ["0", "a0", "a1", "c", "b0", "b1", "1"]
    covers = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)]
    return FiniteLattice.from_covers(7, covers, names)


def d4hat():
    """D4 with c split into c0 < c1 (c0 = a0 v a1, c1 = b0 ^ b1)."""
    names = ["0", "a0", "a1", "c0", "c1", "b0", "b1", "1"]
    covers = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 7), (6, 7)]
    return FiniteLattice.from_covers(8, covers, names)


def n5():
    """Pentagon: 0 < p1 < p2 < 1 and p3 incomparable to p1, p2."""
    names = ["0", "p1", "p2", "p3", "1"]
    covers = [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]
    return FiniteLattice.from_covers(5, covers, names)


def m_n(n):
    if n < 3:
        raise BadParam(f"M_n needs n >= 3, got {n}")
    names = ["0"] + [f"a{i}" for i in range(1, n + 1)] + ["1"]
    covers = [(0, i) for i in range(1, n + 1)] + [(i, n + 1) for i in range(1, n + 1)]
    return FiniteLattice.from_covers(n + 2, covers, names)


def m33():
    """[0, v] is M3 with atoms v0, v1, u; [u, 1] is M3 with atoms u0, u1, v."""
    names = ["0", "v0", "v1", "u", "v", "u0", "u1", "1"]
    covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (3, 5), (3, 6),
              (4, 7), (5, 7), (6, 7)]
    return FiniteLattice.from_covers(8, covers, names)


def subset_name(mask, n):
    return "{" + ",".join(str(i + 1) for i in range(n) if mask >> i & 1) + "}"


def boolean(n):
    """Powerset of {1..n}; index is the bitmask, named like ``{1,3}``."""
    if n < 0:
        raise BadParam("B_n needs n >= 0")
    size = 1 << n
    covers = [(s, s | 1 << i) for s in range(size) for i in range(n) if not s >> i & 1]
    return FiniteLattice.from_covers(size, covers, [subset_name(s, n) for s in range(size)])


def chain(k):
    if k < 1:
        raise BadParam("chain_k needs k >= 1")
    return FiniteLattice.from_covers(k, [(i, i + 1) for i in range(k - 1)])


_FIXED = {"D4": d4, "D4hat": d4hat, "N5": n5, "M33": m33}
_PARAM = {"M": m_n, "B": boolean, "chain": chain}


def parse_name(name, param=None):
    """Split ``"M_4"``, ``"M4"``, ``"chain_3"``, ``"P_2"`` into ``(base, param)``."""
    if param is not None or name in _FIXED:
        return name, param
    m = re.fullmatch(r"(M|B|P|chain)_?(\d+)", name)
    if m:
        return m.group(1), int(m.group(2))
    return name, param


def catalog(name, param=None):
    """Look up a named lattice (or the partial lattice ``P``)."""
    base, param = parse_name(name, param)
    if base in _FIXED:
        return _FIXED[base]()
    if base == "P":
        from latforge.partial import diamond

        if param is None:
            raise BadParam("P needs a parameter")
        return diamond(param)
    if base in _PARAM:
        if param is None:
            raise BadParam(f"{base} needs a parameter")
        return _PARAM[base](param)
    raise UnknownName(f"unknown catalog entry {name!r}")


def atoms(L):
    return [x for x in range(L.n) if L.lower_covers(x) == [L.bottom]]
