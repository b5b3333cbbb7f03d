"""Identities, quasi-identities and finitely presented lattices in a
finitely generated variety."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from latforge import kernels
from latforge.catalog import n5
from latforge.errors import CapExceeded, NotMaterialized
from latforge.lattice import FiniteLattice, sublattice_closure
from latforge.properties import Verdict, _tables, is_modular
from latforge.terms import (JONSSON, Const, Identity, Meet, QuasiIdentity, Var, compile_term,
                            eval_term, join, meet, parse_quasi_identity, term_values,
                            variables)

DEFAULT_CAP = 200_000
_BLOCK = 1 << 18  # rows per vectorized batch


def satisfies_identity(L, ident: Identity, names=None) -> Verdict:
    """Exhaustive check over all assignments; witness is the lexicographically
    first failing assignment as a name -> element dict."""
    names = list(names or ident.variables())
    prog_l = compile_term(L, ident.lhs, names)
    prog_r = compile_term(L, ident.rhs, names)
    leq, mt, jn = _tables(L)
    hit = kernels.identity_violation(leq, mt, jn, prog_l, prog_r, len(names),
                                     ident.relation == "=")
    if hit is None:
        return Verdict(True)
    return Verdict(False, dict(zip(names, hit)))


def _mask(L, ident, names, env):
    lv = term_values(L, ident.lhs, names, env)
    rv = term_values(L, ident.rhs, names, env)
    return lv == rv if ident.relation == "=" else L.leq[lv, rv]


def _plan(names, premises):
    """Split premises into checks keyed by the position of their last
    variable and definitions ``v = t`` usable to derive v."""
    pos = {v: i for i, v in enumerate(names)}
    derived = {}
    checks = [[] for _ in names]
    for p in premises:
        if (p.relation == "=" and isinstance(p.lhs, Var) and p.lhs.name not in derived
                and all(pos[v] < pos[p.lhs.name] for v in variables(p.rhs))):
            derived[p.lhs.name] = p.rhs
            continue
        scope = [pos[v] for v in p.variables()]
        checks[max(scope) if scope else 0].append(p)
    return derived, checks


def staged_assignments(L, names, premises):
    """Yield blocks (arrays of shape (count, len(names))) of all assignments
    satisfying ``premises``, in lexicographic order.

    Variables are bound in ``names`` order; each premise filters as soon as
    its variables are bound, and premises ``v = t`` with t over earlier
    variables compute v instead of enumerating it.
    """
    names = list(names)
    derived, checks = _plan(names, premises)
    n = L.n
    k = len(names)

    def extend(rows, i):
        if len(rows) == 0:
            return
        if i == k:
            yield rows
            return
        if names[i] in derived:
            col = term_values(L, derived[names[i]], names[:i], rows.T)
            batches = [np.column_stack([rows, np.broadcast_to(col, (len(rows),))])]
        else:
            step = max(1, _BLOCK // n)
            batches = (np.column_stack([np.repeat(rows[s:s + step], n, axis=0),
                                        np.tile(np.arange(n), len(rows[s:s + step]))])
                       for s in range(0, len(rows), step))
        for new in batches:
            keep = np.ones(len(new), dtype=bool)
            env = new.T
            for p in checks[i]:
                keep &= _mask(L, p, names[:i + 1], env)
            yield from extend(new[keep], i + 1)

    if k == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    yield from extend(np.zeros((1, 0), dtype=np.int64), 0)


def assignments(L, names, premises) -> np.ndarray:
    blocks = list(staged_assignments(L, names, premises))
    return np.concatenate(blocks) if blocks else np.zeros((0, len(names)), dtype=np.int64)


def satisfies_quasi_identity(L, q: QuasiIdentity) -> Verdict:
    """True iff every assignment meeting all premises meets the conclusion.

    Witness: the first failing assignment (name -> element dict).
    """
    names = list(q.names)
    for block in staged_assignments(L, names, q.premises):
        bad = np.flatnonzero(~_mask(L, q.conclusion, names, block.T))
        if len(bad):
            return Verdict(False, dict(zip(names, (int(v) for v in block[bad[0]]))))
    return Verdict(True)


def count_premise_solutions(L, q: QuasiIdentity) -> int:
    return sum(len(b) for b in staged_assignments(L, list(q.names), q.premises))


# Premises in the order they become checkable: the b' are defined from the
# unprimed variables, then the primed a' are bound last.
QUASI_MOMEGA = parse_quasi_identity(
    "(implies (and (= b0' (join b0 a0 a1)) (= b1' (join b1 a0 a1))"
    " (<= (meet b0 b1) (join a0 a1)) (<= a0 a0') (<= a1 a1')"
    " (<= (meet b0' b1') (join a0' a1')))"
    " (= (join (meet a0' b0' b1') (meet a1' b0' b1')) (meet b0' b1')))",
    names=("a0", "a1", "b0", "b1", "b0'", "b1'", "a0'", "a1'"),
)


def in_Momega(L) -> bool:
    """Modular and satisfies Jonsson's inclusion."""
    return bool(is_modular(L)) and bool(satisfies_identity(L, JONSSON))


# -- presented lattices -----------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        for r in self.relations:
            extra = set(r.variables()) - set(self.generators)
            if extra:
                raise ValueError(f"relation uses undeclared generators {sorted(extra)}")


@dataclass
class PresentedLattice:
    """Sublattice of a product of copies of ``base`` generated by the
    coordinate vectors of the solutions ``omega``.

    ``coords`` lists the omega indices kept as coordinates; ``elements`` is
    a ``(count, len(coords))`` uint8 array, complete only when ``complete``.
    """
    base: FiniteLattice
    presentation: Presentation
    omega: np.ndarray
    coords: np.ndarray
    generator_vectors: np.ndarray
    elements: np.ndarray
    complete: bool
    cap: int
    _index: dict = field(default=None, repr=False)

    @property
    def size(self):
        return len(self.elements)

    def generator(self, name):
        return self.generator_vectors[self.presentation.generators.index(name)]

    def require_complete(self):
        if not self.complete:
            raise NotMaterialized(
                f"closure stopped at cap {self.cap} with {self.size} elements")

    def index_of(self, vector):
        self.require_complete()
        if self._index is None:
            self._index = {row.tobytes(): i for i, row in enumerate(self.elements)}
        return self._index.get(np.asarray(vector, dtype=np.uint8).tobytes())

    @property
    def zero_vector(self):
        """Componentwise least element of each coordinate lattice <z>."""
        cols = self.omega[self.coords]
        acc = cols[:, 0]
        for j in range(1, cols.shape[1]):
            acc = self.base.meet[acc, cols[:, j]]
        return acc.astype(np.uint8)

    @property
    def one_vector(self):
        cols = self.omega[self.coords]
        acc = cols[:, 0]
        for j in range(1, cols.shape[1]):
            acc = self.base.join[acc, cols[:, j]]
        return acc.astype(np.uint8)


def presented_lattice(V: FiniteLattice, pres: Presentation, cap=DEFAULT_CAP,
                      strict=True, dedup=True) -> PresentedLattice:
    """Lattice generated by ``pres`` inside the variety of ``V``.

    With ``strict`` a closure larger than ``cap`` raises CapExceeded;
    otherwise the partial closure is returned with ``complete=False``.
    """
    if V.n > 255:
        raise ValueError("base lattice must have at most 255 elements")
    omega = assignments(V, pres.generators, pres.relations)
    coords = np.arange(len(omega))
    if dedup and len(omega):
        # omega rows are distinct, so this keeps every coordinate in practice
        _, first = np.unique(omega, axis=0, return_index=True)
        coords = np.sort(first)
    gens = np.ascontiguousarray(omega[coords].T, dtype=np.uint8)
    meet_t = np.ascontiguousarray(V.meet, dtype=np.uint8)
    join_t = np.ascontiguousarray(V.join, dtype=np.uint8)
    rows, complete = kernels.closure_rows(meet_t, join_t, gens, int(cap))
    rows = np.asarray(rows, dtype=np.uint8)
    if not complete and strict:
        raise CapExceeded(cap, len(rows), generators=len(pres.generators),
                          coordinates=len(coords))
    return PresentedLattice(V, pres, omega, coords, gens, rows, bool(complete), int(cap))


def fm_presentation(m: int) -> Presentation:
    a = [f"a{k}" for k in range(m + 1)]
    b = [f"b{k}" for k in range(m + 1)]
    rels = [Identity(Var(a[k]), Var(a[k + 1])) for k in range(m)]
    rels += [Identity(Var(b[k]), Var(b[k + 1])) for k in range(m)]
    rels.append(Identity(meet("c", "d"), join("a0", "b0")))
    for k in range(m):
        rels.append(Identity(meet(join("c", a[k], b[k]), join("d", a[k], b[k])),
                             join(a[k + 1], b[k + 1])))
    # relations are listed so each filters as early as possible
    gens = tuple(a + b + ["c", "d"])
    return Presentation(gens, tuple(rels))


def omega_m(m: int) -> list:
    """Solutions ``(x0..xm, y0..ym, u, v)`` in N5 of the F_m relations."""
    pres = fm_presentation(m)
    return [tuple(int(v) for v in row) for row in assignments(n5(), pres.generators, pres.relations)]


def f_m(m: int, cap=DEFAULT_CAP, strict=True) -> PresentedLattice:
    return presented_lattice(n5(), fm_presentation(m), cap=cap, strict=strict)


def beta0(F: PresentedLattice, t) -> np.ndarray:
    """Meet of the generator vectors above t (the product top if none)."""
    t = np.asarray(t, dtype=np.intp)
    leq = F.base.leq
    above = [g for g in F.generator_vectors if leq[t, g].all()]
    if not above:
        return F.one_vector
    acc = above[0].astype(np.intp)
    for g in above[1:]:
        acc = F.base.meet[acc, g]
    return acc.astype(np.uint8)


def beta(F: PresentedLattice, t) -> np.ndarray:
    """Least element of F above t."""
    F.require_complete()
    t = np.asarray(t, dtype=np.intp)
    E = F.elements
    mask = F.base.leq[t[None, :], E].all(axis=1)
    if not mask.any():
        raise ValueError("no element of F lies above t")
    # in a product the height sum is strictly monotone, so the least
    # element of an up-set with a minimum has the smallest height sum
    heights = np.asarray(F.base.heights)[E[mask]].sum(axis=1)
    return E[mask][int(np.argmin(heights))]


def point_vector(F: PresentedLattice, z, t) -> np.ndarray:
    """``t . z``: t at coordinate z and the bottom of <z'> elsewhere.

    ``z`` is an omega tuple (or its row index); t must lie in <z>.
    """
    if isinstance(z, (int, np.integer)):
        zi = int(z)
    else:
        hits = np.flatnonzero((F.omega == np.asarray(z)).all(axis=1))
        if not len(hits):
            raise ValueError(f"{tuple(z)} is not in omega")
        zi = int(hits[0])
    col = np.flatnonzero(F.coords == zi)
    if not len(col):
        raise ValueError("coordinate was merged away")
    t = F.base.elem(t)
    sub = sublattice_closure(F.base, set(int(v) for v in F.omega[zi]))
    if t not in sub:
        raise ValueError(f"{F.base.names[t]} is not in the sublattice generated by z")
    vec = F.zero_vector.copy()
    vec[col[0]] = t
    return vec


def _vector_eval(F, t, fvals, var):
    """Componentwise value of a term whose variable is ``var`` and whose
    constants name generators."""
    if isinstance(t, Var):
        if t.name != var:
            raise ValueError(f"unexpected variable {t.name!r}")
        return fvals
    if isinstance(t, Const):
        return np.broadcast_to(F.generator(str(t.value)).astype(np.intp), fvals.shape)
    parts = [_vector_eval(F, a, fvals, var) for a in t.args]
    table = F.base.meet if isinstance(t, Meet) else F.base.join
    acc = parts[0]
    for p in parts[1:]:
        acc = table[acc, p]
    return acc


def elements_satisfying(F: PresentedLattice, equation: Identity, var="f"):
    """Indices of elements f of F with the equation holding componentwise."""
    F.require_complete()
    out = []
    leq = F.base.leq
    for s in range(0, F.size, 4096):
        block = F.elements[s:s + 4096].astype(np.intp)
        lv = _vector_eval(F, equation.lhs, block, var)
        rv = _vector_eval(F, equation.rhs, block, var)
        ok = (lv == rv).all(axis=1) if equation.relation == "=" else leq[lv, rv].all(axis=1)
        out.extend(int(s + i) for i in np.flatnonzero(ok))
    return out


def no_mid_equation(am="a0", bm="b0"):
    f = Var("f")
    return Identity(meet(join(f, Const("c")), join(f, Const("d"))),
                    join(meet(f, Const(am)), meet(f, Const(bm))), "=")


def no_mid_search(F: PresentedLattice, m=None):
    """First element f with (f v c) ^ (f v d) = (f ^ a_m) v (f ^ b_m), or None.

    With ``m=None`` the generators are taken to be named a, b, c, d.
    """
    eq = no_mid_equation("a", "b") if m is None else no_mid_equation(f"a{m}", f"b{m}")
    hits = elements_satisfying(F, eq)
    return F.elements[hits[0]] if hits else None


def solve_pointwise(L, constraints, var="t"):
    """All elements t satisfying every one-variable constraint, ascending."""
    return [t for t in range(L.n)
            if all(_holds_at(L, c, var, t) for c in constraints)]


def _holds_at(L, c: Identity, var, t):
    lv = eval_term(L, c.lhs, {var: t})
    rv = eval_term(L, c.rhs, {var: t})
    return lv == rv if c.relation == "=" else bool(L.leq[lv, rv])


def tuple_of(m, x, y, u, v, L=None):
    """Omega tuple ``(x.[0,m], y.[0,m], u, v)`` from per-index sequences."""
    L = L or n5()
    return tuple(L.elem(e) for e in list(x) + list(y) + [u, v])


def dot_sequence(t, I, m):
    """``t . I`` over [0, m]: t on I and "0" elsewhere."""
    return [t if k in I else "0" for k in range(m + 1)]
