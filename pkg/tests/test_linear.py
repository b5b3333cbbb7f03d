import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from latforge.catalog import m_n
from latforge.errors import (BadInterval, BadParam, CapExceeded, DimensionMismatch,
                             FieldMismatch, IndexOutOfTruncation)
from latforge.lattice import is_isomorphic
from latforge.linear import (Subspace, cd_family, enumerate_subspaces, full_subspace_lattice,
                             gaussian_binomial, intersect, leq, nullspace, relative_complement_linear,
                             rref, subspace_count, sum_)
from latforge.properties import is_modular, is_relatively_complemented


def matrices(q, n, max_rows=3):
    return st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n),
                    min_size=0, max_size=max_rows)


def span_set(X):
    """All vectors of X by brute force."""
    q, k = X.q, X.dim
    return {tuple(np.array(c) @ X.basis % q) if k else (0,) * X.n
            for c in itertools.product(range(q), repeat=k)}


def test_rref_and_nullspace():
    R = rref([[2, 4], [1, 2]], 3)
    assert R.tolist() == [[1, 2]]
    K = nullspace([[1, 1, 0]], 2)
    assert sorted(map(tuple, K.tolist())) == [(0, 0, 1), (1, 1, 0)]


@given(matrices(2, 4), matrices(2, 4))
def test_intersection_and_sum_by_brute_force(A, B):
    X, Y = Subspace(2, 4, A), Subspace(2, 4, B)
    assert span_set(intersect(X, Y)) == span_set(X) & span_set(Y)
    S = span_set(sum_(X, Y))
    assert S == {tuple((np.array(a) + np.array(b)) % 2) for a in span_set(X) for b in span_set(Y)}


@given(matrices(3, 3), matrices(3, 3))
def test_dimension_formula(A, B):
    X, Y = Subspace(3, 3, A), Subspace(3, 3, B)
    assert (X + Y).dim + (X & Y).dim == X.dim + Y.dim
    assert leq(X & Y, X) and leq(X, X + Y)


def test_subspace_json_roundtrip():
    X = Subspace(3, 4, [[1, 2, 0, 1], [0, 1, 1, 1]])
    assert Subspace.from_json(X.to_json()) == X
    assert X.to_json()["dim"] == 4


def test_mismatch_errors():
    with pytest.raises(FieldMismatch):
        intersect(Subspace(2, 2), Subspace(3, 2))
    with pytest.raises(DimensionMismatch):
        sum_(Subspace(2, 2), Subspace(2, 3))
    with pytest.raises(BadParam):
        list(enumerate_subspaces(4, 2))


@pytest.mark.parametrize("q,n,expected", [(2, 3, 16), (3, 2, 6), (2, 4, 67), (2, 2, 5), (3, 3, 28)])
def test_subspace_counts(q, n, expected):
    assert subspace_count(q, n) == expected
    assert sum(1 for _ in enumerate_subspaces(q, n)) == expected


def test_gaussian_binomial():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 3) == 13


def test_subspace_lattices_modular_rc():
    for q, n in [(2, 2), (2, 3), (3, 2)]:
        S = full_subspace_lattice(q, n)
        assert is_modular(S.lattice) and is_relatively_complemented(S.lattice)
    assert is_isomorphic(full_subspace_lattice(2, 2).lattice, m_n(3))
    assert is_isomorphic(full_subspace_lattice(3, 2).lattice, m_n(4))
    with pytest.raises(CapExceeded):
        full_subspace_lattice(2, 5, cap=100)


def test_relative_complement_linear():
    e = np.eye(3, dtype=int)
    X = Subspace(2, 3, [e[0], e[1]])
    A = Subspace(2, 3, [e[0]])
    Y = relative_complement_linear(X, A, Subspace.full(2, 3))
    assert Y == Subspace(2, 3, [e[0], e[2]])
    with pytest.raises(BadInterval):
        relative_complement_linear(A, X, Subspace.full(2, 3))


@given(matrices(2, 4), matrices(2, 4), matrices(2, 4))
def test_relative_complement_exists(A, B, C):
    a = Subspace(2, 4, A)
    x = a + Subspace(2, 4, B)
    b = x + Subspace(2, 4, C)
    y = relative_complement_linear(x, a, b)
    assert (x & y) == a and (x + y) == b


@pytest.mark.parametrize("N,q", [(5, 2), (6, 2), (5, 3)])
def test_cd_family(N, q):
    rows = cd_family(N, q).check()
    assert [r["n"] for r in rows] == list(range(N - 1))
    for r in rows:
        assert all(v for k, v in r.items() if k != "n")


def test_cd_family_truncation():
    F = cd_family(5, 2)
    with pytest.raises(IndexOutOfTruncation):
        F.C(4)
    with pytest.raises(BadParam):
        cd_family(2, 2)
    assert F.A(2).dim == 3 and F.D0.dim == 5
