"""The compiled and pure-Python backends must agree exactly, witnesses included."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from latforge import kernels
from latforge.catalog import chain, d4, m33, m_n, n5
from latforge.lattice import product
from latforge.properties import _tables, satisfies_whitman
from latforge.terms import JONSSON, compile_term, parse_identity
from strategies import lattices

py = kernels.python_backend
cy = kernels.compiled_backend
needs_cython = pytest.mark.skipif(cy is None, reason="compiled extension not available")

CHECKS = ["whitman_violation", "modular_violation", "distributive_violation",
          "semidistributive_violation"]


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@needs_cython
@pytest.mark.parametrize("check", CHECKS)
@given(L=lattices(max_n=10))
def test_property_kernels_agree(check, L):
    t = _tables(L)
    assert getattr(py, check)(*t) == getattr(cy, check)(*t)


@needs_cython
@pytest.mark.parametrize("check", CHECKS)
def test_property_kernels_agree_catalog(check):
    for L in (d4(), n5(), m33(), m_n(4), product(m_n(3), chain(2))):
        t = _tables(L)
        assert getattr(py, check)(*t) == getattr(cy, check)(*t)


@needs_cython
@pytest.mark.parametrize("text", [
    "(<= (meet x (join y (meet u v)) (join u v)) (join y (meet x u) (meet x v)))",
    "(= (join x (meet y z)) (meet (join x y) (join x z)))",
    "(<= (meet x #1) (join x #0))",
])
def test_identity_kernels_agree(text):
    ident = parse_identity(text)
    names = ident.variables()
    for L in (d4(), n5(), m33(), m_n(4)):
        leq, mt, jn = _tables(L)
        args = (leq, mt, jn, compile_term(L, ident.lhs, names), compile_term(L, ident.rhs, names),
                len(names), ident.relation == "=")
        assert py.identity_violation(*args) == cy.identity_violation(*args)


@needs_cython
@given(L=lattices(max_n=6), k=st.integers(1, 3), seed=st.integers(0, 1000))
def test_closure_kernels_agree(L, k, seed):
    rng = np.random.default_rng(seed)
    gens = rng.integers(0, L.n, size=(k, 5)).astype(np.uint8)
    mt = np.ascontiguousarray(L.meet, dtype=np.uint8)
    jn = np.ascontiguousarray(L.join, dtype=np.uint8)
    for cap in (3, 10_000):
        rp, cp = py.closure_rows(mt, jn, gens, cap)
        rc, cc = cy.closure_rows(mt, jn, gens, cap)
        assert cp == cc
        assert np.array_equal(np.asarray(rp), np.asarray(rc))


def test_jonsson_kernel_witness():
    L = m33()
    names = JONSSON.variables()
    leq, mt, jn = _tables(L)
    hit = kernels.identity_violation(leq, mt, jn, compile_term(L, JONSSON.lhs, names),
                                     compile_term(L, JONSSON.rhs, names), 4, False)
    assert [L.names[v] for v in hit] == ["v0", "v1", "u0", "u1"]


def test_pure_env_forces_fallback():
    code = ("from latforge import BACKEND; from latforge.catalog import m33;"
            "from latforge.properties import satisfies_whitman;"
            "print(BACKEND, satisfies_whitman(m33()).witness)")
    env = dict(os.environ, LATFORGE_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split(maxsplit=1)
    assert out[0] == "python"
    assert out[1].strip() == str(satisfies_whitman(m33()).witness)
