import numpy as np
import pytest
from hypothesis import given, strategies as st

from latforge.catalog import m33, n5
from latforge.errors import ParseError, UnboundVariable
from latforge.terms import (JONSSON, Const, Identity, Join, Meet, QuasiIdentity, Var, eval_term,
                            holds, join, meet, parse, parse_identity, parse_quasi_identity,
                            parse_term, resolve_const, term_values, variables)
from strategies import lattice_with_elements


def test_parse_term_structure():
    t = parse_term("(meet x (join y #p1))")
    assert t == Meet((Var("x"), Join((Var("y"), Const("p1")))))
    assert str(t) == "(meet x (join y #p1))"
    assert variables(t) == ["x", "y"]


@pytest.mark.parametrize("bad", ["", "(meet x", "meet x)", "(foo x y)", "(meet)", "( )",
                                 "(join x y) z", "#", "(<= x)"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_parse_identity_and_quasi():
    ident = parse_identity("(= (join x y) (join y x))")
    assert ident.relation == "=" and ident.variables() == ["x", "y"]
    q = parse_quasi_identity("(implies (and (<= x y)) (= (meet x y) x))")
    assert isinstance(q, QuasiIdentity) and q.names == ("x", "y")
    assert isinstance(parse("(implies (<= x y) (<= x y))"), QuasiIdentity)
    with pytest.raises(ValueError):
        QuasiIdentity((ident,), ident, names=("x",))


def test_jonsson_text_roundtrip():
    assert parse_identity(str(JONSSON)) == JONSSON
    assert JONSSON.variables() == ["x", "y", "u", "v"]


def test_constants_resolve_by_name_first():
    L = n5()
    assert resolve_const(L, "p2") == L.elem("p2")
    assert resolve_const(L, "1") == L.top  # a name, not index 1
    assert resolve_const(L, "4") == 4


def test_eval_and_unbound():
    L = m33()
    t = join("x", meet("y", Const("u")))
    assert eval_term(L, t, {"x": "0", "y": "1"}) == L.elem("u")
    with pytest.raises(UnboundVariable):
        eval_term(L, t, {"x": 0})
    assert holds(L, Identity(Var("x"), Const("1")), {"x": 5})


@given(lattice_with_elements(3))
def test_vectorized_matches_scalar(case):
    L, xs = case
    t = parse_term("(join (meet x y) (meet x z) #0)")
    names = ["x", "y", "z"]
    env = np.array(xs, dtype=np.int64).reshape(3, 1)
    assert term_values(L, t, names, env)[0] == eval_term(L, t, dict(zip(names, xs)))


@given(st.recursive(st.sampled_from(["x", "y", "z"]).map(Var),
                    lambda kids: st.tuples(st.booleans(), st.lists(kids, min_size=1, max_size=3))
                    .map(lambda p: Meet(tuple(p[1])) if p[0] else Join(tuple(p[1]))),
                    max_leaves=8))
def test_print_parse_roundtrip(t):
    assert parse_term(str(t)) == t
