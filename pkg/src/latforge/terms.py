"""Lattice terms, identities and quasi-identities with an s-expression syntax.

Syntax: ``(meet x (join y (meet u v)))``; constants are written ``#name`` or
``#3``; identities are ``(<= s t)`` or ``(= s t)``; quasi-identities are
``(implies (and prem ...) concl)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from latforge.errors import ParseError, UnboundVariable


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: Union[int, str]

    def __str__(self):
        return f"#{self.value}"


@dataclass(frozen=True)
class Meet:
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("meet needs at least one argument")

    def __str__(self):
        return "(meet " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Join:
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError("join needs at least one argument")

    def __str__(self):
        return "(join " + " ".join(map(str, self.args)) + ")"


Term = Union[Var, Const, Meet, Join]


def meet(*args):
    return Meet(tuple(_coerce(a) for a in args))


def join(*args):
    return Join(tuple(_coerce(a) for a in args))


def _coerce(t):
    return Var(t) if isinstance(t, str) else t


@dataclass(frozen=True)
class Identity:
    """``lhs <= rhs`` or ``lhs = rhs``."""
    lhs: Term
    rhs: Term
    relation: str = "<="

    def __post_init__(self):
        if self.relation not in ("<=", "="):
            raise ValueError(f"relation must be '<=' or '=', got {self.relation!r}")

    def variables(self):
        return _merge(variables(self.lhs), variables(self.rhs))

    def __str__(self):
        return f"({self.relation} {self.lhs} {self.rhs})"


@dataclass(frozen=True)
class QuasiIdentity:
    """Premises imply conclusion; ``names`` fixes the variable order.

    The search binds variables in ``names`` order, so listing variables as
    they become constrained by premises prunes earlier.
    """
    premises: tuple
    conclusion: Identity
    names: tuple = ()

    def __post_init__(self):
        found = _merge(*[p.variables() for p in self.premises], self.conclusion.variables())
        if not self.names:
            object.__setattr__(self, "names", tuple(found))
        missing = [v for v in found if v not in self.names]
        if missing:
            raise ValueError(f"undeclared variables {missing}")

    def __str__(self):
        return "(implies (and " + " ".join(map(str, self.premises)) + f") {self.conclusion})"


def _merge(*lists):
    out = []
    for names in lists:
        for v in names:
            if v not in out:
                out.append(v)
    return out


def variables(t: Term):
    """Variable names in order of first occurrence."""
    if isinstance(t, Var):
        return [t.name]
    if isinstance(t, Const):
        return []
    return _merge(*[variables(a) for a in t.args])


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _tokens(text):
    return _TOKEN.findall(text)


def _read(tokens, i):
    if i >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[i]
    if tok == ")":
        raise ParseError("unexpected ')'")
    if tok != "(":
        return tok, i + 1
    items, i = [], i + 1
    while True:
        if i >= len(tokens):
            raise ParseError("missing ')'")
        if tokens[i] == ")":
            return items, i + 1
        item, i = _read(tokens, i)
        items.append(item)


def _sexpr(text):
    tokens = _tokens(text)
    if not tokens:
        raise ParseError("empty input")
    tree, end = _read(tokens, 0)
    if end != len(tokens):
        raise ParseError("trailing tokens")
    return tree


def _term(tree):
    if isinstance(tree, str):
        if tree.startswith("#"):
            body = tree[1:]
            if not body:
                raise ParseError("empty constant")
            return Const(body)
        if tree in ("meet", "join", "implies", "and", "<=", "="):
            raise ParseError(f"keyword {tree!r} used as a variable")
        return Var(tree)
    if not tree:
        raise ParseError("empty list")
    head, args = tree[0], tree[1:]
    if head not in ("meet", "join"):
        raise ParseError(f"expected meet or join, got {head!r}")
    if not args:
        raise ParseError(f"{head} needs arguments")
    parts = tuple(_term(a) for a in args)
    return Meet(parts) if head == "meet" else Join(parts)


def _identity(tree):
    if not (isinstance(tree, list) and len(tree) == 3 and tree[0] in ("<=", "=")):
        raise ParseError("expected (<= s t) or (= s t)")
    return Identity(_term(tree[1]), _term(tree[2]), tree[0])


def parse_term(text) -> Term:
    return _term(_sexpr(text))


def parse_identity(text) -> Identity:
    return _identity(_sexpr(text))


def parse_quasi_identity(text, names=()) -> QuasiIdentity:
    tree = _sexpr(text)
    if not (isinstance(tree, list) and len(tree) == 3 and tree[0] == "implies"):
        raise ParseError("expected (implies (and ...) conclusion)")
    prem = tree[1]
    if isinstance(prem, list) and prem and prem[0] == "and":
        premises = tuple(_identity(p) for p in prem[1:])
    else:
        premises = (_identity(prem),)
    return QuasiIdentity(premises, _identity(tree[2]), tuple(names))


def parse(text):
    """Parse a term, identity or quasi-identity, whichever the text is."""
    tree = _sexpr(text)
    if isinstance(tree, list) and tree and tree[0] == "implies":
        return parse_quasi_identity(text)
    if isinstance(tree, list) and tree and tree[0] in ("<=", "="):
        return _identity(tree)
    return _term(tree)


# -- evaluation -------------------------------------------------------------

def resolve_const(L, value):
    """Element named ``value``; an int, or a digit string that is not a name,
    is taken as an index."""
    if isinstance(value, str) and value not in L.names and value.isdigit():
        value = int(value)
    return L.elem(value)


def eval_term(L, t: Term, assignment) -> int:
    """Evaluate ``t`` in ``L``; ``assignment`` maps variable names to elements."""
    if isinstance(t, Var):
        try:
            return L.elem(assignment[t.name])
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} is not assigned") from None
    if isinstance(t, Const):
        return resolve_const(L, t.value)
    vals = [eval_term(L, a, assignment) for a in t.args]
    table = L.meet if isinstance(t, Meet) else L.join
    acc = vals[0]
    for v in vals[1:]:
        acc = int(table[acc, v])
    return acc


def compile_term(L, t: Term, names) -> np.ndarray:
    """Postfix program for the kernels: rows ``(op, arg)`` with op 0 = variable,
    1 = constant, 2 = meet of the top ``arg`` stack items, 3 = join."""
    pos = {v: i for i, v in enumerate(names)}
    out = []

    def emit(s):
        if isinstance(s, Var):
            if s.name not in pos:
                raise UnboundVariable(f"variable {s.name!r} is not declared")
            out.append((0, pos[s.name]))
        elif isinstance(s, Const):
            out.append((1, resolve_const(L, s.value)))
        else:
            for a in s.args:
                emit(a)
            out.append((2 if isinstance(s, Meet) else 3, len(s.args)))

    emit(t)
    return np.array(out, dtype=np.int32).reshape(-1, 2)


def term_values(L, t: Term, names, env) -> np.ndarray:
    """Vectorized evaluation: ``env`` has one row of element ids per name."""
    if isinstance(t, Var):
        return env[list(names).index(t.name)]
    if isinstance(t, Const):
        return np.full(env.shape[1:], resolve_const(L, t.value), dtype=np.int64)
    vals = [term_values(L, a, names, env) for a in t.args]
    table = L.meet if isinstance(t, Meet) else L.join
    acc = vals[0]
    for v in vals[1:]:
        acc = table[acc, v]
    return acc


def holds(L, ident: Identity, assignment) -> bool:
    lv = eval_term(L, ident.lhs, assignment)
    rv = eval_term(L, ident.rhs, assignment)
    return lv == rv if ident.relation == "=" else bool(L.leq[lv, rv])


JONSSON = parse_identity(
    "(<= (meet x (join y (meet u v)) (join u v)) (join y (meet x u) (meet x v)))")
