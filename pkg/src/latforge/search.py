"""Backtracking core shared by the homomorphism and witness searches.

Variables are ``0..k-1`` and are bound in index order. A constraint is
checked as soon as the last variable of its scope is bound; a derived
variable takes a computed value instead of iterating its domain. Solutions
come out in lexicographic order of the domain sequences.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence


class Search:
    def __init__(self, domains: Sequence[Sequence[int]]):
        self.domains = [list(d) for d in domains]
        self.k = len(self.domains)
        self._checks = [[] for _ in range(self.k)]
        self._derived = [None] * self.k
        self._allowed = [None] * self.k

    def add(self, scope, test: Callable[..., bool]):
        scope = tuple(scope)
        if not scope:
            raise ValueError("empty constraint scope")
        self._checks[max(scope)].append((scope, test))
        return self

    def derive(self, var, scope, fn: Callable[..., int]):
        scope = tuple(scope)
        if scope and max(scope) >= var:
            raise ValueError("derived variable must follow its scope")
        self._derived[var] = (scope, fn)
        self._allowed[var] = set(self.domains[var])
        return self

    def solutions(self) -> Iterator[tuple]:
        if any(len(d) == 0 for i, d in enumerate(self.domains) if self._derived[i] is None):
            return iter(())
        return self._run()

    def _run(self):
        a = [None] * self.k
        checks, derived, domains, allowed = self._checks, self._derived, self.domains, self._allowed
        k = self.k

        def consistent(i):
            for scope, test in checks[i]:
                if not test(*[a[v] for v in scope]):
                    return False
            return True

        def rec(i):
            if i == k:
                yield tuple(a)
                return
            d = derived[i]
            if d is not None:
                scope, fn = d
                val = fn(*[a[v] for v in scope])
                if val in allowed[i]:
                    a[i] = val
                    if consistent(i):
                        yield from rec(i + 1)
                a[i] = None
                return
            for val in domains[i]:
                a[i] = val
                if consistent(i):
                    yield from rec(i + 1)
            a[i] = None

        return rec(0)

    def first(self):
        return next(self.solutions(), None)
