"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from latforge import kernels
from latforge.catalog import chain, m33, m_n
from latforge.lattice import product
from latforge.linear import full_subspace_lattice
from latforge.properties import _tables
from latforge.terms import JONSSON, compile_term
from latforge.varieties import Presentation, presented_lattice


def cases():
    S = full_subspace_lattice(2, 4).lattice
    M = product(m_n(3), m_n(3))
    for name, L in [("S(2,4)", S), ("M_3xM_3", M), ("M33", m33())]:
        t = _tables(L)
        for check in ("whitman_violation", "modular_violation", "semidistributive_violation"):
            yield f"{check} {name}", check, t
        names = JONSSON.variables()
        prog = (compile_term(L, JONSSON.lhs, names), compile_term(L, JONSSON.rhs, names))
        yield f"identity_violation Jonsson {name}", "identity_violation", \
            t + prog + (len(names), False)
    C = chain(2)
    F = presented_lattice(C, Presentation(("a", "b", "c", "d")))
    mt = np.ascontiguousarray(C.meet, dtype=np.uint8)
    jn = np.ascontiguousarray(C.join, dtype=np.uint8)
    yield "closure_rows free distributive 4", "closure_rows", \
        (mt, jn, np.asarray(F.generator_vectors, dtype=np.uint8), 10_000)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("cython", kernels.compiled_backend))
    print(f"{'case':<46}" + "".join(f"{b:>12}" for b, _ in backends) + "   speedup")
    for label, fn, args_ in cases():
        times = []
        for _, mod in backends:
            f = getattr(mod, fn)
            times.append(min(timeit.repeat(lambda: f(*args_), number=1, repeat=args.repeat)))
        speed = f"{times[0] / times[1]:9.1f}x" if len(times) == 2 and times[1] > 0 else ""
        print(f"{label:<46}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
