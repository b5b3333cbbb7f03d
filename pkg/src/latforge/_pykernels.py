"""Pure-Python/numpy implementations of the hot loops.

Every function returns exactly what its compiled twin in ``_ckernels`` returns,
including witness order, so the two backends are interchangeable.
"""

import numpy as np


def closure_rows(meet, join, gens, cap):
    meet = np.asarray(meet, dtype=np.uint8)
    join = np.asarray(join, dtype=np.uint8)
    gens = np.asarray(gens, dtype=np.uint8)
    seen = {}
    rows = []

    def add(r):
        b = r.tobytes()
        if b not in seen:
            seen[b] = len(rows)
            rows.append(r)

    def pack(complete):
        k = gens.shape[1]
        if not rows:
            return np.empty((0, k), dtype=np.uint8), complete
        return np.array(rows, dtype=np.uint8).reshape(len(rows), k), complete

    for g in gens:
        add(g.copy())
        if len(rows) > cap:
            return pack(False)
    i = 0
    while i < len(rows):
        x = rows[i]
        block = np.array(rows[: i + 1])
        m = meet[x[None, :], block]
        jn = join[x[None, :], block]
        for j in range(i + 1):
            add(m[j])
            add(jn[j])
            if len(rows) > cap:
                return pack(False)
        i += 1
    return pack(True)


def whitman_violation(leq, meet, join):
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    for y0 in range(n):
        for y1 in range(n):
            m = meet[y0, y1]
            bad = leq[m][join] & ~leq[y0][join] & ~leq[y1][join]
            bad &= ~leq[m][:, None]
            bad &= ~leq[m][None, :]
            hits = np.argwhere(bad)
            if len(hits):
                x0, x1 = hits[0]
                return (y0, y1, int(x0), int(x1))
    return None


def _first_triple(mask):
    hits = np.argwhere(mask)
    if len(hits):
        return tuple(int(v) for v in hits[0])
    return None


def modular_violation(leq, meet, join):
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    for x in range(n):
        # rows y, columns z
        lhs = join[x][meet]
        rhs = meet[join[x][:, None], np.arange(n)[None, :]]
        bad = (lhs != rhs) & leq[x][None, :]
        hit = _first_triple(bad)
        if hit is not None:
            return (x,) + hit
    return None


def distributive_violation(leq, meet, join):
    n = meet.shape[0]
    for x in range(n):
        lhs = meet[x][join]
        rhs = join[meet[x][:, None], meet[x][None, :]]
        hit = _first_triple(lhs != rhs)
        if hit is not None:
            return (x,) + hit
    return None


def semidistributive_violation(leq, meet, join):
    n = meet.shape[0]
    ar = np.arange(n)
    for x in range(n):
        xz = join[x]
        same = xz[None, :] == join
        alt = join[meet[x][:, None], ar[None, :]]
        hit = _first_triple(same & (xz[None, :] != alt))
        if hit is not None:
            return ("join", x) + hit
    for x in range(n):
        xz = meet[x]
        same = xz[None, :] == meet
        alt = meet[join[x][:, None], ar[None, :]]
        hit = _first_triple(same & (xz[None, :] != alt))
        if hit is not None:
            return ("meet", x) + hit
    return None


def _run(prog, env, meet, join):
    stack = []
    for op, arg in prog:
        if op == 0:
            stack.append(env[arg])
        elif op == 1:
            stack.append(np.full(env.shape[1:], arg, dtype=np.int64) if env.ndim > 1 else arg)
        else:
            args = stack[-arg:]
            del stack[-arg:]
            acc = args[0]
            table = meet if op == 2 else join
            for a in args[1:]:
                acc = table[acc, a]
            stack.append(acc)
    return stack[0]


def identity_violation(leq, meet, join, prog_lhs, prog_rhs, nvars, equal):
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    prog_lhs = [tuple(int(v) for v in row) for row in np.asarray(prog_lhs).reshape(-1, 2)]
    prog_rhs = [tuple(int(v) for v in row) for row in np.asarray(prog_rhs).reshape(-1, 2)]
    # vectorize over the trailing variables, loop over the leading ones
    inner = 0
    while inner < nvars and n ** (inner + 1) <= 1 << 18:
        inner += 1
    outer = nvars - inner
    grid = np.indices((n,) * inner).reshape(inner, -1) if inner else np.zeros((0, 1), dtype=np.int64)
    width = grid.shape[1]
    for prefix in np.ndindex(*((n,) * outer)):
        env = np.empty((nvars, width), dtype=np.int64)
        for i, v in enumerate(prefix):
            env[i] = v
        env[outer:] = grid
        lv = _run(prog_lhs, env, meet, join)
        rv = _run(prog_rhs, env, meet, join)
        lv = np.broadcast_to(lv, (width,))
        rv = np.broadcast_to(rv, (width,))
        bad = (lv != rv) if equal else ~leq[lv, rv]
        hits = np.flatnonzero(bad)
        if len(hits):
            col = hits[0]
            return tuple(int(v) for v in env[:, col])
    return None
