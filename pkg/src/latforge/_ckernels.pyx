# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``latforge._pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy, memcmp
from libc.stdint cimport uint8_t, int32_t, int64_t, uint64_t

cnp.import_array()


cdef inline uint64_t _row_hash(const uint8_t* row, Py_ssize_t k) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef Py_ssize_t i
    for i in range(k):
        h ^= row[i]
        h *= 1099511628211ULL
    return h


cdef class _RowSet:
    cdef uint8_t* rows
    cdef int64_t* slots
    cdef Py_ssize_t k, count, row_cap, nslots

    def __cinit__(self, Py_ssize_t k, Py_ssize_t initial=1024):
        self.k = k
        self.count = 0
        self.row_cap = initial
        self.rows = <uint8_t*> malloc(initial * (k if k > 0 else 1))
        self.nslots = 2048
        while self.nslots < 2 * initial:
            self.nslots *= 2
        self.slots = <int64_t*> malloc(self.nslots * sizeof(int64_t))
        if self.rows == NULL or self.slots == NULL:
            raise MemoryError()
        cdef Py_ssize_t i
        for i in range(self.nslots):
            self.slots[i] = -1

    def __dealloc__(self):
        free(self.rows)
        free(self.slots)

    cdef int _grow_slots(self) except -1:
        cdef Py_ssize_t newn = self.nslots * 2, i, pos
        cdef int64_t* ns = <int64_t*> malloc(newn * sizeof(int64_t))
        if ns == NULL:
            raise MemoryError()
        for i in range(newn):
            ns[i] = -1
        for i in range(self.count):
            pos = <Py_ssize_t>(_row_hash(self.rows + i * self.k, self.k) & <uint64_t>(newn - 1))
            while ns[pos] != -1:
                pos = (pos + 1) & (newn - 1)
            ns[pos] = i
        free(self.slots)
        self.slots = ns
        self.nslots = newn
        return 0

    cdef Py_ssize_t add(self, const uint8_t* row) except -2:
        """Insert ``row``; return its index if new, -1 if already present."""
        cdef Py_ssize_t pos
        cdef int64_t idx
        cdef uint8_t* nr
        pos = <Py_ssize_t>(_row_hash(row, self.k) & <uint64_t>(self.nslots - 1))
        while True:
            idx = self.slots[pos]
            if idx == -1:
                break
            if memcmp(self.rows + idx * self.k, row, self.k) == 0:
                return -1
            pos = (pos + 1) & (self.nslots - 1)
        if self.count == self.row_cap:
            nr = <uint8_t*> realloc(self.rows, 2 * self.row_cap * self.k)
            if nr == NULL:
                raise MemoryError()
            self.rows = nr
            self.row_cap *= 2
        memcpy(self.rows + self.count * self.k, row, self.k)
        self.slots[pos] = self.count
        self.count += 1
        if 2 * self.count > self.nslots:
            self._grow_slots()
        return self.count - 1

    cdef object to_array(self):
        out = np.empty((self.count, self.k), dtype=np.uint8)
        cdef uint8_t[:, ::1] view = out
        if self.count > 0 and self.k > 0:
            memcpy(&view[0, 0], self.rows, self.count * self.k)
        return out


def closure_rows(const uint8_t[:, ::1] meet, const uint8_t[:, ::1] join,
                 const uint8_t[:, ::1] gens, Py_ssize_t cap):
    """Close ``gens`` under componentwise meet and join of a shared table.

    Returns ``(rows, complete)``; ``complete`` is False when more than ``cap``
    distinct rows were produced (the partial rows are still returned).
    """
    cdef Py_ssize_t k = gens.shape[1], g = gens.shape[0]
    cdef _RowSet rs = _RowSet(k)
    cdef Py_ssize_t i, j, c
    cdef uint8_t* buf = <uint8_t*> malloc(k if k > 0 else 1)
    cdef uint8_t* xi
    cdef uint8_t* xj
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(g):
            rs.add(&gens[i, 0])
            if rs.count > cap:
                return rs.to_array(), False
        i = 0
        while i < rs.count:
            j = 0
            while j <= i:
                # rows may move on realloc, so re-derive pointers each pair
                xi = rs.rows + i * k
                xj = rs.rows + j * k
                for c in range(k):
                    buf[c] = meet[xi[c], xj[c]]
                rs.add(buf)
                xi = rs.rows + i * k
                xj = rs.rows + j * k
                for c in range(k):
                    buf[c] = join[xi[c], xj[c]]
                rs.add(buf)
                if rs.count > cap:
                    return rs.to_array(), False
                j += 1
            i += 1
        return rs.to_array(), True
    finally:
        free(buf)


def whitman_violation(const uint8_t[:, ::1] leq, const int32_t[:, ::1] meet,
                      const int32_t[:, ::1] join):
    cdef Py_ssize_t n = leq.shape[0]
    cdef Py_ssize_t y0, y1, x0, x1
    cdef int32_t m, j
    for y0 in range(n):
        for y1 in range(n):
            m = meet[y0, y1]
            for x0 in range(n):
                if leq[m, x0]:
                    continue
                for x1 in range(n):
                    if leq[m, x1]:
                        continue
                    j = join[x0, x1]
                    if leq[m, j] and not leq[y0, j] and not leq[y1, j]:
                        return (y0, y1, x0, x1)
    return None


def modular_violation(const uint8_t[:, ::1] leq, const int32_t[:, ::1] meet,
                      const int32_t[:, ::1] join):
    cdef Py_ssize_t n = leq.shape[0]
    cdef Py_ssize_t x, y, z
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if leq[x, z] and join[x, meet[y, z]] != meet[join[x, y], z]:
                    return (x, y, z)
    return None


def distributive_violation(const uint8_t[:, ::1] leq, const int32_t[:, ::1] meet,
                           const int32_t[:, ::1] join):
    cdef Py_ssize_t n = leq.shape[0]
    cdef Py_ssize_t x, y, z
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
                    return (x, y, z)
    return None


def semidistributive_violation(const uint8_t[:, ::1] leq, const int32_t[:, ::1] meet,
                               const int32_t[:, ::1] join):
    cdef Py_ssize_t n = leq.shape[0]
    cdef Py_ssize_t x, y, z
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if join[x, z] == join[y, z] and join[x, z] != join[meet[x, y], z]:
                    return ("join", x, y, z)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x, z] == meet[y, z] and meet[x, z] != meet[join[x, y], z]:
                    return ("meet", x, y, z)
    return None


cdef inline int32_t _run(const int32_t[:, ::1] prog, int32_t* stack, const int32_t* env,
                         const int32_t[:, ::1] meet, const int32_t[:, ::1] join) nogil:
    cdef Py_ssize_t pc, sp = 0, t
    cdef int32_t op, arg, acc
    for pc in range(prog.shape[0]):
        op = prog[pc, 0]
        arg = prog[pc, 1]
        if op == 0:
            stack[sp] = env[arg]
            sp += 1
        elif op == 1:
            stack[sp] = arg
            sp += 1
        else:
            acc = stack[sp - arg]
            for t in range(sp - arg + 1, sp):
                if op == 2:
                    acc = meet[acc, stack[t]]
                else:
                    acc = join[acc, stack[t]]
            sp -= arg
            stack[sp] = acc
            sp += 1
    return stack[0]


def identity_violation(const uint8_t[:, ::1] leq, const int32_t[:, ::1] meet,
                       const int32_t[:, ::1] join, const int32_t[:, ::1] prog_lhs,
                       const int32_t[:, ::1] prog_rhs, int nvars, bint equal):
    """First assignment (lexicographic, last variable fastest) violating lhs<=rhs
    (or lhs==rhs when ``equal``); None if the identity holds."""
    cdef Py_ssize_t n = leq.shape[0]
    cdef int32_t* env = <int32_t*> malloc((nvars + 1) * sizeof(int32_t))
    cdef int32_t* stack = <int32_t*> malloc((prog_lhs.shape[0] + prog_rhs.shape[0] + 1) * sizeof(int32_t))
    cdef int32_t lv, rv
    cdef Py_ssize_t i
    cdef bint bad
    if env == NULL or stack == NULL:
        free(env)
        free(stack)
        raise MemoryError()
    try:
        for i in range(nvars):
            env[i] = 0
        while True:
            lv = _run(prog_lhs, stack, env, meet, join)
            rv = _run(prog_rhs, stack, env, meet, join)
            if equal:
                bad = lv != rv
            else:
                bad = not leq[lv, rv]
            if bad:
                return tuple(env[i] for i in range(nvars))
            i = nvars - 1
            while i >= 0:
                env[i] += 1
                if env[i] < n:
                    break
                env[i] = 0
                i -= 1
            if i < 0:
                return None
    finally:
        free(env)
        free(stack)
