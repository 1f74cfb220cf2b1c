# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    C_AXIOM_G = 0
    C_AXIOM_TOP = 1
    C_SI = 2
    C_WO = 3
    C_AND = 4

AXIOM_G, AXIOM_TOP, SI, WO, AND = 0, 1, 2, 3, 4
ABSENT = -1


def transitive_closure(Py_ssize_t n, lower, upper):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] m = out
    cdef Py_ssize_t i, j, k
    for i in range(n):
        m[i, i] = 1
    for lo, hi in zip(lower, upper):
        m[<Py_ssize_t>lo, <Py_ssize_t>hi] = 1
    for k in range(n):
        for i in range(n):
            if m[i, k]:
                for j in range(n):
                    if m[k, j]:
                        m[i, j] = 1
    return out


def meet_table(leq_in):
    cdef const cnp.uint8_t[:, ::1] leq = np.ascontiguousarray(leq_in, dtype=np.uint8)
    cdef Py_ssize_t n = leq.shape[0]
    cdef cnp.ndarray[cnp.int32_t, ndim=2] out = np.full((n, n), -1, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] meet = out
    cdef cnp.int32_t[::1] dsize = np.zeros(n, dtype=np.int32)
    cdef Py_ssize_t i, j, k, best
    cdef int count
    for j in range(n):
        for k in range(n):
            if leq[k, j]:
                dsize[j] += 1
    for i in range(n):
        meet[i, i] = i
        for j in range(i + 1, n):
            count = 0
            best = -1
            for k in range(n):
                if leq[k, i] and leq[k, j]:
                    count += 1
                    if best < 0 or dsize[k] > dsize[best]:
                        best = k
            # down(best) is a subset of the common lower bounds; equal size means best is the maximum
            if best < 0 or dsize[best] != count:
                return out, i, j
            meet[i, j] = best
            meet[j, i] = best
    return out, -1, -1


def derivation_fixpoint(leq_in, meet_in, gen_body, gen_head, Py_ssize_t top):
    cdef const cnp.uint8_t[:, ::1] leq = np.ascontiguousarray(leq_in, dtype=np.uint8)
    cdef const cnp.int32_t[:, ::1] meet = np.ascontiguousarray(meet_in, dtype=np.int32)
    cdef Py_ssize_t n = leq.shape[0]
    cdef cnp.ndarray[cnp.int8_t, ndim=2] rule_arr = np.full((n, n), -1, dtype=np.int8)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] p1_arr = np.full((n, n), -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] p2_arr = np.full((n, n), -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] present_arr = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] next_arr = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.int8_t[:, ::1] rule = rule_arr
    cdef cnp.int64_t[:, ::1] prem1 = p1_arr
    cdef cnp.int64_t[:, ::1] prem2 = p2_arr
    cdef cnp.uint8_t[:, ::1] present = present_arr
    cdef cnp.uint8_t[:, ::1] nxt = next_arr
    cdef Py_ssize_t b, y, a, x, x2
    cdef bint changed, found

    for gb, gh in zip(gen_body, gen_head):
        b = gb
        y = gh
        if not present[b, y]:
            present[b, y] = 1
            rule[b, y] = C_AXIOM_G
    if not present[top, top]:
        present[top, top] = 1
        rule[top, top] = C_AXIOM_TOP
    nxt[:, :] = present

    changed = True
    while changed:
        changed = False
        for b in range(n):
            for y in range(n):
                if present[b, y]:
                    continue
                found = False
                for a in range(n):
                    if leq[b, a] and present[a, y]:
                        rule[b, y] = C_SI
                        prem1[b, y] = a * n + y
                        found = True
                        break
                if not found:
                    for x in range(n):
                        if leq[x, y] and present[b, x]:
                            rule[b, y] = C_WO
                            prem1[b, y] = b * n + x
                            found = True
                            break
                if not found:
                    for x in range(n):
                        if present[b, x] and leq[y, x]:
                            for x2 in range(x + 1, n):
                                if present[b, x2] and meet[x, x2] == y:
                                    rule[b, y] = C_AND
                                    prem1[b, y] = b * n + x
                                    prem2[b, y] = b * n + x2
                                    found = True
                                    break
                        if found:
                            break
                if found:
                    nxt[b, y] = 1
                    changed = True
        present[:, :] = nxt
    return present_arr, rule_arr, p1_arr, p2_arr
