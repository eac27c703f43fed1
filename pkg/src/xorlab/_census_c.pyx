# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled census kernel. Mirrors _census_py exactly; see that module for
the algorithm notes."""

import numpy as np

from libc.stdint cimport uint64_t


def count_valid_r3(d_rows, int n):
    cdef uint64_t d[8]
    cdef int i
    cdef uint64_t a3, b3, top = 1 << n
    cdef long count = 0
    cdef uint64_t first, row
    cdef bint ok
    if n > 8:
        raise ValueError("kernel supports n <= 8")
    for i in range(n):
        d[i] = d_rows[i]

    with nogil:
        # R3 = 0
        first = 0
        ok = True
        for i in range(n):
            if d[i]:
                if first == 0:
                    first = d[i]
                elif d[i] != first:
                    ok = False
                    break
        if ok:
            count += 1
        # R3 = outer(a3, b3), both sides nonempty
        for a3 in range(1, top):
            for b3 in range(1, top):
                first = 0
                ok = True
                for i in range(n):
                    row = d[i]
                    if (a3 >> i) & 1:
                        row ^= b3
                    if row:
                        if first == 0:
                            first = row
                        elif row != first:
                            ok = False
                            break
                if ok:
                    count += 1
    return count


def general_pair_scan(int n):
    cdef uint64_t top = 1 << n
    cdef uint64_t a1, a2, b1, b2, lv, rv, first, row
    cdef int i, li, ri
    cdef long pairs = 0, maxv = 0, valid
    cdef unsigned long long triples = 0
    cdef bint ok
    cdef uint64_t d[8]
    cdef uint64_t lcand[3]
    cdef uint64_t rcand[3]
    if n > 8:
        raise ValueError("kernel supports n <= 8")

    sides = [(x1, x2) for x1 in range(1, top) for x2 in range(1, top)
             if (x1 & ~x2) and (x1 & x2) and (x2 & ~x1)]
    cdef uint64_t[::1] g1 = np.array([t[0] for t in sides], dtype=np.uint64)
    cdef uint64_t[::1] g2 = np.array([t[1] for t in sides], dtype=np.uint64)
    cdef Py_ssize_t ng = len(sides), pa, pb

    with nogil:
        for pa in range(ng):
            a1 = g1[pa]
            a2 = g2[pa]
            lcand[0] = a1
            lcand[1] = a2
            lcand[2] = a1 ^ a2
            for pb in range(ng):
                b1 = g1[pb]
                b2 = g2[pb]
                rcand[0] = b1
                rcand[1] = b2
                rcand[2] = b1 ^ b2
                for i in range(n):
                    d[i] = 0
                    if (a1 >> i) & 1:
                        d[i] ^= b1
                    if (a2 >> i) & 1:
                        d[i] ^= b2
                valid = 0
                for li in range(3):
                    lv = lcand[li]
                    for ri in range(3):
                        rv = rcand[ri]
                        first = 0
                        ok = True
                        for i in range(n):
                            row = d[i]
                            if (lv >> i) & 1:
                                row ^= rv
                            if row:
                                if first == 0:
                                    first = row
                                elif row != first:
                                    ok = False
                                    break
                        if ok:
                            valid += 1
                pairs += 1
                triples += valid
                if valid > maxv:
                    maxv = valid
    return pairs, int(triples), maxv
