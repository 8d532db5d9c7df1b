# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the orbit kernels in ``_pykernels``.

Same algorithms, C arrays instead of Python lists.  Inputs are limited to
q * b < 2**62 so that every intermediate fits a signed 64-bit integer; the
dispatcher in ``kernels`` routes larger inputs to the Python version.
"""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, int8_t

DEF UNKNOWN = 3
DEF ON_PATH = 2


def member_mask(long long b, const unsigned char[:] wmask, long long q):
    cdef int64_t n = q + 1
    cdef int64_t start, cur, t, d, nxt, s, i, top, cyc_start
    cdef int good
    cdef unsigned char zero_ok, one_ok
    if q < 1:
        raise ValueError("q must be positive")
    out = bytearray(n)
    cdef unsigned char[:] status = out
    cdef int64_t *path = <int64_t *> malloc(n * sizeof(int64_t))
    if path == NULL:
        raise MemoryError()
    try:
        for s in range(n):
            status[s] = UNKNOWN
        zero_ok = 1 if wmask[0] else 0
        one_ok = 1 if wmask[b - 1] else 0
        status[0] = zero_ok
        status[q] = one_ok
        for start in range(1, q):
            if status[start] != UNKNOWN:
                continue
            top = 0
            cur = start
            while status[cur] == UNKNOWN:
                t = b * cur
                d = t // q
                nxt = t - d * q
                if nxt == 0:
                    if (wmask[d] and zero_ok) or (wmask[d - 1] and one_ok):
                        status[cur] = 1
                    else:
                        status[cur] = 0
                    break
                status[cur] = ON_PATH
                path[top] = cur
                top += 1
                cur = nxt
            if status[cur] == ON_PATH:
                cyc_start = top - 1
                while path[cyc_start] != cur:
                    cyc_start -= 1
                good = 1
                for i in range(cyc_start, top):
                    if not wmask[(b * path[i]) // q]:
                        good = 0
                        break
                for i in range(cyc_start, top):
                    status[path[i]] = good
                top = cyc_start
            while top > 0:
                top -= 1
                s = path[top]
                t = b * s
                d = t // q
                if wmask[d] and status[t - d * q] == 1:
                    status[s] = 1
                else:
                    status[s] = 0
    finally:
        free(path)
    return out


def first_bad_digits(long long b, const unsigned char[:] wmask, long long q):
    cdef int64_t start, cur, d, s, i, top, cyc_start, nxt
    if q < 1:
        raise ValueError("q must be positive")
    cdef int64_t *phi = <int64_t *> malloc(q * sizeof(int64_t))
    cdef int64_t *path = <int64_t *> malloc(q * sizeof(int64_t))
    if phi == NULL or path == NULL:
        free(phi)
        free(path)
        raise MemoryError()
    try:
        for s in range(q):
            phi[s] = -3
        for start in range(q):
            if phi[start] != -3:
                continue
            top = 0
            cur = start
            while phi[cur] == -3:
                d = (b * cur) // q
                if not wmask[d]:
                    phi[cur] = 0
                    break
                phi[cur] = -2
                path[top] = cur
                top += 1
                cur = b * cur - d * q
            if phi[cur] == -2:
                cyc_start = top - 1
                while path[cyc_start] != cur:
                    cyc_start -= 1
                for i in range(cyc_start, top):
                    phi[path[i]] = -1
                top = cyc_start
            while top > 0:
                top -= 1
                s = path[top]
                nxt = phi[b * s - ((b * s) // q) * q]
                phi[s] = -1 if nxt == -1 else nxt + 1
        return [phi[s] for s in range(q)]
    finally:
        free(phi)
        free(path)
