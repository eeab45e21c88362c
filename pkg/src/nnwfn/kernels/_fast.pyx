# cython: language_level=3, boundscheck=False, wraparound=False
"""Cython bucket kernels: the hot loop of index construction.

Semantics match nnwfn.kernels._python exactly (same keys, same id order).
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t

INT32_MAX = 2**31 - 1


def encode_key(digits):
    """Serialize one digit vector to its canonical byte-string key."""
    arr = np.asarray(digits, dtype=np.int64).ravel()
    if arr.size and np.abs(arr).max() > INT32_MAX:
        raise OverflowError("hash digit exceeds the 32-bit key encoding range")
    return arr.astype("<i4").tobytes()


def build_buckets(digits, offsets):
    """Group point ids by every perturbed key digits[p] + offsets[o]."""
    cdef cnp.ndarray[int32_t, ndim=2, mode="c"] dig = \
        np.ascontiguousarray(digits, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=2, mode="c"] off = \
        np.ascontiguousarray(offsets, dtype=np.int32)
    cdef Py_ssize_t n = dig.shape[0]
    cdef Py_ssize_t m = dig.shape[1]
    cdef Py_ssize_t t = off.shape[0]
    cdef dict table = {}
    if n == 0:
        return table

    cdef bytearray buf = bytearray(4 * m)
    cdef unsigned char[::1] view = buf
    cdef Py_ssize_t p, o, j
    cdef int64_t v
    cdef bytes key
    cdef list bucket
    for p in range(n):
        for o in range(t):
            for j in range(m):
                v = <int64_t> dig[p, j] + <int64_t> off[o, j]
                if v > INT32_MAX or v < -INT32_MAX - 1:
                    raise OverflowError(
                        "hash digit exceeds the 32-bit key encoding range")
                view[4 * j] = <unsigned char> (v & 0xFF)
                view[4 * j + 1] = <unsigned char> ((v >> 8) & 0xFF)
                view[4 * j + 2] = <unsigned char> ((v >> 16) & 0xFF)
                view[4 * j + 3] = <unsigned char> ((v >> 24) & 0xFF)
            key = bytes(buf)
            bucket = <list> table.get(key)
            if bucket is None:
                table[key] = [p]
            else:
                bucket.append(p)
    return {bkey: np.asarray(ids, dtype=np.int32) for bkey, ids in table.items()}
