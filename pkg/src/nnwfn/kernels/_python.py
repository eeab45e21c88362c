"""Pure-numpy bucket kernels (fallback for the Cython extension).

Keys are the digit vectors serialized as fixed-width little-endian signed
32-bit integers, so they can be used directly as hash-map keys.
"""

import numpy as np

INT32_MAX = 2**31 - 1


def encode_key(digits):
    """Serialize one digit vector to its canonical byte-string key."""
    arr = np.asarray(digits, dtype=np.int64).ravel()
    if arr.size and np.abs(arr).max() > INT32_MAX:
        raise OverflowError("hash digit exceeds the 32-bit key encoding range")
    return arr.astype("<i4").tobytes()


def build_buckets(digits, offsets):
    """Group point ids by every perturbed key digits[p] + offsets[o].

    digits: (n, m) int32, one hash-digit row per point.
    offsets: (t, m) int32, the perturbations applied to each row (the
        insert-side neighbor expansion).
    Returns dict[bytes, int32 ndarray]; each point id appears once per
    offset row, ids within a bucket in increasing order.
    """
    digits = np.ascontiguousarray(digits, dtype=np.int32)
    offsets = np.ascontiguousarray(offsets, dtype=np.int32)
    n, m = digits.shape
    if n == 0:
        return {}
    t = offsets.shape[0]
    expanded = (digits[:, None, :].astype(np.int64) + offsets[None, :, :]).reshape(-1, m)
    if np.abs(expanded).max() > INT32_MAX:
        raise OverflowError("hash digit exceeds the 32-bit key encoding range")
    expanded = expanded.astype("<i4")
    ids = np.repeat(np.arange(n, dtype=np.int32), t)
    uniq, inverse = np.unique(expanded, axis=0, return_inverse=True)
    order = np.argsort(inverse.ravel(), kind="stable")
    counts = np.bincount(inverse.ravel(), minlength=len(uniq))
    grouped = np.split(ids[order], np.cumsum(counts)[:-1])
    return {
        np.ascontiguousarray(uniq[i]).tobytes(): np.ascontiguousarray(g)
        for i, g in enumerate(grouped)
    }
