"""Hot kernels for bucket-map construction.

The compiled Cython implementation is preferred; a pure-numpy fallback with
identical semantics is selected when the extension was not built. Both
produce the same dict (bucket key bytes -> int32 id array).
"""

try:
    from ._fast import build_buckets, encode_key

    BACKEND = "cython"
except ImportError:  # extension not compiled
    from ._python import build_buckets, encode_key

    BACKEND = "python"

__all__ = ["build_buckets", "encode_key", "BACKEND"]
