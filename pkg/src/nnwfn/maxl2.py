"""Rounding-based LSH index for the max-l2 product metric.

Points live in (R^k)^L with distance max_i ||x_i - y_i||_2. Each part is
hashed by w copies of h(x) = floor(<u, x>) for a uniform unit vector u; the
concatenated w*L digits form the bucket key. Every point is inserted under
all 3^{wL} keys within l-infinity distance 1 of its own key, so a query
probes exactly one bucket and can never miss a point at max-l2 distance <= 1.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetError, DimensionError, ParameterError

__all__ = [
    "LshParams",
    "ProductPoint",
    "MaxL2Index",
    "sample_unit_vector",
    "hash_scalar",
    "hash_g",
    "expand_neighbors",
    "optimal_w",
    "build_maxl2",
    "query_maxl2",
]

DEFAULT_EXPANSION_BUDGET = 10**8


@dataclass
class LshParams:
    """Parameters of one max-l2 LSH index; derived fields filled on init."""

    k: int
    L: int
    w: int
    c: float
    tau: float = field(init=False)
    p_fp: float = field(init=False)
    a: float = field(init=False)
    b: float = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise DimensionError(f"part dimension k={self.k} must be >= 1")
        if self.L < 1:
            raise ParameterError(f"part count L={self.L} must be >= 1")
        if self.w < 1:
            raise ParameterError(f"repetition count w={self.w} must be >= 1")
        self.tau = 2.0 * math.sqrt(self.k)
        if not self.c > self.tau:
            raise ParameterError(
                f"approximation factor c={self.c} must exceed tau=2*sqrt(k)={self.tau}"
            )
        self.p_fp = self.tau / self.c
        self.a = -math.log(self.p_fp)
        self.b = math.log(3.0)

    @property
    def num_digits(self):
        return self.w * self.L

    @property
    def expansions(self):
        return 3 ** self.num_digits


@dataclass(frozen=True)
class ProductPoint:
    parts: np.ndarray  # (L, k)
    id: int = 0

    @classmethod
    def from_parts(cls, parts, id=0):
        arr = np.asarray(parts, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError("a product point needs a (L, k)-shaped parts array")
        return cls(parts=arr, id=id)


def sample_unit_vector(k, rng):
    """Uniform sample from the unit sphere S^{k-1}."""
    if k < 1:
        raise DimensionError(f"dimension must be >= 1, got {k}")
    while True:
        v = rng.standard_normal(k)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def hash_scalar(u, x):
    """floor(<u, x>) as an exact Python int."""
    u = np.asarray(u, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if u.shape != x.shape:
        raise DimensionError(f"shape mismatch: {u.shape} vs {x.shape}")
    return math.floor(float(u @ x))


def expand_neighbors(key):
    """All 3^len(key) keys whose digits differ from key by at most 1 each."""
    base = tuple(int(d) for d in key)
    return {
        tuple(d + o for d, o in zip(base, offs))
        for offs in itertools.product((-1, 0, 1), repeat=len(base))
    }


def optimal_w(n, k, c, L):
    """Repetition count minimizing query cost: ceil(ln(n*a/k) / a / L), >= 1."""
    if n < 1:
        raise ParameterError(f"point count n={n} must be >= 1")
    tau = 2.0 * math.sqrt(k)
    if not c > tau:
        raise ParameterError(
            f"approximation factor c={c} must exceed tau=2*sqrt(k)={tau}"
        )
    a = -math.log(tau / c)
    arg = n * a / k
    if arg <= 1.0:
        return 1
    return max(1, math.ceil(math.log(arg) / a / L))


def _offset_grid(num_digits):
    offs = np.array(
        list(itertools.product((-1, 0, 1), repeat=num_digits)), dtype=np.int32
    )
    return np.ascontiguousarray(offs)


class MaxL2Index:
    """Bucket map over Z^{wL} with insert-side neighbor expansion."""

    def __init__(self, params, rng, expansion_budget=DEFAULT_EXPANSION_BUDGET):
        if params.expansions > expansion_budget:
            raise BudgetError(
                f"3^(w*L) = {params.expansions} exceeds the expansion budget "
                f"{expansion_budget}; choose smaller w or L"
            )
        self.params = params
        self.hash_vectors = np.stack(
            [sample_unit_vector(params.k, rng) for _ in range(params.num_digits)]
        )
        self.buckets = {}
        self.parts = np.zeros((params.L, 0, params.k))
        self.ids = np.zeros(0, dtype=np.int64)

    def _digits(self, parts):
        """Hash digits for (L, n, k) parts: an (n, w*L) int64 array."""
        p = self.params
        cols = []
        for i in range(p.L):
            vecs = self.hash_vectors[i * p.w : (i + 1) * p.w]  # (w, k)
            cols.append(np.floor(parts[i] @ vecs.T))
        digits = np.concatenate(cols, axis=1)
        if not np.all(np.isfinite(digits)):
            raise ParameterError("non-finite hash digits; inputs must be finite")
        return digits.astype(np.int64)

    def _check_parts(self, parts, n=None):
        p = self.params
        arr = np.asarray(parts, dtype=np.float64)
        expect = (p.L, n, p.k) if n is not None else None
        if arr.ndim != 3 or arr.shape[0] != p.L or arr.shape[2] != p.k:
            raise DimensionError(
                f"parts shape {arr.shape} does not conform to (L={p.L}, n, k={p.k})"
            )
        if expect is not None and arr.shape != expect:
            raise DimensionError(f"parts shape {arr.shape}, expected {expect}")
        return arr

    def build(self, parts, ids=None):
        """Insert all points; parts is (L, n, k), ids defaults to 0..n-1."""
        arr = self._check_parts(parts)
        n = arr.shape[1]
        self.parts = arr
        self.ids = (
            np.arange(n, dtype=np.int64)
            if ids is None
            else np.asarray(ids, dtype=np.int64)
        )
        if len(self.ids) != n:
            raise DimensionError("ids length does not match the number of points")
        if n == 0:
            self.buckets = {}
            return self
        digits = self._digits(arr)
        offsets = _offset_grid(self.params.num_digits)
        self.buckets = kernels.build_buckets(digits, offsets)
        return self

    def total_bucket_entries(self):
        return sum(len(v) for v in self.buckets.values())

    def key_of(self, point_parts):
        """Bucket key (digit tuple) of one (L, k) product point."""
        arr = np.asarray(point_parts, dtype=np.float64)
        if arr.shape != (self.params.L, self.params.k):
            raise DimensionError(
                f"point shape {arr.shape}, expected ({self.params.L}, {self.params.k})"
            )
        digits = self._digits(arr[:, None, :])[0]
        return tuple(int(d) for d in digits)

    def query(self, point_parts, radius=1.0, cap=None):
        """Ids whose max-l2 distance to the query is <= cap.

        Every stored point within `radius` (<= cap) is guaranteed to be in
        the probed bucket and therefore returned. Returns (ids, distances)
        with duplicates removed.
        """
        p = self.params
        if cap is None:
            cap = p.c
        if radius > cap:
            raise ParameterError(f"radius {radius} must not exceed cap {cap}")
        key = kernels.encode_key(self.key_of(point_parts))
        rows = self.buckets.get(key)
        if rows is None or len(rows) == 0:
            return np.zeros(0, dtype=np.int64), np.zeros(0)
        rows = np.unique(rows)
        q = np.asarray(point_parts, dtype=np.float64)
        diffs = self.parts[:, rows, :] - q[:, None, :]  # (L, m, k)
        dists = np.sqrt((diffs**2).sum(axis=2)).max(axis=0)  # (m,)
        keep = dists <= cap
        return self.ids[rows[keep]], dists[keep]


def hash_g(index, point):
    """Concatenated hash key of a product point under the index's h functions."""
    parts = point.parts if isinstance(point, ProductPoint) else point
    return index.key_of(parts)


def build_maxl2(points, params, rng, expansion_budget=DEFAULT_EXPANSION_BUDGET):
    """Build an index from a list of ProductPoints."""
    index = MaxL2Index(params, rng, expansion_budget=expansion_budget)
    if not points:
        return index.build(np.zeros((params.L, 0, params.k)))
    parts = np.stack([np.asarray(p.parts, dtype=np.float64) for p in points], axis=1)
    ids = np.array([p.id for p in points], dtype=np.int64)
    return index.build(parts, ids)


def query_maxl2(index, point, radius=1.0, cap=None):
    """Ids of stored points near the query; see MaxL2Index.query."""
    parts = point.parts if isinstance(point, ProductPoint) else point
    ids, _ = index.query(parts, radius=radius, cap=cap)
    return list(ids)
