"""Random orthonormal bases and scaled block mappings.

A mapping family carves one Haar-distributed orthonormal basis of R^d into
d/k consecutive blocks of k rows, each scaled by sqrt(d/k). For any vector x
at least one block does not expand it, while each block shrinks a long
vector below a threshold only with probability exponentially small in k.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError

__all__ = [
    "OrthonormalBasis",
    "BlockMapping",
    "MappingFamily",
    "random_orthonormal_basis",
    "random_orthonormal_bases",
    "make_family",
    "apply_mapping",
]


@dataclass(frozen=True)
class OrthonormalBasis:
    dim: int
    rows: np.ndarray  # (dim, dim), rows are the basis vectors
    seed: int | None = None


@dataclass(frozen=True)
class BlockMapping:
    """k consecutive basis rows scaled by sqrt(in_dim / out_dim)."""

    in_dim: int
    out_dim: int
    rows: np.ndarray  # (out_dim, in_dim)
    block_index: int = 0
    family_index: int = 0


@dataclass(frozen=True)
class MappingFamily:
    blocks: tuple
    k: int
    in_dim: int  # padded dimension, a multiple of k
    orig_dim: int  # dimension inputs are allowed to have before zero-padding

    @property
    def num_blocks(self):
        return len(self.blocks)

    def stacked_rows(self):
        """All block rows as one (in_dim, in_dim) matrix, scale included."""
        return np.concatenate([b.rows for b in self.blocks], axis=0)

    def transform_points(self, points):
        """Map an (n, d) array through every block at once.

        Returns an (num_blocks, n, k) array; points may have the original
        (unpadded) dimension, missing coordinates are treated as zero.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        pts = pad_columns(pts, self.orig_dim, self.in_dim)
        out = pts @ self.stacked_rows().T  # (n, in_dim)
        return np.ascontiguousarray(
            out.reshape(len(pts), self.num_blocks, self.k).transpose(1, 0, 2)
        )


def pad_columns(points, orig_dim, padded_dim):
    """Zero-pad (n, orig_dim) points up to padded_dim columns."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[1] == padded_dim:
        return pts
    if pts.shape[1] != orig_dim:
        raise DimensionError(
            f"points have dimension {pts.shape[1]}, expected {orig_dim} or {padded_dim}"
        )
    padded = np.zeros((pts.shape[0], padded_dim))
    padded[:, :orig_dim] = pts
    return padded


def random_orthonormal_bases(dim, count, seed):
    """Sample `count` independent Haar-distributed bases as a (count, dim, dim) array.

    Each [i] slice has orthonormal rows. QR of a square standard-Gaussian
    matrix, with column signs fixed so the R diagonal is positive, gives the
    Haar distribution.
    """
    if dim < 1:
        raise DimensionError(f"dimension must be >= 1, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    gauss = rng.standard_normal((count, dim, dim))
    q, r = np.linalg.qr(gauss)
    signs = np.sign(np.einsum("...ii->...i", r))
    signs[signs == 0] = 1.0
    # scale columns of Q, then take rows of Q^T as the basis vectors
    q *= signs[:, None, :]
    return np.ascontiguousarray(q.transpose(0, 2, 1))


def random_orthonormal_basis(dim, seed):
    """One Haar-distributed orthonormal basis; deterministic for a fixed seed."""
    rows = random_orthonormal_bases(dim, 1, seed)[0]
    stored_seed = seed if isinstance(seed, int) else None
    return OrthonormalBasis(dim=dim, rows=rows, seed=stored_seed)


def make_family(basis, k, family_index=0):
    """Carve a basis into ceil(dim/k) block mappings scaled by sqrt(dim'/k).

    When k does not divide the basis dimension, the basis is extended to
    dim' = k * ceil(dim/k) with standard unit vectors in the padded
    coordinates; inputs are zero-padded there, so the extra rows never
    contribute.
    """
    if k < 1 or k > basis.dim:
        raise ParameterError(f"block size k={k} must satisfy 1 <= k <= dim={basis.dim}")
    d = basis.dim
    num_blocks = -(-d // k)
    padded = num_blocks * k
    rows = basis.rows
    if padded != d:
        ext = np.zeros((padded, padded))
        ext[:d, :d] = rows
        ext[d:, d:] = np.eye(padded - d)
        rows = ext
    scale = np.sqrt(padded / k)
    blocks = tuple(
        BlockMapping(
            in_dim=padded,
            out_dim=k,
            rows=scale * rows[i * k : (i + 1) * k],
            block_index=i,
            family_index=family_index,
        )
        for i in range(num_blocks)
    )
    return MappingFamily(blocks=blocks, k=k, in_dim=padded, orig_dim=d)


def apply_mapping(mapping, x):
    """Apply one block mapping to a vector."""
    vec = np.asarray(x, dtype=np.float64)
    if vec.shape != (mapping.in_dim,):
        raise DimensionError(
            f"vector has dimension {vec.shape}, mapping expects ({mapping.in_dim},)"
        )
    return mapping.rows @ vec
