"""Dataset ingestion: CSV and packed-binary vector files.

Packed-binary records are `int32 dim` followed by `dim` little-endian
float32 values, the layout shared by common ANN benchmark dumps (fvecs).
"""

import hashlib
import os
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DatasetFormatError

__all__ = ["Dataset", "load_dataset", "save_dataset", "dataset_fingerprint"]


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray  # (n, dim) float64

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1] if self.points.ndim == 2 else 0

    @property
    def ids(self):
        return np.arange(self.n, dtype=np.int64)

    def fingerprint(self):
        return dataset_fingerprint(self.points)


def dataset_fingerprint(points):
    """Content hash over the canonical float64 little-endian representation."""
    pts = np.ascontiguousarray(np.asarray(points, dtype="<f8"))
    h = hashlib.sha256()
    h.update(b"NNWFN-DS")
    h.update(struct.pack("<qq", pts.shape[0], pts.shape[1] if pts.ndim == 2 else 0))
    h.update(pts.tobytes())
    return h.hexdigest()


def _detect_format(path):
    ext = os.path.splitext(path)[1].lower()
    if ext in (".csv", ".txt"):
        return "csv"
    if ext in (".bin", ".fvecs", ".packed"):
        return "packed"
    raise DatasetFormatError(
        f"cannot infer format from extension {ext!r}; pass format='csv' or 'packed'"
    )


def _load_csv(path):
    rows = []
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if dim is None:
                dim = len(fields)
            elif len(fields) != dim:
                raise DatasetFormatError(
                    f"{path}:{lineno}: ragged row, {len(fields)} values, expected {dim}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError as exc:
                raise DatasetFormatError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        return np.zeros((0, 0))
    return np.asarray(rows, dtype=np.float64)


def _load_packed(path):
    raw = np.fromfile(path, dtype=np.uint8)
    rows = []
    dim = None
    offset = 0
    while offset < len(raw):
        if offset + 4 > len(raw):
            raise DatasetFormatError(f"{path}: truncated record header at byte {offset}")
        (rec_dim,) = struct.unpack_from("<i", raw, offset)
        if rec_dim < 0:
            raise DatasetFormatError(f"{path}: negative dimension at byte {offset}")
        if dim is None:
            dim = rec_dim
        elif rec_dim != dim:
            raise DatasetFormatError(
                f"{path}: inconsistent dimension {rec_dim} (expected {dim}) "
                f"at byte {offset}"
            )
        offset += 4
        end = offset + 4 * rec_dim
        if end > len(raw):
            raise DatasetFormatError(f"{path}: truncated vector at byte {offset}")
        rows.append(np.frombuffer(raw, dtype="<f4", count=rec_dim, offset=offset))
        offset = end
    if not rows:
        return np.zeros((0, 0))
    return np.asarray(rows, dtype=np.float64)


def load_dataset(path, format="auto"):
    """Parse a vector file into a Dataset with row ids 0..n-1."""
    if format == "auto":
        format = _detect_format(path)
    if format == "csv":
        pts = _load_csv(path)
    elif format == "packed":
        pts = _load_packed(path)
    else:
        raise DatasetFormatError(f"unknown dataset format {format!r}")
    if pts.size and not np.all(np.isfinite(pts)):
        bad = np.argwhere(~np.isfinite(pts))[0]
        raise DatasetFormatError(
            f"{path}: non-finite value at row {bad[0]}, column {bad[1]}"
        )
    return Dataset(points=pts)


def save_dataset(points, path, format="csv"):
    """Write points (n, dim) as CSV or packed-binary."""
    pts = np.asarray(points, dtype=np.float64)
    if format == "csv":
        with open(path, "w", encoding="utf-8") as fh:
            for row in pts:
                fh.write(",".join(repr(float(v)) for v in row))
                fh.write("\n")
    elif format == "packed":
        with open(path, "wb") as fh:
            for row in pts:
                fh.write(struct.pack("<i", len(row)))
                fh.write(row.astype("<f4").tobytes())
    else:
        raise DatasetFormatError(f"unknown dataset format {format!r}")
