"""Index persistence.

A snapshot stores seeds, parameters and a dataset fingerprint rather than
materialized buckets: the build is deterministic, so reloading rebuilds a
bit-identical index while keeping snapshot files tiny.
"""

import json
from dataclasses import dataclass

from .dataio import load_dataset
from .errors import SnapshotError
from .reduction import ProblemConfig, ReductionPlan, build_index

__all__ = ["IndexSnapshot", "save_index", "load_snapshot", "load_index"]

MAGIC = b"NNWFN1"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class IndexSnapshot:
    format_version: int
    seed: int
    config: ProblemConfig
    plan: ReductionPlan
    fingerprint: str
    dataset_path: str
    dataset_format: str
    max_combos: int
    expansion_budget: int


def save_index(index, path, dataset_path, dataset_format, fingerprint,
               max_combos, expansion_budget):
    """Write the snapshot describing a built index."""
    payload = {
        "format_version": FORMAT_VERSION,
        "seed": index.seed,
        "config": {
            "n": index.config.n,
            "d": index.config.d,
            "c": index.config.c,
            "R": index.config.R,
        },
        "plan": index.plan.to_dict(),
        "fingerprint": fingerprint,
        "dataset_path": dataset_path,
        "dataset_format": dataset_format,
        "max_combos": max_combos,
        "expansion_budget": expansion_budget,
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(json.dumps(payload, sort_keys=True).encode("utf-8"))


def load_snapshot(path):
    """Parse a snapshot file without rebuilding the index."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(MAGIC):
        raise SnapshotError(f"{path}: missing magic bytes {MAGIC!r}")
    try:
        payload = json.loads(blob[len(MAGIC):].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SnapshotError(f"{path}: corrupt snapshot payload: {exc}") from exc
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise SnapshotError(
            f"{path}: unsupported snapshot version {version}, expected {FORMAT_VERSION}"
        )
    return IndexSnapshot(
        format_version=version,
        seed=payload["seed"],
        config=ProblemConfig(**payload["config"]),
        plan=ReductionPlan.from_dict(payload["plan"]),
        fingerprint=payload["fingerprint"],
        dataset_path=payload["dataset_path"],
        dataset_format=payload["dataset_format"],
        max_combos=payload["max_combos"],
        expansion_budget=payload["expansion_budget"],
    )


def load_index(path, dataset_path=None):
    """Rebuild the index described by a snapshot.

    The dataset is re-read (optionally from an overriding path) and its
    fingerprint checked, so a stale or tampered dataset is rejected.
    Returns (index, snapshot, dataset).
    """
    snap = load_snapshot(path)
    dataset = load_dataset(dataset_path or snap.dataset_path, format=snap.dataset_format)
    fingerprint = dataset.fingerprint()
    if fingerprint != snap.fingerprint:
        raise SnapshotError(
            f"dataset fingerprint mismatch: snapshot has {snap.fingerprint[:12]}..., "
            f"dataset hashes to {fingerprint[:12]}... (stale snapshot?)"
        )
    index = build_index(
        dataset.points,
        snap.config,
        snap.plan,
        snap.seed,
        max_combos=snap.max_combos,
        expansion_budget=snap.expansion_budget,
    )
    return index, snap, dataset
