"""Exact brute-force ground truth for the guarantee tests.

Deliberately unaccelerated: a single vectorized norm computation, trivially
auditable, used to certify every probabilistic structure in the package.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

__all__ = ["OracleResult", "SandwichReport", "exact_radius_search", "sandwich_check"]


@dataclass(frozen=True)
class OracleResult:
    ids_within_R: frozenset
    ids_within_cR: frozenset


@dataclass
class SandwichReport:
    passed: bool
    false_negatives: list = field(default_factory=list)  # (id, distance or None)
    soundness_violations: list = field(default_factory=list)

    def describe(self):
        if self.passed:
            return "sandwich check passed"
        lines = []
        for pid, dist in self.false_negatives:
            lines.append(f"false negative: id={pid} true distance={dist}")
        for pid, dist in self.soundness_violations:
            lines.append(f"soundness violation: id={pid} true distance={dist}")
        return "\n".join(lines)


def exact_radius_search(points, q, radius):
    """Exactly {i : ||points[i] - q||_2 <= radius}; boundary ties included."""
    pts = np.asarray(points, dtype=np.float64)
    qv = np.asarray(q, dtype=np.float64).ravel()
    if pts.size == 0:
        return set()
    if pts.ndim != 2 or pts.shape[1] != qv.shape[0]:
        raise DimensionError(
            f"points shape {pts.shape} does not match query dimension {qv.shape[0]}"
        )
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    dists = np.sqrt(((pts - qv) ** 2).sum(axis=1))
    return set(np.flatnonzero(dists <= radius).tolist())


def sandwich_check(result, oracle_R, oracle_cR, points=None, q=None):
    """Pass iff oracle_R is a subset of the result ids, which are a subset
    of oracle_cR. Offending ids are reported with their true distances when
    the points and query are supplied."""
    ids = set(int(i) for i in (result.ids if hasattr(result, "ids") else result))
    oracle_R = set(oracle_R)
    oracle_cR = set(oracle_cR)

    def dist_of(pid):
        if points is None or q is None:
            return None
        return float(np.linalg.norm(np.asarray(points)[pid] - np.asarray(q)))

    fn = sorted(oracle_R - ids)
    sv = sorted(ids - oracle_cR)
    return SandwichReport(
        passed=not fn and not sv,
        false_negatives=[(pid, dist_of(pid)) for pid in fn],
        soundness_violations=[(pid, dist_of(pid)) for pid in sv],
    )
