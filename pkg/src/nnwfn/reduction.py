"""Two-stage reduction from Euclidean c-approximate NN to max-l2 LSH.

L independent mapping families are drawn over R^d (padded to a multiple of
the block size). Every combination (i_1, ..., i_L) of one block per family
defines a max-l2 instance; each input point is inserted into every
combination's LSH index. For a point within distance R of the query some
combination contracts the difference vector in all L parts, so the point is
guaranteed to surface as a candidate; a final exact-distance filter keeps
only points within c*R.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, DimensionError, InfeasibleError, ParameterError
from .linalg import make_family, pad_columns, random_orthonormal_basis
from .maxl2 import DEFAULT_EXPANSION_BUDGET, LshParams, MaxL2Index, optimal_w

__all__ = [
    "ProblemConfig",
    "ReductionPlan",
    "QueryResult",
    "NnwfnIndex",
    "plan_parameters",
    "build_index",
    "build_single_stage",
    "query",
    "rescale",
]

DEFAULT_MAX_COMBOS = 100_000

# gamma = (2c/(c-alpha))^2 at alpha = c/2; also the log-n multiplier for k1/k2
GAMMA_AT_HALF = 16.0
D1 = 16.0
D2 = 16.0
D_FEAS = 2.0 * math.sqrt(D2)


@dataclass(frozen=True)
class ProblemConfig:
    n: int
    d: int
    c: float
    R: float = 1.0

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"point count n={self.n} must be >= 0")
        if self.d < 1:
            raise DimensionError(f"dimension d={self.d} must be >= 1")
        if not self.c > 1.0:
            raise ParameterError(f"approximation factor c={self.c} must exceed 1")
        if not self.R > 0.0:
            raise ParameterError(f"radius R={self.R} must be positive")


@dataclass
class ReductionPlan:
    alpha1: float
    alpha2: float
    gamma: float
    k1: int
    k2: int
    L: int
    w: int
    f_n: float
    mu: float
    overridden: bool = False

    def __post_init__(self):
        if self.k2 < 1 or self.L < 1 or self.w < 1:
            raise ParameterError("k2, L and w must all be >= 1")
        if not 1.0 <= self.alpha2 < self.alpha1:
            # alpha1 < c is checked by the planner against its config
            raise ParameterError("need 1 <= alpha2 < alpha1")

    @property
    def leaf_tau(self):
        return 2.0 * math.sqrt(self.k2)

    @property
    def leaf_cap(self):
        """Approximation factor handed to the leaf LSH indexes.

        When an overridden desk-scale plan leaves alpha2 at or below the
        leaf's tau = 2*sqrt(k2), the cap is bumped just above tau: a larger
        cap only admits more candidates, which the exact final filter
        removes, so the guarantees are unaffected.
        """
        return max(self.alpha2, self.leaf_tau * (1.0 + 1e-9))

    def to_dict(self):
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "gamma": self.gamma,
            "k1": self.k1,
            "k2": self.k2,
            "L": self.L,
            "w": self.w,
            "f_n": self.f_n,
            "mu": self.mu,
            "overridden": self.overridden,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass(frozen=True)
class QueryResult:
    ids: np.ndarray  # int64, deduplicated
    distances: np.ndarray  # true l2 distances in input units


def rescale(points, R):
    """Divide coordinates by R so all internal thresholds become 1 and c."""
    if not R > 0:
        raise ParameterError(f"radius R={R} must be positive")
    return np.asarray(points, dtype=np.float64) / R


def plan_parameters(config, f_n=None, *, k1=None, k2=None, L=None, w=None):
    """Derive all reduction parameters for a problem instance.

    f_n is the planner's growth-function value (> 1); defaults to
    sqrt(ln n). Explicit k1/k2/L/w overrides skip the asymptotic formulas
    (and the feasibility check) for desk-scale instances: correctness holds
    for any parameter choice, only false-positive rates degrade.
    """
    n = max(config.n, 2)
    ln_n = math.log(n)
    ln_ln_n = max(math.log(max(ln_n, 1.0 + 1e-12)), 1e-12)
    if f_n is None:
        f_n = max(math.sqrt(ln_n), 1.0 + 1e-12)
    if not f_n > 1.0:
        raise ParameterError(f"f_n={f_n} must exceed 1")

    overridden = any(v is not None for v in (k1, k2, L, w))
    gamma = (2.0 * config.c / (config.c - config.c / 2.0)) ** 2
    # alpha2 must stay in [1, alpha1); the max() clamps only bite for c <= 4,
    # where the asymptotic plan is infeasible anyway (desk-scale overrides)
    alpha2 = max(config.c / 4.0, 1.0)
    alpha1 = config.c / 2.0 if config.c / 2.0 > alpha2 else (alpha2 + config.c) / 2.0

    if L is None:
        L = max(1, math.ceil(ln_n / (f_n * ln_ln_n)))
    if k1 is None:
        k1 = max(1, math.ceil(D1 * ln_n))
    if k2 is None:
        k2 = max(1, math.ceil(D2 * ln_n / L))
    mu = D_FEAS * math.sqrt(f_n * ln_ln_n)

    leaf_tau = 2.0 * math.sqrt(k2)
    if not overridden and alpha2 <= leaf_tau:
        min_c = 4.0 * leaf_tau
        raise InfeasibleError(
            f"c={config.c} is infeasible for n={config.n}: the leaf stage needs "
            f"alpha2 = c/4 > 2*sqrt(k2) = {leaf_tau:.4g}, i.e. c > {min_c:.4g}. "
            "Increase c or pass explicit k2/L/w overrides.",
            min_c=min_c,
        )
    if w is None:
        if alpha2 > leaf_tau:
            w = optimal_w(n, k2, alpha2, L)
        else:
            raise InfeasibleError(
                "overridden plan has alpha2 <= 2*sqrt(k2); the optimal-w formula "
                "is undefined there, pass an explicit w override",
                min_c=4.0 * leaf_tau,
            )

    return ReductionPlan(
        alpha1=alpha1,
        alpha2=alpha2,
        gamma=gamma,
        k1=int(k1),
        k2=int(k2),
        L=int(L),
        w=int(w),
        f_n=float(f_n),
        mu=mu,
        overridden=overridden,
    )


class NnwfnIndex:
    """The full no-false-negatives index over all block combinations."""

    def __init__(self, config, plan, seed):
        self.config = config
        self.plan = plan
        self.seed = seed
        self.families = []
        self.combos = {}  # tuple of block indices -> MaxL2Index
        self.points = np.zeros((0, config.d))  # rescaled (R = 1) inputs
        self._transforms = []  # per family: (num_blocks, n, k2) arrays

    @property
    def num_blocks(self):
        return self.families[0].num_blocks if self.families else 0

    def total_bucket_entries(self):
        return sum(ix.total_bucket_entries() for ix in self.combos.values())

    def _build(self, points, max_combos, expansion_budget):
        cfg, plan = self.config, self.plan
        pts = np.asarray(points, dtype=np.float64).reshape(-1, cfg.d)
        if not np.all(np.isfinite(pts)):
            raise ParameterError("input points must be finite")
        if len(pts) != cfg.n:
            raise DimensionError(f"got {len(pts)} points, config says n={cfg.n}")
        self.points = rescale(pts, cfg.R)

        k = plan.k2
        padded = max(k * -(-cfg.d // k), k)
        seq = np.random.SeedSequence(self.seed)
        family_seeds, combo_entropy = seq.spawn(2)
        fam_children = family_seeds.spawn(plan.L)
        self.families = []
        self._transforms = []
        padded_pts = pad_columns(self.points, cfg.d, padded)
        for j in range(plan.L):
            basis = random_orthonormal_basis(padded, np.random.default_rng(fam_children[j]))
            self.families.append(make_family(basis, k, family_index=j))
            self._transforms.append(self.families[j].transform_points(padded_pts))

        blocks = self.families[0].num_blocks
        n_combos = blocks**plan.L
        if n_combos > max_combos:
            raise BudgetError(
                f"{blocks}^{plan.L} = {n_combos} combinations exceed the combo "
                f"budget {max_combos}"
            )
        combo_seeds = combo_entropy.spawn(n_combos)
        self.combos = {}
        for flat, combo in enumerate(np.ndindex(*([blocks] * plan.L))):
            rng = np.random.default_rng(combo_seeds[flat])
            leaf = MaxL2Index(
                LshParams(k=k, L=plan.L, w=plan.w, c=plan.leaf_cap),
                rng,
                expansion_budget=expansion_budget,
            )
            parts = np.stack(
                [self._transforms[j][combo[j]] for j in range(plan.L)], axis=0
            )
            leaf.build(parts)
            self.combos[tuple(combo)] = leaf
        return self

    def _query_parts(self, q):
        qv = np.asarray(q, dtype=np.float64).ravel()
        if qv.shape != (self.config.d,):
            raise DimensionError(
                f"query has dimension {qv.shape}, expected ({self.config.d},)"
            )
        qn = pad_columns(
            rescale(qv, self.config.R)[None, :], self.config.d, self.families[0].in_dim
        )
        return [fam.transform_points(qn)[:, 0, :] for fam in self.families]

    def query(self, q, with_stats=False):
        """All stored points within c*R of q, guaranteed to include every
        point within R. Returns a QueryResult (plus a stats dict if asked)."""
        plan = self.plan
        stats = {"candidates": 0, "unique_candidates": 0, "filtered": 0}
        if not self.combos:
            empty = QueryResult(np.zeros(0, dtype=np.int64), np.zeros(0))
            return (empty, stats) if with_stats else empty
        tq = self._query_parts(q)  # per family: (num_blocks, k)
        qn = rescale(np.asarray(q, dtype=np.float64).ravel(), self.config.R)
        seen = np.zeros(len(self.points), dtype=bool)
        for combo, leaf in self.combos.items():
            qparts = np.stack([tq[j][combo[j]] for j in range(plan.L)])
            ids, _ = leaf.query(qparts, radius=1.0, cap=plan.leaf_cap)
            stats["candidates"] += len(ids)
            seen[ids] = True
        cand = np.flatnonzero(seen)
        stats["unique_candidates"] = len(cand)
        dists = np.linalg.norm(self.points[cand] - qn, axis=1)
        keep = dists <= self.config.c
        stats["filtered"] = int(len(cand) - keep.sum())
        result = QueryResult(
            ids=cand[keep].astype(np.int64), distances=dists[keep] * self.config.R
        )
        return (result, stats) if with_stats else result


def build_index(
    points,
    config,
    plan,
    seed,
    max_combos=DEFAULT_MAX_COMBOS,
    expansion_budget=DEFAULT_EXPANSION_BUDGET,
):
    """Build the full index from raw (input-unit) points."""
    index = NnwfnIndex(config, plan, seed)
    return index._build(points, max_combos, expansion_budget)


def build_single_stage(points, config, alpha, k, seed, w=None, **kwargs):
    """Single-family reduction: one family of d/k blocks, each block solved
    by a degenerate (L=1) max-l2 index with leaf approximation alpha."""
    if not 1.0 < alpha < config.c:
        raise ParameterError(f"need 1 < alpha={alpha} < c={config.c}")
    if k > config.d:
        raise ParameterError(f"block size k={k} must not exceed d={config.d}")
    if w is None:
        tau = 2.0 * math.sqrt(k)
        w = optimal_w(max(config.n, 2), k, alpha, 1) if alpha > tau else 1
    alpha1 = config.c / 2.0 if config.c / 2.0 > alpha else (alpha + config.c) / 2.0
    plan = ReductionPlan(
        alpha1=alpha1,
        alpha2=alpha,
        gamma=(2.0 * config.c / (config.c - alpha)) ** 2,
        k1=k,
        k2=k,
        L=1,
        w=int(w),
        f_n=2.0,
        mu=float("nan"),
        overridden=True,
    )
    return build_index(points, config, plan, seed, **kwargs)


def query(index, q):
    """Module-level convenience wrapper for NnwfnIndex.query."""
    return index.query(q)
