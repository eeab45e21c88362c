"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with `pytest -s tests/test_acceptance.py` to see them).

The heavy criteria use the exact brute-force oracle as ground truth; the
statistical ones check empirical rates against their analytic bounds plus a
3-sigma sampling margin.
"""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from nnwfn.dataio import save_dataset
from nnwfn.linalg import random_orthonormal_bases
from nnwfn.maxl2 import LshParams, MaxL2Index, optimal_w
from nnwfn.oracle import exact_radius_search, sandwich_check
from nnwfn.reduction import ProblemConfig, build_index, plan_parameters

from conftest import planted_dataset

N, D, C, R = 2000, 64, 8.0, 1.0
OVERRIDES = dict(k2=16, L=2, w=1)


def report(num, ok, detail=""):
    line = f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line, flush=True)
    assert ok, line


def build_standard(points, seed):
    cfg = ProblemConfig(n=len(points), d=D, c=C, R=R)
    plan = plan_parameters(cfg, **OVERRIDES)
    return build_index(points, cfg, plan, seed=seed)


@pytest.fixture(scope="module")
def trial_results():
    """1000 planted-query trials over 10 independent datasets/builds."""
    rng = np.random.default_rng(424242)
    false_negatives = 0
    soundness_violations = 0
    trials = 0
    for ds in range(10):
        pts, queries, wanted = planted_dataset(
            rng, N, D, n_queries=100, per_query=2, r_low=0.1, r_high=1.0
        )
        index = build_standard(pts, seed=1000 + ds)
        for i, q in enumerate(queries):
            res = index.query(q)
            ids = set(res.ids.tolist())
            false_negatives += len(wanted[i] - ids)
            if ids:
                dists = np.linalg.norm(pts[sorted(ids)] - q, axis=1)
                soundness_violations += int((dists > C * R).sum())
            trials += 1
    return trials, false_negatives, soundness_violations


def test_criterion_01_zero_false_negatives(trial_results):
    trials, fn, _ = trial_results
    report(1, trials >= 1000 and fn == 0,
           f"(planted neighbors missed: {fn} over {trials} trials)")


def test_criterion_02_soundness(trial_results):
    trials, _, sv = trial_results
    report(2, sv == 0, f"(returned points beyond cR: {sv} over {trials} trials)")


def test_criterion_03_oracle_sandwich():
    rng = np.random.default_rng(99)
    pts, queries, _ = planted_dataset(rng, N, D, n_queries=200, per_query=2)
    index = build_standard(pts, seed=7)
    failures = 0
    for q in queries:
        rep = sandwich_check(
            index.query(q),
            exact_radius_search(pts, q, R),
            exact_radius_search(pts, q, C * R),
        )
        failures += 0 if rep.passed else 1
    report(3, failures == 0, f"(failed sandwich checks: {failures}/200)")


def test_criterion_04_parseval_and_contraction():
    d, k, pairs = 128, 16, 1000
    rng = np.random.default_rng(4)
    violations = 0
    for chunk in range(4):
        bases = random_orthonormal_bases(d, pairs // 4, seed=rng)
        xs = rng.standard_normal((pairs // 4, d))
        scale = math.sqrt(d / k)
        # (B, d/k blocks, k) norms of every block image
        imgs = scale * np.einsum("bij,bj->bi", bases, xs)
        block_sq = (imgs**2).reshape(-1, d // k, k).sum(axis=2)
        x_sq = (xs**2).sum(axis=1)
        parseval = np.abs((k / d) * block_sq.sum(axis=1) - x_sq)
        violations += int((parseval > 1e-9 * x_sq).sum())
        min_norm = np.sqrt(block_sq.min(axis=1))
        violations += int((min_norm > np.sqrt(x_sq) * (1 + 1e-9)).sum())
    report(4, violations == 0, f"(violations: {violations}/1000 pairs)")


def test_criterion_05_hash_lipschitz():
    trials, k = 10**5, 8
    rng = np.random.default_rng(5)
    w = rng.standard_normal((trials, k))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    x = rng.standard_normal((trials, k)) * 10
    delta = rng.standard_normal((trials, k))
    delta /= np.linalg.norm(delta, axis=1, keepdims=True)
    delta *= rng.uniform(0.0, 1.0, (trials, 1)) * 0.999999
    y = x + delta
    hx = np.floor(np.einsum("ij,ij->i", w, x))
    hy = np.floor(np.einsum("ij,ij->i", w, y))
    violations = int((np.abs(hx - hy) > 1).sum())
    report(5, violations == 0, f"(violations: {violations}/{trials})")


def test_criterion_06_single_mapping_fp_bound():
    # k=64, c=4, alpha=2, x of norm exactly c, 1e5 fresh Haar bases (d=128)
    d, k, c, alpha, trials = 128, 64, 4.0, 2.0, 10**5
    rng = np.random.default_rng(6)
    x = np.zeros(d)
    x[0] = c
    hits = 0
    chunk = 500
    scale = math.sqrt(d / k)
    for _ in range(trials // chunk):
        bases = random_orthonormal_bases(d, chunk, seed=rng)
        norms = np.linalg.norm(scale * bases[:, :k, :] @ x, axis=1)
        hits += int((norms <= alpha).sum())
    p_hat = hits / trials
    bound = math.exp(-k * ((c - alpha) / (2 * c)) ** 2)  # e^{-4}
    margin = 3 * math.sqrt(max(p_hat * (1 - p_hat), 0.0) / trials)
    ok = p_hat <= bound + margin
    report(6, ok, f"(p_hat={p_hat:.2e} <= e^-4={bound:.4f} + {margin:.1e})")


def test_criterion_07_collision_bound():
    # part pairs at distance 2c with c = 4*sqrt(k), k=16: tau/(2c) + 3 sigma
    k, trials = 16, 10**5
    c = 4 * math.sqrt(k)
    dist = 2 * c
    tau = 2 * math.sqrt(k)
    rng = np.random.default_rng(7)
    w = rng.standard_normal((trials, k))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    x = rng.standard_normal((trials, k)) * 3
    u = rng.standard_normal((trials, k))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    y = x + dist * u
    hx = np.floor(np.einsum("ij,ij->i", w, x))
    hy = np.floor(np.einsum("ij,ij->i", w, y))
    p_hat = float((np.abs(hx - hy) <= 1).mean())
    sigma = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / trials)
    ok = p_hat <= tau / dist + 3 * sigma
    report(7, ok, f"(p_hat={p_hat:.4f} <= {tau / dist:.4f} + {3 * sigma:.1e})")


def test_criterion_08_bucket_expansion_exact():
    n, k, w, L = 137, 4, 2, 2
    rng = np.random.default_rng(8)
    params = LshParams(k=k, L=L, w=w, c=100.0)
    index = MaxL2Index(params, np.random.default_rng(80))
    index.build(rng.standard_normal((L, n, k)) * 5)
    entries = index.total_bucket_entries()
    report(8, entries == 81 * n, f"(entries={entries}, expected {81 * n})")


def test_criterion_09_process_level_determinism(tmp_path):
    rng = np.random.default_rng(9)
    pts = rng.standard_normal((300, 16)) * 2
    data = str(tmp_path / "data.csv")
    save_dataset(pts, data, format="csv")
    qpath = str(tmp_path / "q.csv")
    save_dataset(np.vstack([pts[3], pts[200] + 0.3]), qpath, format="csv")

    outputs = []
    snaps = []
    for run in (1, 2):
        snap = str(tmp_path / f"i{run}.snap")
        subprocess.run(
            [sys.executable, "-m", "nnwfn", "build", data, "--c", "8",
             "--seed", "5", "--k2", "8", "--L", "2", "--w", "1", "--out", snap],
            check=True, capture_output=True,
        )
        snaps.append(open(snap, "rb").read())
        q = subprocess.run(
            [sys.executable, "-m", "nnwfn", "query", snap, "--queries", qpath],
            check=True, capture_output=True, text=True,
        )
        outputs.append([sorted(r["ids"]) for r in json.loads(q.stdout)])
    ok = snaps[0] == snaps[1] and outputs[0] == outputs[1]
    report(9, ok, "(bit-identical snapshots, identical query id-sets)")


def test_criterion_10_planner_arithmetic():
    cfg = ProblemConfig(n=10**6, d=4096, c=2000.0)
    plan = plan_parameters(cfg, 2.0)
    checks = [
        plan.gamma == 16.0,
        plan.L == 3,
        optimal_w(1000, 4, 4 * math.e, 1) == 6,
        optimal_w(1000, 4, 4 * math.e, 2) == 3,
    ]
    report(10, all(checks), f"(gamma={plan.gamma}, L={plan.L}, w examples ok)")
