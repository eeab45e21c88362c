"""Command-line surface: build, query, verify, bench.

All commands are deterministic given (seed, inputs); only wall-time fields
vary between runs. Reports are JSON on stdout (or a file for bench).
"""

import json
import math
import sys
import time

import click
import numpy as np

from . import kernels
from .dataio import load_dataset
from .errors import NnwfnError
from .oracle import exact_radius_search, sandwich_check
from .reduction import ProblemConfig, build_index, plan_parameters
from .snapshot import load_index, save_index


def _plan_or_fail(config, f_n, k1, k2, L, w):
    try:
        return plan_parameters(config, f_n, k1=k1, k2=k2, L=L, w=w)
    except NnwfnError as exc:
        raise click.ClickException(str(exc)) from exc


def _load_queries(path, format, dim):
    ds = load_dataset(path, format=format)
    if ds.n and ds.dim != dim:
        raise click.ClickException(
            f"queries have dimension {ds.dim}, index expects {dim}"
        )
    return ds.points


def verify_index(index, trials, seed):
    """Run planted-query sandwich checks against the exact oracle.

    Each trial plants the query within R of a random stored point (so the
    oracle-R set is non-empty), then requires
    oracle(R) <= result <= oracle(cR). Returns a report dict; a healthy
    index yields zero false negatives and zero soundness violations.
    """
    rng = np.random.default_rng(seed)
    cfg = index.config
    points = index.points * cfg.R  # back to input units
    fn_total = 0
    sv_total = 0
    checked = 0
    for _ in range(trials):
        if cfg.n > 0:
            base = points[rng.integers(cfg.n)]
            direction = rng.standard_normal(cfg.d)
            direction /= max(np.linalg.norm(direction), 1e-300)
            q = base + direction * (rng.uniform(0.0, 1.0) * cfg.R)
        else:
            q = rng.standard_normal(cfg.d)
        result = index.query(q)
        report = sandwich_check(
            result,
            exact_radius_search(points, q, cfg.R),
            exact_radius_search(points, q, cfg.c * cfg.R),
            points=points,
            q=q,
        )
        fn_total += len(report.false_negatives)
        sv_total += len(report.soundness_violations)
        checked += 1
    return {
        "trials": checked,
        "false_negatives": fn_total,
        "soundness_violations": sv_total,
        "passed": fn_total == 0 and sv_total == 0,
        "warning": "zero trials: vacuous pass" if trials == 0 else None,
    }


def bench_queries(index, queries):
    """Per-query candidate/filter/latency records plus an aggregate that
    sets the measured false-positive rate beside the analytic bound."""
    cfg, plan = index.config, index.plan
    points = index.points * cfg.R
    records = []
    fn_total = 0
    for i, q in enumerate(queries):
        t0 = time.perf_counter()
        result, stats = index.query(q, with_stats=True)
        elapsed = time.perf_counter() - t0
        missing = exact_radius_search(points, q, cfg.R) - set(result.ids.tolist())
        fn_total += len(missing)
        records.append(
            {
                "query": i,
                "candidates": stats["candidates"],
                "unique_candidates": stats["unique_candidates"],
                "filtered_out": stats["filtered"],
                "result_size": int(len(result.ids)),
                "wall_time_s": elapsed,
            }
        )
    uniq = sum(r["unique_candidates"] for r in records)
    filt = sum(r["filtered_out"] for r in records)
    analytic = math.exp(-plan.k2 * ((cfg.c - plan.alpha2) / (2 * cfg.c)) ** 2)
    return {
        "queries": len(records),
        "per_query": records,
        "aggregate": {
            "total_candidates": sum(r["candidates"] for r in records),
            "total_unique_candidates": uniq,
            "total_filtered_out": filt,
            "total_results": sum(r["result_size"] for r in records),
            "empirical_fp_rate": (filt / uniq) if uniq else 0.0,
            "analytic_fp_bound": analytic,
            "bucket_entries": index.total_bucket_entries(),
            "false_negatives": fn_total,
        },
    }


@click.group()
def main():
    """c-approximate nearest neighbor search without false negatives."""


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.option("--c", "c", type=float, required=True, help="approximation factor (> 1)")
@click.option("--radius", "-R", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--f-n", type=float, default=None, help="planner growth value f(n)")
@click.option("--k1", type=int, default=None, help="override: first-stage dimension")
@click.option("--k2", type=int, default=None, help="override: leaf dimension")
@click.option("--L", "L", type=int, default=None, help="override: family count")
@click.option("--w", type=int, default=None, help="override: LSH repetitions")
@click.option("--budget", type=int, default=10**8, show_default=True,
              help="maximum 3^(w*L) insert-side expansions")
@click.option("--max-combos", type=int, default=100_000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["auto", "csv", "packed"]),
              default="auto", show_default=True)
@click.option("--out", type=click.Path(), required=True, help="snapshot output path")
def build(dataset_path, c, radius, seed, f_n, k1, k2, L, w, budget, max_combos,
          fmt, out):
    """Build an index over DATASET_PATH and write a snapshot."""
    dataset = load_dataset(dataset_path, format=fmt)
    dim = dataset.dim if dataset.n else 1
    config = ProblemConfig(n=dataset.n, d=dim, c=c, R=radius)
    plan = _plan_or_fail(config, f_n, k1, k2, L, w)
    t0 = time.perf_counter()
    try:
        index = build_index(dataset.points.reshape(dataset.n, dim), config, plan,
                            seed, max_combos=max_combos, expansion_budget=budget)
    except NnwfnError as exc:
        raise click.ClickException(str(exc)) from exc
    build_s = time.perf_counter() - t0
    save_index(index, out, dataset_path, fmt, dataset.fingerprint(),
               max_combos, budget)
    expansions = 3 ** (plan.w * plan.L)
    click.echo(json.dumps({
        "snapshot": out,
        "n": config.n,
        "d": config.d,
        "c": config.c,
        "R": config.R,
        "seed": seed,
        "plan": plan.to_dict(),
        "combos": len(index.combos),
        "expansions_per_point": expansions,
        "expansion_budget": budget,
        "budget_usage": expansions / budget,
        "bucket_entries": index.total_bucket_entries(),
        "kernel_backend": kernels.BACKEND,
        "build_time_s": build_s,
    }, indent=2))


@main.command()
@click.argument("snapshot_path", type=click.Path(exists=True))
@click.option("--vector", type=str, default=None,
              help="inline comma-separated query vector")
@click.option("--queries", "queries_path", type=click.Path(exists=True), default=None)
@click.option("--format", "fmt", type=click.Choice(["auto", "csv", "packed"]),
              default="auto", show_default=True)
@click.option("--data", "data_path", type=click.Path(exists=True), default=None,
              help="override the dataset path stored in the snapshot")
def query(snapshot_path, vector, queries_path, fmt, data_path):
    """Query a snapshot with one inline vector or a batch file."""
    if (vector is None) == (queries_path is None):
        raise click.ClickException("pass exactly one of --vector or --queries")
    try:
        index, snap, _ = load_index(snapshot_path, dataset_path=data_path)
    except NnwfnError as exc:
        raise click.ClickException(str(exc)) from exc
    if vector is not None:
        queries = np.array([[float(v) for v in vector.split(",")]])
    else:
        queries = _load_queries(queries_path, fmt, index.config.d)
    out = []
    for i, q in enumerate(queries):
        result = index.query(q)
        out.append({
            "query": i,
            "ids": result.ids.tolist(),
            "distances": result.distances.tolist(),
        })
    click.echo(json.dumps(out, indent=2))


@main.command()
@click.argument("snapshot_path", type=click.Path(exists=True))
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--data", "data_path", type=click.Path(exists=True), default=None)
def verify(snapshot_path, trials, seed, data_path):
    """Check the no-false-negative guarantee against the exact oracle."""
    try:
        index, _, _ = load_index(snapshot_path, dataset_path=data_path)
    except NnwfnError as exc:
        raise click.ClickException(str(exc)) from exc
    report = verify_index(index, trials, seed)
    click.echo(json.dumps(report, indent=2))
    if not report["passed"]:
        sys.exit(1)


@main.command()
@click.argument("snapshot_path", type=click.Path(exists=True))
@click.option("--queries", "queries_path", type=click.Path(exists=True), required=True)
@click.option("--format", "fmt", type=click.Choice(["auto", "csv", "packed"]),
              default="auto", show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="write the JSON report here instead of stdout")
@click.option("--data", "data_path", type=click.Path(exists=True), default=None)
def bench(snapshot_path, queries_path, fmt, out, data_path):
    """Measure per-query candidate counts, latencies and FP rates."""
    try:
        index, _, _ = load_index(snapshot_path, dataset_path=data_path)
    except NnwfnError as exc:
        raise click.ClickException(str(exc)) from exc
    queries = _load_queries(queries_path, fmt, index.config.d)
    report = bench_queries(index, queries)
    text = json.dumps(report, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        click.echo(f"report written to {out}")
    else:
        click.echo(text)


if __name__ == "__main__":
    main()
