"""Benchmark sweeps over query classes, with scan counts in place of seconds."""
from __future__ import annotations

import csv
import json
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .engines import EngineInputs, STRATEGIES, oracle_lineage
from .model import ProvGraph, QueryMetrics

STRATEGY_ORDER = ("rq", "ccprov", "csprov")


@dataclass(frozen=True)
class QueryClass:
    """A query population: component size regime plus an ancestor-count band."""

    name: str
    large_component: bool
    min_ancestors: int
    max_ancestors: int


def default_classes() -> tuple[QueryClass, ...]:
    return (
        QueryClass("SC-SL", False, 100, 200),
        QueryClass("LC-SL", True, 100, 200),
        QueryClass("LC-LL", True, 5000, 10000),
    )


def sample_query_items(
    g: ProvGraph,
    component_of: Mapping[int, int],
    partitioned_components: set[int],
    classes: Sequence[QueryClass],
    per_class: int = 10,
    seed: int = 0,
    probe_budget: int = 50000,
) -> dict[str, list[int]]:
    """Census lineage sizes with the oracle and bucket items into classes.

    Probes items in a seeded shuffle order until each class has per_class
    members or the probe budget runs out; classes left empty are reported
    as such (and later skipped).
    """
    index = g.parent_index()
    items = sorted(component_of)
    rng = random.Random(seed)
    rng.shuffle(items)
    chosen: dict[str, list[int]] = {c.name: [] for c in classes}
    needed = {c.name for c in classes}
    for item in items[:probe_budget]:
        if not needed:
            break
        in_large = component_of[item] in partitioned_components
        candidates = [
            c for c in classes
            if c.name in needed and c.large_component == in_large
        ]
        if not candidates:
            continue
        n_anc = len(oracle_lineage(index, item).ancestors())
        for c in candidates:
            if c.min_ancestors <= n_anc <= c.max_ancestors:
                chosen[c.name].append(item)
                if len(chosen[c.name]) >= per_class:
                    needed.discard(c.name)
                break
    return chosen


def _aggregate(values: list[int]) -> dict:
    return {
        "mean": statistics.fmean(values),
        "p50": statistics.median(values),
        "max": max(values),
    }


def run_bench(
    inputs: EngineInputs,
    samples: Mapping[str, Sequence[int]],
    jobs: int = 1,
) -> dict:
    """Run every strategy on every sampled item; aggregate scan metrics.

    Asserts the pruning order csprov <= ccprov <= rq on triples_recursed for
    every query; a violation raises AssertionError (the CLI maps this to the
    invariant-breach exit code).
    """
    report: dict = {"classes": {}, "strategies": list(STRATEGY_ORDER)}
    for cls_name, items in samples.items():
        if not items:
            report["classes"][cls_name] = {"skipped": True, "queries": 0}
            continue
        per_strategy: dict[str, list[QueryMetrics]] = {s: [] for s in STRATEGY_ORDER}
        results_by_item: dict[int, dict] = {}

        def run_one(q: int) -> tuple[int, dict, dict]:
            res = {}
            met = {}
            for s in STRATEGY_ORDER:
                r, m = STRATEGIES[s](inputs, q)
                res[s] = r
                met[s] = m
            return q, res, met

        t0 = time.perf_counter()
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(run_one, items))
        else:
            outcomes = [run_one(q) for q in items]
        elapsed = time.perf_counter() - t0

        for q, res, met in outcomes:
            first = res[STRATEGY_ORDER[0]]
            for s in STRATEGY_ORDER[1:]:
                assert res[s] == first, (
                    f"strategy mismatch for item {q}: {s} disagrees with rq"
                )
            assert (
                met["csprov"].triples_recursed
                <= met["ccprov"].triples_recursed
                <= met["rq"].triples_recursed
            ), f"pruning order violated for item {q}"
            for s in STRATEGY_ORDER:
                per_strategy[s].append(met[s])
            results_by_item[q] = {
                s: met[s].as_dict() for s in STRATEGY_ORDER
            }

        entry = {"skipped": False, "queries": len(items), "wall_clock_s": elapsed}
        for s in STRATEGY_ORDER:
            ms = per_strategy[s]
            entry[s] = {
                "rounds": _aggregate([m.rounds for m in ms]),
                "partitions_scanned": _aggregate([m.partitions_scanned for m in ms]),
                "rows_scanned": _aggregate([m.rows_scanned for m in ms]),
                "triples_recursed": _aggregate([m.triples_recursed for m in ms]),
                "sets_in_lineage": _aggregate([m.sets_in_lineage for m in ms]),
            }
        entry["per_query"] = results_by_item
        report["classes"][cls_name] = entry
    return report


def write_bench_csv(report: dict, path) -> None:
    """Delimited per-class, per-strategy summary of the sweep."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["class", "strategy", "queries", "mean_rounds",
             "mean_partitions_scanned", "mean_rows_scanned",
             "mean_triples_recursed", "max_triples_recursed"]
        )
        for cls_name, entry in report["classes"].items():
            if entry.get("skipped"):
                continue
            for s in STRATEGY_ORDER:
                agg = entry[s]
                w.writerow([
                    cls_name, s, entry["queries"],
                    f"{agg['rounds']['mean']:.2f}",
                    f"{agg['partitions_scanned']['mean']:.2f}",
                    f"{agg['rows_scanned']['mean']:.2f}",
                    f"{agg['triples_recursed']['mean']:.2f}",
                    agg["triples_recursed"]["max"],
                ])


def format_bench_text(report: dict) -> str:
    lines = []
    header = f"{'class':<8} {'strategy':<8} {'queries':>7} {'rows_scanned':>14} {'triples_recursed':>17} {'rounds':>7}"
    lines.append(header)
    lines.append("-" * len(header))
    for cls_name, entry in report["classes"].items():
        if entry.get("skipped"):
            lines.append(f"{cls_name:<8} (skipped: no items in this class)")
            continue
        for s in STRATEGY_ORDER:
            agg = entry[s]
            lines.append(
                f"{cls_name:<8} {s:<8} {entry['queries']:>7} "
                f"{agg['rows_scanned']['mean']:>14.1f} "
                f"{agg['triples_recursed']['mean']:>17.1f} "
                f"{agg['rounds']['mean']:>7.1f}"
            )
    return "\n".join(lines)


def write_bench_report(report: dict, out_dir, render_figures: bool = True) -> list[Path]:
    """Write bench.json + bench.csv (+ figures) into out_dir; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    json_path = out_dir / "bench.json"
    with open(json_path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    paths.append(json_path)
    csv_path = out_dir / "bench.csv"
    write_bench_csv(report, csv_path)
    paths.append(csv_path)
    if render_figures:
        from .figures import render_bench_figures

        paths.extend(render_bench_figures(report, out_dir))
    return paths
