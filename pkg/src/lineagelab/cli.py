"""Operator CLI: generate, validate, preprocess, query, bench."""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import generator, io, pipeline
from .engines import STRATEGIES
from .model import ConfigError, MissingArtifactError
from .wcc import graph_labeling

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_MISSING_ARTIFACT = 3
EXIT_INVARIANT = 4

_data_dir_option = click.option(
    "--data-dir",
    envvar="LINEAGELAB_DATA_DIR",
    type=click.Path(path_type=Path),
    default=Path("."),
    show_default=True,
    help="Dataset/artifact root (env: LINEAGELAB_DATA_DIR).",
)


@click.group()
def main() -> None:
    """Workflow-provenance lineage engine with scan-cost accounting."""


@main.command()
@_data_dir_option
@click.option("--spec", "spec_path", type=click.Path(path_type=Path), help="Generator spec JSON; omit for the default curation-pipeline shape.")
@click.option("--scale", default=1.0, show_default=True, help="Size multiplier for the default spec.")
@click.option("--seed", default=7, show_default=True)
@click.option("--replicate", "replicate_k", default=1, show_default=True, help="Make k disjoint isomorphic copies.")
def generate(data_dir: Path, spec_path, scale, seed, replicate_k) -> None:
    """Generate a synthetic provenance trace into DATA_DIR."""
    try:
        if spec_path:
            spec = generator.read_spec(spec_path)
        else:
            spec = generator.default_spec(seed=seed, scale=scale)
        g = generator.generate(spec)
        if replicate_k > 1:
            g = generator.replicate(g, replicate_k)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    data_dir.mkdir(parents=True, exist_ok=True)
    io.write_triples(data_dir / pipeline.TRIPLES, g.triples)
    io.write_item_table(data_dir / pipeline.ITEMS, g.item_table)
    generator.write_spec(spec, data_dir / "gen-spec.json")
    if not spec_path:
        io.write_workflow_config(
            data_dir / pipeline.WORKFLOW,
            generator.default_depgraph(),
            generator.default_splits(),
        )
    click.echo(
        f"wrote {len(g.triples)} triples, {len(g.item_table)} items to {data_dir}"
    )


@main.command()
@_data_dir_option
def validate(data_dir: Path) -> None:
    """Validate the triples/items dataset in DATA_DIR."""
    g = _load_graph(data_dir)
    from .model import validate_graph

    problems = validate_graph(g)
    if problems:
        for p in problems:
            click.echo(p, err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(f"ok: {len(g.triples)} triples, {len(g.item_table)} items")


@main.command()
@_data_dir_option
@click.option("--theta", default=25000, show_default=True, help="Component partitioning threshold (nodes).")
@click.option("--figures/--no-figures", default=True, show_default=True)
def preprocess(data_dir: Path, theta: int, figures: bool) -> None:
    """Compute components, sets, annotated triples and set dependencies."""
    g = _load_graph(data_dir)
    from .model import validate_graph

    problems = validate_graph(g)
    if problems:
        for p in problems:
            click.echo(p, err=True)
        sys.exit(EXIT_VALIDATION)
    workflow = data_dir / pipeline.WORKFLOW
    if not workflow.exists():
        click.echo(f"missing artifact: {workflow}", err=True)
        sys.exit(EXIT_MISSING_ARTIFACT)
    depgraph, splits = io.read_workflow_config(workflow)
    try:
        pre = pipeline.preprocess(g, depgraph, splits, theta)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    pipeline.write_artifacts(pre, data_dir)
    stats = pre.catalog.stats()
    if figures:
        from .figures import render_catalog_figure

        render_catalog_figure(stats, data_dir / "catalog-stats.png")
    click.echo(json.dumps(
        {
            "components": pre.labeling.component_count,
            "sets": pre.catalog.set_count,
            "set_dependencies": len(pre.setdeps),
            "largest_set": stats["largest_set"],
            "warnings": len(stats["warnings"]),
        },
        indent=2,
    ))


@main.command()
@_data_dir_option
@click.argument("item", type=int)
@click.option("--strategy", type=click.Choice(["rq", "ccprov", "csprov", "all"]), default="all", show_default=True)
@click.option("--partitions", default=96, show_default=True)
@click.option("--tier", type=click.Choice(["memory", "disk"]), default="memory", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
def query(data_dir: Path, item: int, strategy: str, partitions: int, tier: str, fmt: str) -> None:
    """Answer the ancestor-lineage query for ITEM."""
    if strategy == "rq":
        # rq needs only the raw triples
        triples_path = data_dir / pipeline.TRIPLES
        if not triples_path.exists():
            click.echo(f"missing artifact: {triples_path}", err=True)
            sys.exit(EXIT_MISSING_ARTIFACT)
        from .engines import recursive_query
        from .store import MemoryStore

        rows = [(t.src, t.dst, t.op, t.meta) for t in io.read_triples(triples_path)]
        store = MemoryStore.build(rows, ("src", "dst", "op", "meta"), "dst", partitions)
        result, metrics = recursive_query(store, item)
        _emit_result(result, metrics, "rq", fmt)
        return

    try:
        inputs = pipeline.load_engine_inputs(data_dir, partitions, tier)
    except MissingArtifactError as exc:
        click.echo(f"missing artifact: {exc}", err=True)
        sys.exit(EXIT_MISSING_ARTIFACT)

    if strategy == "all":
        results = {}
        metrics = {}
        for s in ("rq", "ccprov", "csprov"):
            results[s], metrics[s] = STRATEGIES[s](inputs, item)
        if not (results["rq"] == results["ccprov"] == results["csprov"]):
            click.echo(f"invariant breach: strategies disagree for item {item}", err=True)
            sys.exit(EXIT_INVARIANT)
        doc = io.result_to_json(results["rq"], metrics["rq"], "all")
        doc["metrics"] = {s: m.as_dict() for s, m in metrics.items()}
        if not results["rq"].triples:
            click.echo(f"warning: empty lineage for item {item}", err=True)
        if fmt == "json":
            click.echo(json.dumps(doc, indent=2))
        else:
            _emit_text(results["rq"], metrics["rq"], "all")
        return

    result, m = STRATEGIES[strategy](inputs, item)
    _emit_result(result, m, strategy, fmt)


def _emit_result(result, metrics, strategy, fmt) -> None:
    if not result.triples:
        click.echo(f"warning: empty lineage for item {result.root}", err=True)
    if fmt == "json":
        click.echo(json.dumps(io.result_to_json(result, metrics, strategy), indent=2))
    else:
        _emit_text(result, metrics, strategy)


def _emit_text(result, metrics, strategy) -> None:
    click.echo(f"lineage of {result.root} via {strategy}: {len(result.triples)} triples")
    for src, dst, op in result.order:
        click.echo(f"  {dst} <- {src}  [{op}]")
    click.echo(f"metrics: {metrics.as_dict()}")


@main.command("bench")
@_data_dir_option
@click.option("--partitions", default=96, show_default=True)
@click.option("--theta", default=25000, show_default=True, help="Large-component cut used for class assignment.")
@click.option("--tier", type=click.Choice(["memory", "disk"]), default="memory", show_default=True)
@click.option("--per-class", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None, help="Report directory [default: DATA_DIR/bench].")
@click.option("--figures/--no-figures", default=True, show_default=True)
def bench_cmd(data_dir: Path, partitions, theta, tier, per_class, seed, jobs, fmt, out_dir, figures) -> None:
    """Sweep the three query classes and report scan metrics per strategy."""
    g = _load_graph(data_dir)
    try:
        inputs = pipeline.load_engine_inputs(data_dir, partitions, tier)
    except MissingArtifactError as exc:
        click.echo(f"missing artifact: {exc}", err=True)
        sys.exit(EXIT_MISSING_ARTIFACT)

    labeling = graph_labeling(g)
    partitioned = {
        cid for cid, size in labeling.component_sizes.items() if size >= theta
    }
    samples = bench_mod.sample_query_items(
        g, labeling.labels, partitioned, bench_mod.default_classes(),
        per_class=per_class, seed=seed,
    )
    try:
        report = bench_mod.run_bench(inputs, samples, jobs=jobs)
    except AssertionError as exc:
        click.echo(f"invariant breach: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)
    out_dir = out_dir or (data_dir / "bench")
    paths = bench_mod.write_bench_report(report, out_dir, render_figures=figures)
    if fmt == "json":
        click.echo(json.dumps(report, indent=2))
    else:
        click.echo(bench_mod.format_bench_text(report))
    click.echo(f"report: {', '.join(str(p) for p in paths)}", err=True)


def _load_graph(data_dir: Path):
    triples = data_dir / pipeline.TRIPLES
    items = data_dir / pipeline.ITEMS
    for p in (triples, items):
        if not p.exists():
            click.echo(f"missing artifact: {p}", err=True)
            sys.exit(EXIT_MISSING_ARTIFACT)
    return io.read_graph(triples, items)


if __name__ == "__main__":
    main()
