"""Readers/writers for the on-disk dataset and artifact formats.

All CSV files are UTF-8, LF-terminated, with a header row.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .model import (
    AnnotatedTriple,
    ConfigError,
    DependencyGraph,
    LineageResult,
    ProvGraph,
    ProvTriple,
    QueryMetrics,
    SetDependency,
    SplitNode,
)


def _open_read(path):
    return open(path, newline="", encoding="utf-8")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _open_write(path):
    return open(path, "w", newline="", encoding="utf-8")


def read_triples(path) -> list[ProvTriple]:
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["src", "dst", "op"]:
            raise ConfigError(f"{path}: expected header src,dst,op,meta")
        return [
            ProvTriple(int(r[0]), int(r[1]), r[2], r[3] if len(r) > 3 else "")
            for r in reader
        ]


def write_triples(path, triples: Iterable[ProvTriple]) -> None:
    with _open_write(path) as fh:
        w = _writer(fh)
        w.writerow(["src", "dst", "op", "meta"])
        for t in triples:
            w.writerow([t.src, t.dst, t.op, t.meta])


def read_item_table(path) -> dict[int, str]:
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["item", "table"]:
            raise ConfigError(f"{path}: expected header item,table")
        return {int(r[0]): r[1] for r in reader}


def write_item_table(path, item_table: Mapping[int, str]) -> None:
    with _open_write(path) as fh:
        w = _writer(fh)
        w.writerow(["item", "table"])
        for item in sorted(item_table):
            w.writerow([item, item_table[item]])


def read_graph(triples_path, items_path) -> ProvGraph:
    return ProvGraph(tuple(read_triples(triples_path)), read_item_table(items_path))


def read_annotated(path) -> list[AnnotatedTriple]:
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["src", "dst", "op", "src_csid", "dst_csid"]:
            raise ConfigError(f"{path}: expected header src,dst,op,src_csid,dst_csid")
        return [
            AnnotatedTriple(int(r[0]), int(r[1]), r[2], int(r[3]), int(r[4]))
            for r in reader
        ]


def write_annotated(path, annotated: Iterable[AnnotatedTriple]) -> None:
    with _open_write(path) as fh:
        w = _writer(fh)
        w.writerow(["src", "dst", "op", "src_csid", "dst_csid"])
        for a in annotated:
            w.writerow([a.src, a.dst, a.op, a.src_csid, a.dst_csid])


def read_set_dependencies(path) -> list[SetDependency]:
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["src_csid", "dst_csid"]:
            raise ConfigError(f"{path}: expected header src_csid,dst_csid")
        return [SetDependency(int(r[0]), int(r[1])) for r in reader]


def write_set_dependencies(path, deps: Iterable[SetDependency]) -> None:
    with _open_write(path) as fh:
        w = _writer(fh)
        w.writerow(["src_csid", "dst_csid"])
        for d in deps:
            w.writerow([d.src_csid, d.dst_csid])


def write_labeling(path, labels: Mapping[int, int]) -> None:
    with _open_write(path) as fh:
        w = _writer(fh)
        w.writerow(["item", "ccid"])
        for item in sorted(labels):
            w.writerow([item, labels[item]])


def read_labeling(path) -> dict[int, int]:
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["item", "ccid"]:
            raise ConfigError(f"{path}: expected header item,ccid")
        return {int(r[0]): int(r[1]) for r in reader}


def write_item_sets(path, item_set: Mapping[int, int], set_component: Mapping[int, int]) -> None:
    """Catalog export: which set (and hence component) each item belongs to."""
    with _open_write(path) as fh:
        w = _writer(fh)
        w.writerow(["item", "csid", "ccid"])
        for item in sorted(item_set):
            sid = item_set[item]
            w.writerow([item, sid, set_component[sid]])


def read_item_sets(path) -> tuple[dict[int, int], dict[int, int]]:
    """Returns (item -> set id, set id -> component id)."""
    item_set: dict[int, int] = {}
    set_component: dict[int, int] = {}
    with _open_read(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["item", "csid", "ccid"]:
            raise ConfigError(f"{path}: expected header item,csid,ccid")
        for r in reader:
            item, sid, cid = int(r[0]), int(r[1]), int(r[2])
            item_set[item] = sid
            set_component[sid] = cid
    return item_set, set_component


def _split_to_json(sp: SplitNode) -> dict:
    return {
        "id": sp.split_id,
        "tables": sorted(sp.tables),
        "children": [_split_to_json(c) for c in sp.children],
    }


def _split_from_json(doc: dict) -> SplitNode:
    return SplitNode(
        doc["id"],
        frozenset(doc["tables"]),
        tuple(_split_from_json(c) for c in doc.get("children", ())),
    )


def write_workflow_config(path, depgraph: DependencyGraph, splits: Sequence[SplitNode]) -> None:
    doc = {
        "tables": sorted(depgraph.tables),
        "edges": [list(e) for e in sorted(depgraph.edges)],
        "splits": [_split_to_json(sp) for sp in splits],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_workflow_config(path) -> tuple[DependencyGraph, tuple[SplitNode, ...]]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    depgraph = DependencyGraph(
        frozenset(doc["tables"]), frozenset((a, b) for a, b in doc["edges"])
    )
    return depgraph, tuple(_split_from_json(s) for s in doc["splits"])


def result_to_json(
    result: LineageResult, metrics: QueryMetrics, strategy: str
) -> dict:
    return {
        "root": result.root,
        "strategy": strategy,
        "triples": [
            {"src": src, "dst": dst, "op": op} for src, dst, op in result.order
        ],
        "metrics": metrics.as_dict(),
    }
