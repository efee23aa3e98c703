"""Preprocessing pipeline: components, catalog, annotation, artifacts on disk."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import io
from .engines import EngineInputs
from .model import (
    AnnotatedTriple,
    ConfigError,
    DependencyGraph,
    MissingArtifactError,
    ProvGraph,
    SetDependency,
    SplitNode,
)
from .partitioner import (
    PartitionPlan,
    SetCatalog,
    annotate,
    build_catalog,
    extract_set_dependencies,
)
from .wcc import ComponentLabeling, graph_labeling

TRIPLES = "triples.csv"
ITEMS = "items.csv"
WORKFLOW = "workflow.json"
ANNOTATED = "annotated.csv"
SETDEPS = "setdeps.csv"
ITEM_SETS = "item_sets.csv"
LABELING = "labeling.csv"
CATALOG_STATS = "catalog-stats.json"
STORES = "stores"


@dataclass
class Preprocessed:
    labeling: ComponentLabeling
    catalog: SetCatalog
    annotated: list[AnnotatedTriple]
    setdeps: list[SetDependency]


def preprocess(
    g: ProvGraph,
    depgraph: DependencyGraph,
    splits: Sequence[SplitNode],
    theta: int,
) -> Preprocessed:
    """Run components -> catalog -> annotation -> set-dependency extraction."""
    plan = PartitionPlan(theta, tuple(splits))
    problems = plan.validate(depgraph)
    if problems:
        raise ConfigError("; ".join(problems))
    labeling = graph_labeling(g)
    catalog = build_catalog(g, labeling, plan)
    annotated = annotate(g, catalog)
    setdeps = extract_set_dependencies(annotated)
    return Preprocessed(labeling, catalog, annotated, setdeps)


def write_artifacts(pre: Preprocessed, data_dir) -> None:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    io.write_annotated(data_dir / ANNOTATED, pre.annotated)
    io.write_set_dependencies(data_dir / SETDEPS, pre.setdeps)
    io.write_item_sets(data_dir / ITEM_SETS, pre.catalog.item_set, pre.catalog.set_component)
    io.write_labeling(data_dir / LABELING, pre.labeling.labels)
    with open(data_dir / CATALOG_STATS, "w") as fh:
        json.dump(pre.catalog.stats(), fh, indent=2)
        fh.write("\n")


def load_engine_inputs(
    data_dir, num_partitions: int, tier: str = "memory"
) -> EngineInputs:
    """Build strategy stores from preprocessed artifacts in data_dir."""
    data_dir = Path(data_dir)
    for name in (ANNOTATED, SETDEPS, ITEM_SETS):
        if not (data_dir / name).exists():
            raise MissingArtifactError(str(data_dir / name))
    annotated = io.read_annotated(data_dir / ANNOTATED)
    setdeps = io.read_set_dependencies(data_dir / SETDEPS)
    item_set, set_component = io.read_item_sets(data_dir / ITEM_SETS)
    store_dir = data_dir / STORES if tier == "disk" else None
    return EngineInputs.build(
        annotated, setdeps, item_set, set_component, num_partitions,
        tier=tier, store_dir=store_dir,
    )
