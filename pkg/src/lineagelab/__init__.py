"""Workflow-provenance lineage engine with scan-cost accounting."""

from .model import (
    AnnotatedTriple,
    DependencyGraph,
    LineageResult,
    ProvGraph,
    ProvTriple,
    QueryMetrics,
    SetDependency,
    SplitNode,
    validate_graph,
)
from .engines import (
    EngineInputs,
    ccprov_lineage,
    csprov_lineage,
    oracle_lineage,
    recursive_query,
    rq_lineage,
)
from .partitioner import (
    PartitionPlan,
    SetCatalog,
    annotate,
    build_catalog,
    extract_set_dependencies,
    partition_large_component,
)
from .pipeline import Preprocessed, load_engine_inputs, preprocess, write_artifacts
from .store import DiskStore, MemoryStore, splitmix64
from .wcc import ComponentLabeling, compute_wcc, graph_labeling, induced_wcc

__version__ = "0.1.0"

__all__ = [
    "AnnotatedTriple",
    "ComponentLabeling",
    "DependencyGraph",
    "DiskStore",
    "EngineInputs",
    "LineageResult",
    "MemoryStore",
    "PartitionPlan",
    "Preprocessed",
    "ProvGraph",
    "ProvTriple",
    "QueryMetrics",
    "SetCatalog",
    "SetDependency",
    "SplitNode",
    "annotate",
    "build_catalog",
    "ccprov_lineage",
    "compute_wcc",
    "csprov_lineage",
    "extract_set_dependencies",
    "graph_labeling",
    "induced_wcc",
    "load_engine_inputs",
    "oracle_lineage",
    "partition_large_component",
    "preprocess",
    "recursive_query",
    "rq_lineage",
    "splitmix64",
    "validate_graph",
    "write_artifacts",
]
