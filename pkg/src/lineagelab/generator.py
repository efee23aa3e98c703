"""Deterministic synthetic workflow-provenance generator.

Produces traces with the structural shape of a document-curation workflow:
a 25-table pipeline, a handful of deliberately large weakly connected
components plus many small ones, and a heavily skewed fan-in distribution.
Replication-based scaling makes exact k-fold copies.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence

from .model import ConfigError, DependencyGraph, ProvGraph, ProvTriple, SplitNode

MAX_ID = (1 << 64) - 1


@dataclass(frozen=True)
class FanInBand:
    """Uniform fan-in draw within [lo, hi], selected with probability prob."""

    lo: int
    hi: int
    prob: float


@dataclass(frozen=True)
class TableSpec:
    """One workflow table: average rows per document and parent-pool scope.

    scope "document" draws parents only from the same source document's
    items; scope "cluster" draws across every document in the item's
    cluster, which is what merges documents into large components.
    """

    name: str
    rows_per_doc: float
    scope: str = "document"


@dataclass(frozen=True)
class WorkflowSpec:
    """Everything needed to deterministically generate one trace."""

    depgraph: DependencyGraph
    tables: tuple[TableSpec, ...]
    bands: tuple[FanInBand, ...]
    seed: int
    n_docs: int
    large_clusters: int
    large_docs: int
    small_doc_scale: tuple[float, float] = (0.02, 0.3)

    def validate(self) -> list[str]:
        problems = []
        total = sum(b.prob for b in self.bands)
        if abs(total - 1.0) > 1e-9:
            problems.append(f"fan-in band probabilities sum to {total}, not 1")
        for b in self.bands:
            if b.lo < 1 or b.hi < b.lo:
                problems.append(f"bad fan-in band [{b.lo}, {b.hi}]")
        names = {t.name for t in self.tables}
        if names != set(self.depgraph.tables):
            problems.append("table specs do not match the dependency graph")
        problems.extend(self.depgraph.validate())
        if self.large_docs > self.n_docs:
            problems.append("large_docs exceeds n_docs")
        if self.large_clusters < 0:
            problems.append("large_clusters must be non-negative")
        return problems

    def to_json(self) -> dict:
        return {
            "tables": [
                {"name": t.name, "rows_per_doc": t.rows_per_doc, "scope": t.scope}
                for t in self.tables
            ],
            "edges": [list(e) for e in sorted(self.depgraph.edges)],
            "bands": [[b.lo, b.hi, b.prob] for b in self.bands],
            "seed": self.seed,
            "n_docs": self.n_docs,
            "large_clusters": self.large_clusters,
            "large_docs": self.large_docs,
            "small_doc_scale": list(self.small_doc_scale),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "WorkflowSpec":
        tables = tuple(
            TableSpec(t["name"], t["rows_per_doc"], t.get("scope", "document"))
            for t in doc["tables"]
        )
        depgraph = DependencyGraph(
            frozenset(t.name for t in tables),
            frozenset((a, b) for a, b in doc["edges"]),
        )
        return cls(
            depgraph=depgraph,
            tables=tables,
            bands=tuple(FanInBand(lo, hi, p) for lo, hi, p in doc["bands"]),
            seed=doc["seed"],
            n_docs=doc["n_docs"],
            large_clusters=doc["large_clusters"],
            large_docs=doc["large_docs"],
            small_doc_scale=tuple(doc.get("small_doc_scale", (0.02, 0.3))),
        )


def _topo_order(spec: WorkflowSpec) -> list[TableSpec]:
    indeg = {t.name: 0 for t in spec.tables}
    for _, b in spec.depgraph.edges:
        indeg[b] += 1
    by_name = {t.name: t for t in spec.tables}
    ready = sorted(n for n, d in indeg.items() if d == 0)
    order = []
    while ready:
        n = ready.pop(0)
        order.append(by_name[n])
        for a, b in sorted(spec.depgraph.edges):
            if a == n:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        ready.sort()
    if len(order) != len(spec.tables):
        raise ConfigError("dependency graph has a cycle")
    return order


def _draw_fanin(rng: random.Random, bands: Sequence[FanInBand]) -> int:
    r = rng.random()
    acc = 0.0
    for b in bands:
        acc += b.prob
        if r < acc:
            return rng.randint(b.lo, b.hi)
    return bands[-1].lo


def generate(spec: WorkflowSpec) -> ProvGraph:
    """Generate a provenance trace; byte-identical for a given seed.

    Each table draws from its own PRNG stream keyed by (seed, table index),
    so per-table generation order cannot leak across tables.
    """
    problems = spec.validate()
    if problems:
        raise ConfigError("; ".join(problems))

    # document layout: the first large_docs documents round-robin over the
    # large clusters at full size, the rest are small single-doc clusters
    doc_rng = random.Random(f"{spec.seed}/docs")
    doc_cluster: list[int] = []
    doc_factor: list[float] = []
    lo, hi = spec.small_doc_scale
    for d in range(spec.n_docs):
        if d < spec.large_docs and spec.large_clusters > 0:
            doc_cluster.append(d % spec.large_clusters)
            doc_factor.append(1.0)
        else:
            doc_cluster.append(spec.large_clusters + d)
            doc_factor.append(doc_rng.uniform(lo, hi))

    upstream: dict[str, list[str]] = {t.name: [] for t in spec.tables}
    for a, b in sorted(spec.depgraph.edges):
        upstream[b].append(a)

    order = _topo_order(spec)
    table_index = {t.name: i for i, t in enumerate(sorted(spec.tables, key=lambda t: t.name))}
    # per table: list of (item, cluster, doc)
    placed: dict[str, list[tuple[int, int, int]]] = {}
    triples: list[ProvTriple] = []
    item_table: dict[int, str] = {}
    next_id = 1

    for t in order:
        rng = random.Random(f"{spec.seed}/{table_index[t.name]}")
        rows: list[tuple[int, int, int]] = []
        parents_of = upstream[t.name]
        if parents_of:
            doc_pool: dict[tuple[int, int], list[int]] = {}
            cluster_pool: dict[int, list[int]] = {}
            for up in parents_of:
                for item, cluster, doc in placed[up]:
                    doc_pool.setdefault((cluster, doc), []).append(item)
                    cluster_pool.setdefault(cluster, []).append(item)
        op = f"mk_{t.name}"
        for d in range(spec.n_docs):
            n = int(round(t.rows_per_doc * doc_factor[d]))
            if t.rows_per_doc > 0 and not parents_of:
                n = max(n, 1)
            for _ in range(n):
                item = next_id
                next_id += 1
                item_table[item] = t.name
                rows.append((item, doc_cluster[d], d))
                if parents_of:
                    if t.scope == "cluster":
                        pool = cluster_pool.get(doc_cluster[d], ())
                    else:
                        pool = doc_pool.get((doc_cluster[d], d), ())
                    if pool:
                        f = min(_draw_fanin(rng, spec.bands), len(pool))
                        for p in rng.sample(pool, f):
                            triples.append(ProvTriple(p, item, op))
        placed[t.name] = rows

    if not triples:
        raise ConfigError("spec generated no triples (zero rows upstream?)")
    return ProvGraph(tuple(triples), item_table)


def replicate(g: ProvGraph, k: int) -> ProvGraph:
    """k disjoint isomorphic copies with ids offset per copy."""
    if k < 1:
        raise ConfigError(f"replication factor must be >= 1, got {k}")
    offset = max(g.items, default=0) + 1
    if offset * k > MAX_ID:
        raise ConfigError("replication would overflow 64-bit item ids")
    triples: list[ProvTriple] = []
    item_table: dict[int, str] = {}
    for copy in range(k):
        shift = copy * offset
        for t in g.triples:
            triples.append(ProvTriple(t.src + shift, t.dst + shift, t.op, t.meta))
        for item, table in g.item_table.items():
            item_table[item + shift] = table
    return ProvGraph(tuple(triples), item_table)


# ---------------------------------------------------------------------------
# default curation-pipeline shape: 25 tables, three top-level splits, the
# third split subdivided into two sub-splits


_SP1 = ("findocs", "doc_meta", "doc_text", "sections", "paragraphs", "sentences", "tokens")
_SP2 = (
    "entities", "mentions", "mention_ctx", "candidates", "cand_scores",
    "links", "resolved", "metrics_raw",
)
_SP4 = ("metrics_norm", "metrics_dedup", "facts", "fact_attrs")
_SP5 = ("kb_rows", "kb_attrs", "report_rows", "reports", "summaries", "final_kb")

_EDGES = (
    ("findocs", "doc_meta"),
    ("findocs", "doc_text"),
    ("doc_text", "sections"),
    ("sections", "paragraphs"),
    ("paragraphs", "sentences"),
    ("sentences", "tokens"),
    ("tokens", "entities"),
    ("entities", "mentions"),
    ("mentions", "mention_ctx"),
    ("mentions", "candidates"),
    ("candidates", "cand_scores"),
    ("cand_scores", "links"),
    ("links", "resolved"),
    ("resolved", "metrics_raw"),
    ("metrics_raw", "metrics_norm"),
    ("metrics_norm", "metrics_dedup"),
    ("metrics_dedup", "facts"),
    ("facts", "fact_attrs"),
    ("facts", "kb_rows"),
    ("kb_rows", "kb_attrs"),
    ("kb_rows", "report_rows"),
    ("report_rows", "reports"),
    ("reports", "summaries"),
    ("summaries", "final_kb"),
)

_ROWS_PER_DOC = {
    "findocs": 90,
    "doc_meta": 25,
    "doc_text": 80,
    "sections": 60,
    "paragraphs": 80,
    "sentences": 100,
    "tokens": 120,
    "entities": 80,
    "mentions": 70,
    "mention_ctx": 30,
    "candidates": 50,
    "cand_scores": 35,
    "links": 30,
    "resolved": 25,
    "metrics_raw": 25,
    "metrics_norm": 20,
    "metrics_dedup": 16,
    "facts": 16,
    "fact_attrs": 12,
    "kb_rows": 12,
    "kb_attrs": 8,
    "report_rows": 8,
    "reports": 6,
    "summaries": 4,
    "final_kb": 4,
}

DEFAULT_BANDS = (
    FanInBand(1, 1, 0.91),
    FanInBand(2, 9, 0.08),
    FanInBand(10, 100, 0.0094),
    FanInBand(101, 450, 0.0006),
)


def default_depgraph() -> DependencyGraph:
    tables = _SP1 + _SP2 + _SP4 + _SP5
    return DependencyGraph(frozenset(tables), frozenset(_EDGES))


def default_splits() -> tuple[SplitNode, ...]:
    sp3_tables = frozenset(_SP4) | frozenset(_SP5)
    return (
        SplitNode("sp1", frozenset(_SP1)),
        SplitNode("sp2", frozenset(_SP2)),
        SplitNode(
            "sp3",
            sp3_tables,
            (SplitNode("sp4", frozenset(_SP4)), SplitNode("sp5", frozenset(_SP5))),
        ),
    )


def default_spec(seed: int = 7, scale: float = 1.0) -> WorkflowSpec:
    """Default trace shape: ~1M triples at scale 1.0, three large components."""
    doc_scoped = set(_SP1)
    tables = tuple(
        TableSpec(
            name,
            rows,
            "document" if name in doc_scoped else "cluster",
        )
        for name, rows in _ROWS_PER_DOC.items()
    )
    n_docs = max(4, int(round(900 * scale)))
    return WorkflowSpec(
        depgraph=default_depgraph(),
        tables=tables,
        bands=DEFAULT_BANDS,
        seed=seed,
        n_docs=n_docs,
        large_clusters=3,
        large_docs=int(n_docs * 0.55),
    )


def write_spec(spec: WorkflowSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec.to_json(), fh, indent=2)
        fh.write("\n")


def read_spec(path) -> WorkflowSpec:
    with open(path) as fh:
        return WorkflowSpec.from_json(json.load(fh))
