"""Core data model: provenance triples, graphs, splits, and query results."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

TripleKey = tuple[int, int, str]


class ConfigError(ValueError):
    """Bad configuration (partition count, plan shape, spec file)."""


class PlanCoverageError(ValueError):
    """An item's table is not covered by any split of the partition plan."""


class CatalogCoverageError(ValueError):
    """A triple endpoint has no set assignment in the catalog."""


class UnknownItemError(LookupError):
    """Queried item is not present in the item universe."""


class MissingArtifactError(FileNotFoundError):
    """A required preprocessing artifact is absent."""


@dataclass(frozen=True)
class ProvTriple:
    """One lineage edge: data-item dst was derived from src by transformation op."""

    src: int
    dst: int
    op: str
    meta: str = ""

    def key(self) -> TripleKey:
        return (self.src, self.dst, self.op)


@dataclass(frozen=True)
class AnnotatedTriple:
    """A provenance triple carrying the set ids of both endpoints."""

    src: int
    dst: int
    op: str
    src_csid: int
    dst_csid: int

    def key(self) -> TripleKey:
        return (self.src, self.dst, self.op)


class SetDependency(NamedTuple):
    """Directed edge between weakly connected sets: src_csid derives dst_csid."""

    src_csid: int
    dst_csid: int


@dataclass(frozen=True)
class ProvGraph:
    """Provenance triples plus the item -> table assignment.

    The triples form a directed graph over data-item ids; validity (acyclic,
    no self-loops, no duplicates, total item_table) is checked by
    validate_graph, not assumed by construction.
    """

    triples: tuple[ProvTriple, ...]
    item_table: Mapping[int, str]

    @property
    def items(self) -> set[int]:
        out = set(self.item_table)
        for t in self.triples:
            out.add(t.src)
            out.add(t.dst)
        return out

    def parent_index(self) -> dict[int, list[ProvTriple]]:
        """Reverse adjacency: dst item -> triples deriving it."""
        idx: dict[int, list[ProvTriple]] = {}
        for t in self.triples:
            idx.setdefault(t.dst, []).append(t)
        return idx


@dataclass(frozen=True)
class DependencyGraph:
    """Workflow table DAG: which tables are generated from which."""

    tables: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def undirected_adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {t: set() for t in self.tables}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_weakly_connected(self, tables: Iterable[str]) -> bool:
        group = set(tables)
        if not group:
            return False
        adj = self.undirected_adjacency()
        seen = set()
        stack = [next(iter(sorted(group)))]
        while stack:
            t = stack.pop()
            if t in seen:
                continue
            seen.add(t)
            stack.extend(n for n in adj.get(t, ()) if n in group and n not in seen)
        return seen == group

    def validate(self) -> list[str]:
        problems = []
        for a, b in sorted(self.edges):
            if a not in self.tables or b not in self.tables:
                problems.append(f"edge ({a}, {b}) references an unknown table")
        if _has_cycle({t: [] for t in self.tables}, sorted(self.edges)):
            problems.append("dependency graph contains a cycle")
        return problems


@dataclass(frozen=True)
class SplitNode:
    """A weakly connected group of tables, optionally subdivided into sub-splits."""

    split_id: str
    tables: frozenset[str]
    children: tuple["SplitNode", ...] = ()

    def validate(self, depgraph: DependencyGraph) -> list[str]:
        problems = []
        if not self.tables:
            problems.append(f"split {self.split_id} has no tables")
        elif not depgraph.is_weakly_connected(self.tables):
            problems.append(f"split {self.split_id} is not weakly connected")
        if self.children:
            union: set[str] = set()
            for child in self.children:
                if union & child.tables:
                    problems.append(
                        f"split {self.split_id}: child table sets overlap"
                    )
                union |= child.tables
                problems.extend(child.validate(depgraph))
            if union != set(self.tables):
                problems.append(
                    f"split {self.split_id}: children do not cover its tables"
                )
        return problems


@dataclass(frozen=True)
class LineageResult:
    """Ancestor closure of one queried data-item.

    triples holds (src, dst, op) keys; order is a display rendering sorted by
    (distance from the root, src id).
    """

    root: int
    triples: frozenset[TripleKey]
    order: tuple[TripleKey, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LineageResult):
            return NotImplemented
        return self.root == other.root and self.triples == other.triples

    def __hash__(self) -> int:
        return hash((self.root, self.triples))

    def ancestors(self) -> set[int]:
        return {t[0] for t in self.triples}


@dataclass(frozen=True)
class QueryMetrics:
    """Scan-cost accounting for one lineage query."""

    rounds: int = 0
    partitions_scanned: int = 0
    rows_scanned: int = 0
    triples_recursed: int = 0
    sets_in_lineage: int = 0
    cycle_detected: bool = False

    def as_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "partitions_scanned": self.partitions_scanned,
            "rows_scanned": self.rows_scanned,
            "triples_recursed": self.triples_recursed,
            "sets_in_lineage": self.sets_in_lineage,
            "cycle_detected": self.cycle_detected,
        }


def _has_cycle(nodes: dict, edges: Iterable[tuple]) -> bool:
    adj: dict = {n: [] for n in nodes}
    indeg: dict = {n: 0 for n in nodes}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        indeg.setdefault(a, 0)
        indeg[b] = indeg.get(b, 0) + 1
    queue = [n for n, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        n = queue.pop()
        seen += 1
        for m in adj.get(n, ()):
            indeg[m] -= 1
            if indeg[m] == 0:
                queue.append(m)
    return seen != len(indeg)


def validate_graph(g: ProvGraph) -> list[str]:
    """Check a provenance graph; returns a list of violations (empty == valid).

    Violations are data, not exceptions: self-loops, duplicate (src, dst, op)
    triples, items missing from the item -> table map, and cycles.
    """
    problems: list[str] = []
    seen: set[TripleKey] = set()
    for t in g.triples:
        if t.src == t.dst:
            problems.append(f"self-loop on item {t.src} (op {t.op})")
        k = t.key()
        if k in seen:
            problems.append(f"duplicate triple {k}")
        seen.add(k)
        for item in (t.src, t.dst):
            if item not in g.item_table:
                problems.append(f"item {item} has no table assignment")
    nodes = {i: [] for i in g.items}
    if _has_cycle(nodes, ((t.src, t.dst) for t in g.triples if t.src != t.dst)):
        problems.append("provenance graph contains a cycle")
    return problems
