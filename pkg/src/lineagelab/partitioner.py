"""Split-guided partitioning of large components into weakly connected sets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .model import (
    AnnotatedTriple,
    CatalogCoverageError,
    DependencyGraph,
    PlanCoverageError,
    ProvGraph,
    SetDependency,
    SplitNode,
)
from .wcc import ComponentLabeling, compute_wcc

UNSPLIT = "unsplit"  # pseudo split id for small components kept whole


@dataclass(frozen=True)
class PartitionPlan:
    """Node-count threshold plus the split hierarchy covering all tables."""

    theta: int
    root_splits: tuple[SplitNode, ...]

    def validate(self, depgraph: DependencyGraph) -> list[str]:
        problems = []
        if self.theta < 1:
            problems.append(f"theta must be positive, got {self.theta}")
        union: set[str] = set()
        for sp in self.root_splits:
            if union & sp.tables:
                problems.append(f"split {sp.split_id} overlaps a sibling split")
            union |= sp.tables
            problems.extend(sp.validate(depgraph))
        if union != set(depgraph.tables):
            missing = sorted(set(depgraph.tables) - union)
            problems.append(f"plan does not cover tables: {missing}")
        return problems


@dataclass
class SetCatalog:
    """Global set assignment: which weakly connected set each item belongs to."""

    item_set: dict[int, int]
    set_sizes: dict[int, int]
    set_component: dict[int, int]
    set_split: dict[int, str]
    theta: int
    warnings: list[str] = field(default_factory=list)

    @property
    def set_count(self) -> int:
        return len(self.set_sizes)

    def partitioned_components(self) -> set[int]:
        """Components that were split into more than one set."""
        counts: dict[int, int] = {}
        for cid in self.set_component.values():
            counts[cid] = counts.get(cid, 0) + 1
        return {cid for cid, n in counts.items() if n > 1}

    def stats(self) -> dict:
        per_split: dict[str, dict] = {}
        for sid, split_id in self.set_split.items():
            entry = per_split.setdefault(
                split_id, {"sets": 0, "sets_ge_1000": 0, "largest_set": 0}
            )
            size = self.set_sizes[sid]
            entry["sets"] += 1
            if size >= 1000:
                entry["sets_ge_1000"] += 1
            entry["largest_set"] = max(entry["largest_set"], size)
        return {
            "theta": self.theta,
            "set_count": self.set_count,
            "largest_set": max(self.set_sizes.values(), default=0),
            "per_split": per_split,
            "warnings": list(self.warnings),
        }


def _partition_component(
    comp_items: set[int],
    comp_edges: Sequence[tuple[int, int]],
    item_table: Mapping[int, str],
    splits: Sequence[SplitNode],
    theta: int,
    warnings: list[str],
) -> list[tuple[frozenset[int], str]]:
    """Recursive split-guided partitioning of one component's item set.

    For each split, the weakly connected components of the induced subgraph
    become sets; an oversized one recurses into the split's children, or is
    kept with a warning when the split has none.
    """
    covered: set[str] = set()
    for sp in splits:
        covered |= sp.tables
    stray = [i for i in comp_items if item_table[i] not in covered]
    if stray:
        raise PlanCoverageError(
            f"items outside plan coverage, e.g. item {min(stray)} "
            f"in table {item_table[min(stray)]!r}"
        )

    out: list[tuple[frozenset[int], str]] = []
    for sp in splits:
        members = {i for i in comp_items if item_table[i] in sp.tables}
        if not members:
            continue
        induced = [(a, b) for a, b in comp_edges if a in members and b in members]
        labeling = compute_wcc(induced, extra_items=members)
        for items in labeling.members().values():
            group = set(items)
            if len(group) >= theta and sp.children:
                sub_edges = [(a, b) for a, b in induced if a in group]
                out.extend(
                    _partition_component(
                        group, sub_edges, item_table, sp.children, theta, warnings
                    )
                )
            else:
                if len(group) >= theta:
                    warnings.append(
                        f"split {sp.split_id}: kept oversized set "
                        f"({len(group)} nodes >= theta {theta}), no sub-splits"
                    )
                out.append((frozenset(group), sp.split_id))
    return out


def partition_large_component(
    g: ProvGraph,
    labeling: ComponentLabeling,
    component: int,
    splits: Sequence[SplitNode],
    theta: int,
) -> set[frozenset[int]]:
    """Partition one component into weakly connected item sets."""
    comp_items = {i for i, c in labeling.labels.items() if c == component}
    comp_edges = [
        (t.src, t.dst) for t in g.triples if labeling.labels.get(t.src) == component
    ]
    warnings: list[str] = []
    parts = _partition_component(
        comp_items, comp_edges, g.item_table, splits, theta, warnings
    )
    return {items for items, _ in parts}


def build_catalog(
    g: ProvGraph, labeling: ComponentLabeling, plan: PartitionPlan
) -> SetCatalog:
    """Assign every item to a weakly connected set.

    Components below theta stay whole (one set each); the rest go through
    split-guided partitioning. Set ids are assigned in (component id,
    minimum member id) order so output files are reproducible.
    """
    by_comp = labeling.members()
    edges_by_comp: dict[int, list[tuple[int, int]]] = {}
    for t in g.triples:
        cid = labeling.labels[t.src]
        edges_by_comp.setdefault(cid, []).append((t.src, t.dst))

    warnings: list[str] = []
    all_sets: list[tuple[int, frozenset[int], str]] = []  # (component, items, split)
    for cid in sorted(by_comp):
        members = by_comp[cid]
        if len(members) < plan.theta:
            all_sets.append((cid, frozenset(members), UNSPLIT))
            continue
        parts = _partition_component(
            set(members),
            edges_by_comp.get(cid, ()),
            g.item_table,
            plan.root_splits,
            plan.theta,
            warnings,
        )
        for items, split_id in sorted(parts, key=lambda p: min(p[0])):
            all_sets.append((cid, items, split_id))

    catalog = SetCatalog({}, {}, {}, {}, plan.theta, warnings)
    for sid, (cid, items, split_id) in enumerate(all_sets, start=1):
        catalog.set_sizes[sid] = len(items)
        catalog.set_component[sid] = cid
        catalog.set_split[sid] = split_id
        for item in items:
            catalog.item_set[item] = sid
    return catalog


def annotate(g: ProvGraph, catalog: SetCatalog) -> list[AnnotatedTriple]:
    """Attach src/dst set ids to every triple."""
    item_set = catalog.item_set
    out = []
    for t in g.triples:
        try:
            out.append(
                AnnotatedTriple(t.src, t.dst, t.op, item_set[t.src], item_set[t.dst])
            )
        except KeyError as exc:
            raise CatalogCoverageError(
                f"item {exc.args[0]} has no set assignment"
            ) from None
    return out


def extract_set_dependencies(
    annotated: Iterable[AnnotatedTriple],
) -> list[SetDependency]:
    """Distinct (src_csid, dst_csid) pairs over set-crossing triples."""
    pairs = {
        (a.src_csid, a.dst_csid) for a in annotated if a.src_csid != a.dst_csid
    }
    return [SetDependency(*p) for p in sorted(pairs)]


def suggest_bisection(depgraph: DependencyGraph, split: SplitNode) -> list[SplitNode]:
    """Propose sub-splits by bisecting a split along a BFS ordering of tables.

    The BFS-prefix half is weakly connected by construction; the remainder
    is emitted as one sub-split per connected group. A single-table split
    cannot be bisected and is returned unchanged.
    """
    tables = sorted(split.tables)
    if len(tables) < 2:
        return [split]
    adj = depgraph.undirected_adjacency()
    order: list[str] = []
    seen: set[str] = set()
    for start in tables:  # split is weakly connected, but be safe
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            t = queue.pop(0)
            order.append(t)
            for n in sorted(adj.get(t, ())):
                if n in split.tables and n not in seen:
                    seen.add(n)
                    queue.append(n)
    half = (len(order) + 1) // 2
    first = set(order[:half])
    rest = set(order[half:])

    subs = [SplitNode(f"{split.split_id}.a", frozenset(first))]
    # group the remainder into weakly connected pieces
    pending = set(rest)
    piece = 0
    while pending:
        start = min(pending)
        group = {start}
        queue = [start]
        while queue:
            t = queue.pop()
            for n in adj.get(t, ()):
                if n in pending and n not in group:
                    group.add(n)
                    queue.append(n)
        pending -= group
        piece += 1
        subs.append(SplitNode(f"{split.split_id}.b{piece}", frozenset(group)))
    return subs
