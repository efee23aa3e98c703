"""Lineage query strategies over partitioned stores.

Three strategies answer the same ancestor-closure query with different
scan footprints: frontier BFS over everything (rq), restriction to the
item's weakly connected component (ccprov), and restriction to the item's
set plus its set-lineage (csprov). An in-memory oracle provides the
ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .model import (
    AnnotatedTriple,
    LineageResult,
    ProvGraph,
    QueryMetrics,
    SetDependency,
    TripleKey,
    UnknownItemError,
    _has_cycle,
)
from .store import DiskStore, MemoryStore, PartitionedStore, ScanDelta

ANNOTATED_COLUMNS = ("src", "dst", "op", "src_csid", "dst_csid")
SETDEP_COLUMNS = ("src_csid", "dst_csid")
ITEM_SET_COLUMNS = ("item", "csid")


def _empty_result(q: int) -> LineageResult:
    return LineageResult(root=q, triples=frozenset(), order=())


def _result_has_cycle(triples: Iterable[TripleKey]) -> bool:
    triples = list(triples)
    nodes = {t[0] for t in triples} | {t[1] for t in triples}
    return _has_cycle({n: [] for n in nodes}, ((t[0], t[1]) for t in triples))


def recursive_query(
    store: PartitionedStore, q: int
) -> tuple[LineageResult, QueryMetrics]:
    """Frontier BFS over a dst-keyed store: repeatedly fetch parents.

    Each round is one multi-key lookup of the pending frontier; the visited
    set guarantees termination even on (invalid) cyclic data.
    """
    src_i = store.columns.index(store.columns[0])
    dst_i = store.key_index
    op_i = store.columns.index("op") if "op" in store.columns else None

    pending = {q}
    visited: set[int] = set()
    found: dict[TripleKey, None] = {}
    order: list[TripleKey] = []
    rounds = partitions = rows_scanned = 0
    while pending:
        rows, delta = store.multi_lookup(pending)
        rounds += 1
        partitions += delta.partitions
        rows_scanned += delta.rows
        visited |= pending
        frontier: set[int] = set()
        new_keys = []
        for r in rows:
            key = (r[src_i], r[dst_i], r[op_i] if op_i is not None else "")
            if key not in found:
                found[key] = None
                new_keys.append(key)
                frontier.add(r[src_i])
        order.extend(sorted(new_keys))
        pending = frontier - visited

    triples = frozenset(found)
    metrics = QueryMetrics(
        rounds=rounds,
        partitions_scanned=partitions,
        rows_scanned=rows_scanned,
        triples_recursed=store.total_rows,
        cycle_detected=bool(triples) and _result_has_cycle(triples),
    )
    return LineageResult(q, triples, tuple(order)), metrics


@dataclass
class EngineInputs:
    """Prebuilt stores shared by every strategy, all from one dataset version."""

    triples_by_dst: PartitionedStore
    triples_by_dst_csid: PartitionedStore
    setdeps_by_dst_csid: PartitionedStore
    item_set_by_item: PartitionedStore
    set_component: Mapping[int, int]
    num_partitions: int
    _component_stores: dict[int, MemoryStore] = field(default_factory=dict)
    _rows_by_component: dict[int, list] | None = None

    @classmethod
    def build(
        cls,
        annotated: Sequence[AnnotatedTriple],
        setdeps: Sequence[SetDependency],
        item_set: Mapping[int, int],
        set_component: Mapping[int, int],
        num_partitions: int,
        tier: str = "memory",
        store_dir=None,
    ) -> "EngineInputs":
        triple_rows = [(a.src, a.dst, a.op, a.src_csid, a.dst_csid) for a in annotated]
        dep_rows = [tuple(d) for d in setdeps]
        item_rows = sorted(item_set.items())
        if tier == "memory":
            t_dst = MemoryStore.build(triple_rows, ANNOTATED_COLUMNS, "dst", num_partitions)
            t_csid = MemoryStore.build(
                triple_rows, ANNOTATED_COLUMNS, "dst_csid", num_partitions
            )
            deps = MemoryStore.build(dep_rows, SETDEP_COLUMNS, "dst_csid", num_partitions)
            items = MemoryStore.build(item_rows, ITEM_SET_COLUMNS, "item", num_partitions)
        elif tier == "disk":
            if store_dir is None:
                raise ValueError("disk tier requires store_dir")
            t_types = ("int", "int", "str", "int", "int")
            t_dst = DiskStore.write(
                store_dir / "triples_by_dst", triple_rows, ANNOTATED_COLUMNS,
                "dst", num_partitions, t_types,
            )
            t_csid = DiskStore.write(
                store_dir / "triples_by_dst_csid", triple_rows, ANNOTATED_COLUMNS,
                "dst_csid", num_partitions, t_types,
            )
            deps = DiskStore.write(
                store_dir / "setdeps_by_dst_csid", dep_rows, SETDEP_COLUMNS,
                "dst_csid", num_partitions, ("int", "int"),
            )
            items = DiskStore.write(
                store_dir / "item_set_by_item", item_rows, ITEM_SET_COLUMNS,
                "item", num_partitions, ("int", "int"),
            )
        else:
            raise ValueError(f"unknown tier {tier!r}")
        return cls(t_dst, t_csid, deps, items, dict(set_component), num_partitions)

    def component_store(self, component: int) -> MemoryStore:
        """Derived dst-keyed store of one component's triples.

        Cached per component: repeat queries reuse the restricted store while
        each query still gets charged the full filter scan it models.
        """
        cached = self._component_stores.get(component)
        if cached is not None:
            return cached
        if self._rows_by_component is None:
            by_comp: dict[int, list] = {}
            set_component = self.set_component
            for row in self.triples_by_dst.iter_rows():
                by_comp.setdefault(set_component[row[4]], []).append(row)
            self._rows_by_component = by_comp
        rows = self._rows_by_component.get(component, [])
        store = MemoryStore.build(rows, ANNOTATED_COLUMNS, "dst", self.num_partitions)
        self._component_stores[component] = store
        return store


def find_connected_set(inputs: EngineInputs, q: int) -> tuple[int, ScanDelta]:
    """Set id of item q via one partition scan of the item -> set store."""
    rows, delta = inputs.item_set_by_item.lookup(q)
    if not rows:
        raise UnknownItemError(q)
    return rows[0][1], delta


def rq_lineage(
    inputs_or_store: "EngineInputs | PartitionedStore", q: int
) -> tuple[LineageResult, QueryMetrics]:
    """Plain recursive querying over the full dst-keyed triple store."""
    store = (
        inputs_or_store.triples_by_dst
        if isinstance(inputs_or_store, EngineInputs)
        else inputs_or_store
    )
    return recursive_query(store, q)


def ccprov_lineage(
    inputs: EngineInputs, q: int
) -> tuple[LineageResult, QueryMetrics]:
    """Restrict to q's component, then recursively query the restriction."""
    try:
        csid, d1 = find_connected_set(inputs, q)
    except UnknownItemError:
        return _empty_result(q), QueryMetrics(partitions_scanned=1)
    component = inputs.set_component[csid]
    derived = inputs.component_store(component)
    # the component filter is a full scan of the triple store
    full = ScanDelta(inputs.num_partitions, inputs.triples_by_dst.total_rows)
    result, m = recursive_query(derived, q)
    metrics = QueryMetrics(
        rounds=m.rounds,
        partitions_scanned=d1.partitions + full.partitions + m.partitions_scanned,
        rows_scanned=d1.rows + full.rows + m.rows_scanned,
        triples_recursed=derived.total_rows,
        cycle_detected=m.cycle_detected,
    )
    return result, metrics


def csprov_lineage(
    inputs: EngineInputs, q: int
) -> tuple[LineageResult, QueryMetrics]:
    """Restrict to q's set plus its set-lineage, then recursively query."""
    try:
        csid, d1 = find_connected_set(inputs, q)
    except UnknownItemError:
        return _empty_result(q), QueryMetrics(partitions_scanned=1)

    # set-lineage: recursive querying over the set-dependency store
    set_result, set_m = recursive_query(inputs.setdeps_by_dst_csid, csid)
    relevant = {csid} | {dep[0] for dep in set_result.triples}

    rows, d3 = inputs.triples_by_dst_csid.multi_lookup(relevant)
    derived = MemoryStore.build(rows, ANNOTATED_COLUMNS, "dst", inputs.num_partitions)
    result, m = recursive_query(derived, q)
    metrics = QueryMetrics(
        rounds=m.rounds,
        partitions_scanned=(
            d1.partitions + set_m.partitions_scanned + d3.partitions + m.partitions_scanned
        ),
        rows_scanned=d1.rows + set_m.rows_scanned + d3.rows + m.rows_scanned,
        triples_recursed=len(rows),
        sets_in_lineage=len(relevant),
        cycle_detected=m.cycle_detected,
    )
    return result, metrics


def oracle_lineage(
    source: "ProvGraph | Mapping[int, list]", q: int
) -> LineageResult:
    """Ground truth: plain BFS over a reverse adjacency index, no accounting."""
    index = source.parent_index() if isinstance(source, ProvGraph) else source
    pending = [q]
    visited: set[int] = set()
    found: set[TripleKey] = set()
    order: list[TripleKey] = []
    while pending:
        frontier = [i for i in pending if i not in visited]
        visited.update(frontier)
        nxt: set[int] = set()
        new_keys = []
        for item in frontier:
            for t in index.get(item, ()):
                key = t.key() if hasattr(t, "key") else (t[0], t[1], t[2])
                if key not in found:
                    found.add(key)
                    new_keys.append(key)
                    nxt.add(key[0])
        order.extend(sorted(new_keys))
        pending = sorted(nxt - visited)
    return LineageResult(q, frozenset(found), tuple(order))


STRATEGIES = {
    "rq": rq_lineage,
    "ccprov": ccprov_lineage,
    "csprov": csprov_lineage,
}
