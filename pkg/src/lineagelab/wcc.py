"""Weakly connected components with deterministic minimum-id labeling."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .model import ProvGraph


class UnionFind:
    """Disjoint sets over arbitrary integer ids; path halving + union by size."""

    def __init__(self) -> None:
        self.parent: dict[int, int] = {}
        self.size: dict[int, int] = {}

    def add(self, x: int) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class ComponentLabeling:
    """item -> component id, where a component id is its minimum member id."""

    labels: Mapping[int, int]
    component_sizes: Mapping[int, int]

    def members(self) -> dict[int, list[int]]:
        by_comp: dict[int, list[int]] = {}
        for item, cid in self.labels.items():
            by_comp.setdefault(cid, []).append(item)
        return by_comp

    @property
    def component_count(self) -> int:
        return len(self.component_sizes)


def compute_wcc(
    edges: Iterable[tuple[int, int]], extra_items: Iterable[int] = ()
) -> ComponentLabeling:
    """Label weakly connected components of an edge multiset.

    Items in extra_items that touch no edge become singleton components;
    this is how items filtered out mid-workflow still count as components.
    """
    uf = UnionFind()
    for a, b in edges:
        uf.add(a)
        uf.add(b)
        uf.union(a, b)
    for item in extra_items:
        uf.add(item)

    # canonical label = minimum member id, independent of union order
    root_min: dict[int, int] = {}
    for item in uf.parent:
        r = uf.find(item)
        cur = root_min.get(r)
        if cur is None or item < cur:
            root_min[r] = item
    labels = {item: root_min[uf.find(item)] for item in uf.parent}
    sizes: dict[int, int] = {}
    for cid in labels.values():
        sizes[cid] = sizes.get(cid, 0) + 1
    return ComponentLabeling(labels, sizes)


def induced_wcc(g: ProvGraph, items: Iterable[int]) -> ComponentLabeling:
    """Components of the subgraph induced by items.

    Edges are exactly g's triples with both endpoints inside items; items
    with no incident induced edge form singletons.
    """
    keep = set(items)
    edges = ((t.src, t.dst) for t in g.triples if t.src in keep and t.dst in keep)
    return compute_wcc(edges, extra_items=keep)


def graph_labeling(g: ProvGraph) -> ComponentLabeling:
    """Full-graph labeling, counting mapped-but-unreferenced items as singletons."""
    return compute_wcc(
        ((t.src, t.dst) for t in g.triples), extra_items=g.item_table.keys()
    )
