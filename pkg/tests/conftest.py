"""Shared fixtures: the two small worked datasets used throughout the suite."""
from __future__ import annotations

import pytest

from lineagelab.model import DependencyGraph, ProvGraph, ProvTriple, SplitNode

# Representative curation example: Person1 -> Person2 -> AvgAge.
# 15 triples; items 10, 11, 12 are filtered out mid-workflow and appear in
# no triple, but keep their table mapping (they count as singletons).
PERSON_TRIPLES = [
    (1, 13, "R1"),
    (4, 16, "R1"),
    (7, 19, "R1"),
    (2, 14, "R1"),
    (5, 17, "R1"),
    (14, 22, "R2"),
    (17, 22, "R2"),
    (8, 20, "R1"),
    (20, 24, "R2"),
    (3, 15, "R1"),
    (6, 18, "R1"),
    (15, 23, "R2"),
    (18, 23, "R2"),
    (9, 21, "R1"),
    (21, 25, "R2"),
]

# ccid column of the same example, keyed by (src, dst); used as row payloads
# in store tests
PERSON_CCID = {
    (1, 13): 1, (4, 16): 2, (7, 19): 3, (2, 14): 4, (5, 17): 4,
    (14, 22): 4, (17, 22): 4, (8, 20): 5, (20, 24): 5, (3, 15): 6,
    (6, 18): 6, (15, 23): 6, (18, 23): 6, (9, 21): 7, (21, 25): 7,
}

LINEAGE_23 = frozenset(
    {(15, 23, "R2"), (18, 23, "R2"), (3, 15, "R1"), (6, 18, "R1")}
)


def person_item_table() -> dict[int, str]:
    table = {}
    for i in range(1, 13):
        table[i] = "person1"
    for i in range(13, 22):
        table[i] = "person2"
    for i in range(22, 26):
        table[i] = "avg_age"
    return table


@pytest.fixture
def person_graph() -> ProvGraph:
    triples = tuple(ProvTriple(s, d, op) for s, d, op in PERSON_TRIPLES)
    return ProvGraph(triples, person_item_table())


@pytest.fixture
def person_workflow() -> tuple[DependencyGraph, tuple[SplitNode, ...]]:
    depgraph = DependencyGraph(
        frozenset({"person1", "person2", "avg_age"}),
        frozenset({("person1", "person2"), ("person2", "avg_age")}),
    )
    splits = (
        SplitNode("all", frozenset({"person1", "person2", "avg_age"})),
    )
    return depgraph, splits


# Worked large-component example: one 12-item component split into four
# weakly connected sets {1,2,3}, {4,5,6}, {7,8,9}, {10,11,12}.
COMPONENT_TRIPLES = [
    (1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (4, 6),
    (5, 7), (7, 8), (7, 9), (6, 10), (10, 11), (10, 12),
]


def component_item_table() -> dict[int, str]:
    table = {}
    for i in (1, 2, 3):
        table[i] = "stage_a"
    for i in (4, 5, 6):
        table[i] = "stage_b"
    for i in (7, 8, 9):
        table[i] = "stage_c"
    for i in (10, 11, 12):
        table[i] = "stage_d"
    return table


@pytest.fixture
def component_graph() -> ProvGraph:
    triples = tuple(ProvTriple(s, d, "-") for s, d in COMPONENT_TRIPLES)
    return ProvGraph(triples, component_item_table())


@pytest.fixture
def component_workflow() -> tuple[DependencyGraph, tuple[SplitNode, ...]]:
    depgraph = DependencyGraph(
        frozenset({"stage_a", "stage_b", "stage_c", "stage_d"}),
        frozenset({
            ("stage_a", "stage_b"),
            ("stage_b", "stage_c"),
            ("stage_b", "stage_d"),
            ("stage_c", "stage_d"),
        }),
    )
    splits = (
        SplitNode("sp1", frozenset({"stage_a"})),
        SplitNode("sp2", frozenset({"stage_b"})),
        SplitNode(
            "sp3",
            frozenset({"stage_c", "stage_d"}),
            (
                SplitNode("sp4", frozenset({"stage_c"})),
                SplitNode("sp5", frozenset({"stage_d"})),
            ),
        ),
    )
    return depgraph, splits
