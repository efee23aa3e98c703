import random

import pytest

from lineagelab.engines import (
    EngineInputs,
    ccprov_lineage,
    csprov_lineage,
    find_connected_set,
    oracle_lineage,
    recursive_query,
    rq_lineage,
)
from lineagelab.model import ProvGraph, ProvTriple, SplitNode, UnknownItemError
from lineagelab.partitioner import (
    PartitionPlan,
    annotate,
    build_catalog,
    extract_set_dependencies,
)
from lineagelab.store import MemoryStore
from lineagelab.wcc import graph_labeling

from conftest import LINEAGE_23


def make_inputs(g, splits, theta, partitions=8):
    labeling = graph_labeling(g)
    catalog = build_catalog(g, labeling, PartitionPlan(theta, splits))
    annotated = annotate(g, catalog)
    setdeps = extract_set_dependencies(annotated)
    inputs = EngineInputs.build(
        annotated, setdeps, catalog.item_set, catalog.set_component, partitions
    )
    return inputs, catalog


def raw_store(g, partitions=8):
    rows = [(t.src, t.dst, t.op, t.meta) for t in g.triples]
    return MemoryStore.build(rows, ("src", "dst", "op", "meta"), "dst", partitions)


def test_recursive_query_worked_example(person_graph):
    result, metrics = recursive_query(raw_store(person_graph), 23)
    assert result.triples == LINEAGE_23
    assert metrics.rounds == 3  # third round finds no parents of 3 and 6
    assert metrics.triples_recursed == 15


def test_recursive_query_source_item_is_empty(person_graph):
    result, metrics = recursive_query(raw_store(person_graph), 1)
    assert result.triples == frozenset()
    assert metrics.rounds == 1


def test_recursive_query_unknown_item(person_graph):
    result, metrics = recursive_query(raw_store(person_graph), 9999)
    assert result.triples == frozenset()
    assert metrics.rounds == 1 and metrics.partitions_scanned == 1


def test_recursive_query_survives_cycle_and_flags_it():
    g_rows = [(1, 2, "a", ""), (2, 1, "b", ""), (3, 2, "c", "")]
    store = MemoryStore.build(g_rows, ("src", "dst", "op", "meta"), "dst", 4)
    result, metrics = recursive_query(store, 2)
    assert metrics.cycle_detected
    assert (1, 2, "a") in result.triples


def test_ccprov_worked_example(person_graph, person_workflow):
    _, splits = person_workflow
    inputs, _ = make_inputs(person_graph, splits, theta=25000)
    result, metrics = ccprov_lineage(inputs, 23)
    assert result.triples == LINEAGE_23
    # the component of item 23 holds 4 of the 15 triples
    assert metrics.triples_recursed == 4


def test_ccprov_component_example(component_graph, component_workflow):
    _, splits = component_workflow
    inputs, _ = make_inputs(component_graph, splits, theta=10)
    result, metrics = ccprov_lineage(inputs, 8)
    assert metrics.triples_recursed == 12  # the entire component
    assert result.triples == oracle_lineage(component_graph, 8).triples


def test_csprov_component_example(component_graph, component_workflow):
    _, splits = component_workflow
    inputs, catalog = make_inputs(component_graph, splits, theta=10)
    result, metrics = csprov_lineage(inputs, 8)
    assert metrics.sets_in_lineage == 3
    assert metrics.triples_recursed == 9  # the three set-4 triples are pruned
    assert result.triples == oracle_lineage(component_graph, 8).triples


def test_csprov_small_component_matches_ccprov(person_graph, person_workflow):
    _, splits = person_workflow
    inputs, _ = make_inputs(person_graph, splits, theta=25000)
    cs_result, cs_metrics = csprov_lineage(inputs, 23)
    cc_result, cc_metrics = ccprov_lineage(inputs, 23)
    assert cs_result == cc_result
    assert cs_metrics.sets_in_lineage == 1
    assert cs_metrics.triples_recursed == cc_metrics.triples_recursed


def test_find_connected_set(component_graph, component_workflow):
    _, splits = component_workflow
    inputs, catalog = make_inputs(component_graph, splits, theta=10)
    sid, delta = find_connected_set(inputs, 8)
    assert sid == catalog.item_set[7]  # set {7, 8, 9}
    assert delta.partitions == 1
    sid1, _ = find_connected_set(inputs, 1)
    assert sid1 == catalog.item_set[1]
    with pytest.raises(UnknownItemError):
        find_connected_set(inputs, 4242)


def test_absent_item_yields_empty_everywhere(person_graph, person_workflow):
    _, splits = person_workflow
    inputs, _ = make_inputs(person_graph, splits, theta=25000)
    for fn in (ccprov_lineage, csprov_lineage):
        result, metrics = fn(inputs, 31337)
        assert result.triples == frozenset()


def test_oracle_worked_example(person_graph):
    assert oracle_lineage(person_graph, 23).triples == LINEAGE_23
    assert oracle_lineage(person_graph, 1).triples == frozenset()


def test_oracle_closure_fixed_point(person_graph):
    index = person_graph.parent_index()
    result = oracle_lineage(person_graph, 23)
    for src, dst, op in result.triples:
        for t in index.get(src, ()):
            assert t.key() in result.triples


def random_dag(rng, n_items=400, n_edges=900):
    triples = []
    seen = set()
    for _ in range(n_edges):
        a, b = rng.sample(range(1, n_items + 1), 2)
        if a > b:
            a, b = b, a  # edges go low -> high, guaranteeing acyclicity
        if (a, b) in seen:
            continue
        seen.add((a, b))
        triples.append(ProvTriple(a, b, "op"))
    item_table = {i: "t_even" if i % 2 == 0 else "t_odd" for i in range(1, n_items + 1)}
    return ProvGraph(tuple(triples), item_table)


def test_strategy_equivalence_on_random_graphs():
    rng = random.Random(23)
    g = random_dag(rng)
    from lineagelab.model import DependencyGraph

    splits = (
        SplitNode(
            "all",
            frozenset({"t_even", "t_odd"}),
            (
                SplitNode("even", frozenset({"t_even"})),
                SplitNode("odd", frozenset({"t_odd"})),
            ),
        ),
    )
    inputs, _ = make_inputs(g, splits, theta=40)
    total = len(g.triples)
    for q in rng.sample(sorted(g.items), 60):
        expected = oracle_lineage(g, q)
        r_rq, m_rq = rq_lineage(inputs, q)
        r_cc, m_cc = ccprov_lineage(inputs, q)
        r_cs, m_cs = csprov_lineage(inputs, q)
        assert r_rq == r_cc == r_cs == expected
        assert m_cs.triples_recursed <= m_cc.triples_recursed <= total
        # rounds agree across strategies
        if expected.triples:
            assert m_rq.rounds == m_cc.rounds == m_cs.rounds
        # pruning soundness: the restricted volume covers the answer
        assert m_cs.triples_recursed >= len(expected.triples)


def test_result_order_is_distance_then_src(person_graph):
    result, _ = recursive_query(raw_store(person_graph), 23)
    assert result.order == (
        (15, 23, "R2"), (18, 23, "R2"), (3, 15, "R1"), (6, 18, "R1"),
    )
