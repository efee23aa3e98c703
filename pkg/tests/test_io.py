from pathlib import Path

import pytest

from lineagelab import io as llio
from lineagelab.model import ConfigError, ProvTriple, SetDependency

DATA = Path(__file__).parent / "data" / "component"


def test_triples_round_trip(tmp_path, person_graph):
    path = tmp_path / "t.csv"
    llio.write_triples(path, person_graph.triples)
    assert llio.read_triples(path) == list(person_graph.triples)


def test_triples_meta_preserved(tmp_path):
    path = tmp_path / "t.csv"
    triples = [ProvTriple(1, 2, "op", "ts=2020, param=3")]
    llio.write_triples(path, triples)
    assert llio.read_triples(path) == triples


def test_item_table_round_trip(tmp_path, person_graph):
    path = tmp_path / "i.csv"
    llio.write_item_table(path, person_graph.item_table)
    assert llio.read_item_table(path) == dict(person_graph.item_table)


def test_bad_header_rejected(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b,c\n1,2,x\n")
    with pytest.raises(ConfigError):
        llio.read_triples(path)


def test_annotated_round_trip(tmp_path):
    annotated = llio.read_annotated(DATA / "annotated.golden.csv")
    assert len(annotated) == 12
    out = tmp_path / "a.csv"
    llio.write_annotated(out, annotated)
    assert out.read_bytes() == (DATA / "annotated.golden.csv").read_bytes()


def test_setdeps_round_trip(tmp_path):
    deps = llio.read_set_dependencies(DATA / "setdeps.golden.csv")
    assert deps == [SetDependency(1, 2), SetDependency(2, 3), SetDependency(2, 4)]
    out = tmp_path / "d.csv"
    llio.write_set_dependencies(out, deps)
    assert out.read_bytes() == (DATA / "setdeps.golden.csv").read_bytes()


def test_workflow_config_round_trip(tmp_path, component_workflow):
    depgraph, splits = component_workflow
    path = tmp_path / "w.json"
    llio.write_workflow_config(path, depgraph, splits)
    dg, sp = llio.read_workflow_config(path)
    assert dg == depgraph
    assert sp == splits


def test_item_sets_round_trip(tmp_path):
    path = tmp_path / "s.csv"
    llio.write_item_sets(path, {1: 10, 2: 10, 3: 11}, {10: 1, 11: 3})
    item_set, set_component = llio.read_item_sets(path)
    assert item_set == {1: 10, 2: 10, 3: 11}
    assert set_component == {10: 1, 11: 3}


def test_labeling_round_trip(tmp_path):
    path = tmp_path / "l.csv"
    llio.write_labeling(path, {5: 1, 6: 1, 9: 9})
    assert llio.read_labeling(path) == {5: 1, 6: 1, 9: 9}


def test_files_are_lf_terminated(tmp_path, person_graph):
    path = tmp_path / "t.csv"
    llio.write_triples(path, person_graph.triples)
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
