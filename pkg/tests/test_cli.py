import json
import shutil
from pathlib import Path

import pytest
from click.testing import CliRunner

from lineagelab.cli import main

DATA = Path(__file__).parent / "data" / "component"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def component_dir(tmp_path):
    for name in ("triples.csv", "items.csv", "workflow.json"):
        shutil.copy(DATA / name, tmp_path / name)
    return tmp_path


def test_validate_ok(runner, component_dir):
    res = runner.invoke(main, ["validate", "--data-dir", str(component_dir)])
    assert res.exit_code == 0, res.output
    assert "ok" in res.output


def test_validate_failure_exit_2(runner, tmp_path):
    (tmp_path / "triples.csv").write_text("src,dst,op,meta\n5,5,R1,\n")
    (tmp_path / "items.csv").write_text("item,table\n5,t\n")
    res = runner.invoke(main, ["validate", "--data-dir", str(tmp_path)])
    assert res.exit_code == 2


def test_missing_dataset_exit_3(runner, tmp_path):
    res = runner.invoke(main, ["validate", "--data-dir", str(tmp_path)])
    assert res.exit_code == 3


def test_preprocess_matches_goldens(runner, component_dir):
    res = runner.invoke(
        main, ["preprocess", "--data-dir", str(component_dir), "--theta", "10"]
    )
    assert res.exit_code == 0, res.output
    got = (component_dir / "annotated.csv").read_bytes()
    assert got == (DATA / "annotated.golden.csv").read_bytes()
    got = (component_dir / "setdeps.csv").read_bytes()
    assert got == (DATA / "setdeps.golden.csv").read_bytes()
    stats = json.loads((component_dir / "catalog-stats.json").read_text())
    assert stats["set_count"] == 4
    assert (component_dir / "catalog-stats.png").exists()


def test_preprocess_empty_dataset_succeeds(runner, tmp_path):
    (tmp_path / "triples.csv").write_text("src,dst,op,meta\n")
    (tmp_path / "items.csv").write_text("item,table\n")
    shutil.copy(DATA / "workflow.json", tmp_path / "workflow.json")
    res = runner.invoke(main, ["preprocess", "--data-dir", str(tmp_path), "--no-figures"])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "annotated.csv").read_text() == "src,dst,op,src_csid,dst_csid\n"
    assert (tmp_path / "setdeps.csv").read_text() == "src_csid,dst_csid\n"


def test_query_all_strategies(runner, component_dir):
    runner.invoke(main, ["preprocess", "--data-dir", str(component_dir), "--theta", "10", "--no-figures"])
    res = runner.invoke(
        main,
        ["query", "--data-dir", str(component_dir), "8", "--strategy", "all",
         "--partitions", "8"],
    )
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["root"] == 8
    dsts = {t["dst"] for t in doc["triples"]}
    assert dsts == {8, 7, 5, 4, 2, 3}
    assert doc["metrics"]["csprov"]["triples_recursed"] == 9
    assert doc["metrics"]["ccprov"]["triples_recursed"] == 12
    assert doc["metrics"]["csprov"]["sets_in_lineage"] == 3


def test_query_source_item_empty(runner, component_dir):
    runner.invoke(main, ["preprocess", "--data-dir", str(component_dir), "--theta", "10", "--no-figures"])
    res = runner.invoke(
        main, ["query", "--data-dir", str(component_dir), "1", "--partitions", "8"]
    )
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["triples"] == []
    assert "empty lineage" in res.stderr


def test_query_rq_needs_only_raw_triples(runner, component_dir):
    res = runner.invoke(
        main,
        ["query", "--data-dir", str(component_dir), "8", "--strategy", "rq",
         "--partitions", "8"],
    )
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert len(doc["triples"]) == 7


def test_query_missing_artifacts_exit_3(runner, component_dir):
    res = runner.invoke(
        main, ["query", "--data-dir", str(component_dir), "8", "--strategy", "csprov"]
    )
    assert res.exit_code == 3


def test_query_disk_tier(runner, component_dir):
    runner.invoke(main, ["preprocess", "--data-dir", str(component_dir), "--theta", "10", "--no-figures"])
    mem = runner.invoke(
        main, ["query", "--data-dir", str(component_dir), "8", "--strategy", "csprov",
               "--partitions", "8", "--tier", "memory"],
    )
    disk = runner.invoke(
        main, ["query", "--data-dir", str(component_dir), "8", "--strategy", "csprov",
               "--partitions", "8", "--tier", "disk"],
    )
    assert disk.exit_code == 0, disk.output
    assert json.loads(mem.output) == json.loads(disk.output)


def test_generate_and_bench_end_to_end(runner, tmp_path):
    data = tmp_path / "data"
    res = runner.invoke(
        main, ["generate", "--data-dir", str(data), "--scale", "0.05", "--seed", "7"]
    )
    assert res.exit_code == 0, res.output
    assert (data / "triples.csv").exists()
    res = runner.invoke(
        main, ["preprocess", "--data-dir", str(data), "--theta", "500", "--no-figures"]
    )
    assert res.exit_code == 0, res.output
    res = runner.invoke(
        main,
        ["bench", "--data-dir", str(data), "--theta", "500", "--per-class", "2",
         "--partitions", "16", "--jobs", "2"],
    )
    assert res.exit_code == 0, res.output
    assert (data / "bench" / "bench.csv").exists()
    assert (data / "bench" / "bench.json").exists()
    assert (data / "bench" / "bench_triples_recursed.png").exists()


def test_env_var_data_dir(runner, component_dir, monkeypatch):
    monkeypatch.setenv("LINEAGELAB_DATA_DIR", str(component_dir))
    res = runner.invoke(main, ["validate"])
    assert res.exit_code == 0, res.output
