import csv
import json

import pytest

from cutcraft import bench
from cutcraft.bench import (
    InstanceSpec,
    Manifest,
    expand_instances,
    load_manifest,
    run_bench,
    run_cell,
    summarise,
    write_csv,
)
from cutcraft.errors import BenchDisagreement, InputError
from cutcraft.graph import emit_graph, path_graph
from cutcraft.models import Algorithm, BenchRecord, Problem

MANIFEST = {
    "name": "smoke",
    "instances": [{"kind": "named", "family": "path", "sizes": [3, 4]}],
    "algorithms": ["twdp", "rank"],
}


def test_load_manifest_defaults():
    manifest = load_manifest(json.dumps(MANIFEST))
    assert manifest.problems == [Problem.CMC, Problem.MMC]
    assert manifest.seeds == [0]
    assert manifest.oracle
    with pytest.raises(InputError):
        load_manifest('{"instances": []}')
    with pytest.raises(InputError):
        load_manifest("not json")


def test_expand_instances(tmp_path):
    (tmp_path / "p5.gr").write_text(emit_graph(path_graph(5)))
    assert [name for name, _, _ in expand_instances(InstanceSpec(kind="file", path="p5.gr"), tmp_path)] == ["file:p5.gr"]
    assert len(expand_instances(InstanceSpec(kind="exhaustive", sizes=[4]))) == 38
    assert len(expand_instances(InstanceSpec(kind="exhaustive", sizes=[5], cap=10))) == 10
    random = expand_instances(InstanceSpec(kind="random", sizes=[6, 7], count=2))
    assert [name for name, _, _ in random][0] == "random-n6-p0.3-s0"
    assert len(random) == 4
    assert expand_instances(InstanceSpec(kind="grid", sizes=[2], cols=3))[0][2].m == 7
    assert expand_instances(InstanceSpec(kind="cograph", sizes=[6]))[0][2].n == 6
    with pytest.raises(InputError):
        expand_instances(InstanceSpec(kind="named", family="wheel", sizes=[5]))
    with pytest.raises(InputError):
        expand_instances(InstanceSpec(kind="file"))


def test_run_cell_in_process():
    g = path_graph(3)
    cell = {"n": g.n, "edges": [list(e) for e in g.edges], "problem": "mmc", "algorithm": "rank",
            "seed": 0, "repeats": None, "anchors": None}
    assert run_cell(cell)["optimum"] == 1
    assert run_cell({**cell, "algorithm": "winwin"})["status"] == "error"


def test_run_bench_agrees(tmp_path):
    manifest = Manifest.model_validate(MANIFEST)
    records = run_bench(manifest, tmp_path, workers=1)
    assert len(records) == 12
    assert all(r.status == "ok" for r in records)
    assert all(r.agrees for r in records if r.algorithm != "oracle")
    rows = list(csv.DictReader((tmp_path / "results.csv").open()))
    assert list(rows[0]) == bench.CSV_COLUMNS
    assert rows[0]["instance"] == "path-3"
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["compared"] == 8 and summary["agreed"] == 8
    assert summary["status"] == {"ok": 12}


def _inline(results_for):
    def execute(cells, workers, timeout_s):
        return [results_for(cell) for cell in cells]

    return execute


def test_disagreement_writes_a_bundle(tmp_path, monkeypatch):
    def fake(cell):
        result = run_cell(cell)
        if cell["algorithm"] == "twdp" and cell["problem"] == "cmc":
            result["optimum"] += 1
        return result

    monkeypatch.setattr(bench, "_execute", _inline(fake))
    manifest = Manifest.model_validate({**MANIFEST, "instances": [{"kind": "named", "family": "path", "sizes": [3]}]})
    with pytest.raises(BenchDisagreement) as info:
        run_bench(manifest, tmp_path, workers=1)
    assert info.value.exit_code == 4
    bundle = tmp_path / "repro-path-3-cmc-twdp-0"
    assert (bundle / "graph.gr").read_text() == emit_graph(path_graph(3))
    assert json.loads((bundle / "cell.json").read_text())["expected"] == 2


def test_cutcount_miss_is_counted_not_fatal(tmp_path, monkeypatch):
    def fake(cell):
        result = run_cell({**cell, "algorithm": "rank"} if cell["algorithm"] == "cutcount" else cell)
        if cell["algorithm"] == "cutcount":
            result["optimum"] -= 1
        return result

    monkeypatch.setattr(bench, "_execute", _inline(fake))
    manifest = Manifest.model_validate(
        {**MANIFEST, "algorithms": ["cutcount"], "instances": [{"kind": "named", "family": "cycle", "sizes": [4]}]}
    )
    records = run_bench(manifest, tmp_path, workers=1)
    assert summarise("x", records).misses == 2


def test_timeouts_are_recorded(tmp_path, monkeypatch):
    monkeypatch.setattr(bench, "_execute", _inline(lambda cell: {"status": "timeout"}))
    records = run_bench(Manifest.model_validate(MANIFEST), tmp_path, workers=1)
    assert {r.status for r in records} == {"timeout"}
    assert all(r.agrees is None for r in records)


def test_output_is_byte_identical_across_runs(tmp_path):
    manifest = Manifest.model_validate(
        {
            **MANIFEST,
            "instances": [{"kind": "random", "sizes": [6, 7], "count": 2}],
            "algorithms": ["twdp", "cutcount"],
            "problems": ["cmc", "mmc", "mmc-st"],
            "seeds": [0, 3],
            "repeats": 4,
        }
    )
    first, second = tmp_path / "first", tmp_path / "second"
    run_bench(manifest, first, workers=2)
    run_bench(manifest, second, workers=2)
    for name in ("results.csv", "summary.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_csv_formatting():
    record = BenchRecord(run_id="r", instance="i", params="{}", problem="cmc", algorithm="rank",
                         seed=0, optimum=3, oracle=3, agrees=True, elapsed_ms=1.5)
    text = write_csv([record], timings=True)
    assert text.splitlines()[1] == "i,cmc,rank,0,ok,3,3,true,,1.5"
    assert "elapsed_ms" not in write_csv([record])


@pytest.mark.slow
def test_exhaustive_and_random_against_every_exact_solver(tmp_path):
    manifest = Manifest(
        name="acceptance",
        instances=[
            InstanceSpec(kind="exhaustive", sizes=[2, 3, 4, 5]),
            InstanceSpec(kind="exhaustive", sizes=[6, 7, 8], cap=300),
            InstanceSpec(kind="random", sizes=[8, 9, 10, 11, 12], p=0.25, count=40),
        ],
        algorithms=[Algorithm.TWDP, Algorithm.RANK, Algorithm.TWINCOVER, Algorithm.CLIQUEWIDTH],
    )
    records = run_bench(manifest, tmp_path, workers=4)
    assert not any(r.status == "error" for r in records)
    assert all(r.agrees for r in records if r.status == "ok" and r.algorithm != "oracle")
    assert summarise("acceptance", records).compared > 0
