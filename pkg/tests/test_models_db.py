import json

from cutcraft import db
from cutcraft.models import Algorithm, BenchRecord, DecisionReport, Problem, SolveReport


def _report(**overrides):
    data = dict(problem=Problem.CMC_ST, algorithm=Algorithm.TWDP, n=3, m=2, optimum=1,
                witness=[0], anchors=[0, 2], elapsed_ms=0.5)
    return SolveReport(**{**data, **overrides})


def test_documents_are_one_based():
    doc = json.loads(_report().to_document())
    assert doc["witness"] == [1]
    assert doc["anchors"] == [1, 3]
    assert doc["problem"] == "cmc-st"
    assert SolveReport.from_document(_report().to_document()) == _report()


def test_timings_can_be_dropped():
    assert "elapsed_ms" not in json.loads(_report().to_document(timings=False))


def test_no_cut_report():
    doc = json.loads(_report(problem=Problem.MMC, optimum=None, witness=None, anchors=None).to_document())
    assert doc["optimum"] is None and doc["witness"] is None


def test_problem_flags():
    assert Problem.MMC_ST.anchored and Problem.MMC_ST.minimal
    assert not Problem.CMC.anchored and not Problem.CMC.minimal


def test_decision_document():
    doc = json.loads(DecisionReport(problem=Problem.MMC, k=5, answer=False, route="rank (width 3)").to_document())
    assert doc["answer"] == "no"
    assert doc["witness"] is None


def test_store_and_load(tmp_path):
    engine = db.make_engine(f"sqlite:///{tmp_path / 'bench.db'}")
    records = [
        BenchRecord(run_id="run-a", instance="path-3", params="{}", problem="cmc", algorithm="rank", optimum=2),
        BenchRecord(run_id="run-a", instance="path-4", params="{}", problem="cmc", algorithm="rank", optimum=2),
        BenchRecord(run_id="run-b", instance="path-3", params="{}", problem="mmc", algorithm="twdp", optimum=1),
    ]
    assert db.store_records(records, engine) == 3
    loaded = db.load_records("run-a", engine)
    assert [r.instance for r in loaded] == ["path-3", "path-4"]
    assert loaded[0].status == "ok"
