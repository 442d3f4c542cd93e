"""Cross-validation harness: run a manifest's cells, compare with the oracle, write CSV and a summary."""
from __future__ import annotations

import csv
import io
import json
import logging
import time
import uuid
from multiprocessing import Pool, TimeoutError as PoolTimeout
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field

from . import db
from .clique_width import evaluate_cw, random_cograph_expression
from .config import settings
from .dispatch import solve
from .errors import BenchDisagreement, BudgetExceeded, CutcraftError, InputError
from .graph import (
    Graph,
    complete_graph,
    connected_graphs,
    cycle_graph,
    emit_graph,
    grid_graph,
    parse_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)
from .models import Algorithm, BenchRecord, Problem

logger = logging.getLogger("cutcraft.bench")

NAMED = {
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "star": star_graph,
}


class InstanceSpec(BaseModel):
    kind: Literal["file", "exhaustive", "random", "named", "grid", "cograph"]
    path: Optional[str] = None
    family: Optional[str] = Field(None, description="path | cycle | complete | star, for kind=named")
    sizes: list[int] = Field(default_factory=list)
    cols: int = Field(3, ge=1, description="Grid width, for kind=grid")
    p: float = Field(0.3, ge=0.0, le=1.0)
    count: int = Field(1, ge=1, description="Graphs per size for random and cograph instances")
    cap: int = Field(5000, ge=1)


class Manifest(BaseModel):
    name: str = "bench"
    instances: list[InstanceSpec]
    problems: list[Problem] = Field(default_factory=lambda: [Problem.CMC, Problem.MMC])
    algorithms: list[Algorithm]
    seeds: list[int] = Field(default_factory=lambda: [0])
    repeats: Optional[int] = None
    timeout_s: float = Field(60.0, gt=0)
    oracle: bool = True


class BenchSummary(BaseModel):
    name: str
    cells: int
    status: dict[str, int]
    compared: int
    agreed: int
    misses: int = Field(0, description="Monte-Carlo results below the oracle optimum")


def load_manifest(text: str) -> Manifest:
    try:
        return Manifest.model_validate_json(text)
    except ValueError as exc:
        raise InputError(f"invalid bench manifest: {exc}") from None


def expand_instances(spec: InstanceSpec, base: Optional[Path] = None) -> list[tuple[str, dict, Graph]]:
    out = []
    if spec.kind == "file":
        if not spec.path:
            raise InputError("file instance needs a path")
        path = Path(spec.path) if base is None else base / spec.path
        out.append((f"file:{path.name}", {"path": spec.path}, parse_graph(path.read_bytes())))
    elif spec.kind == "exhaustive":
        for n in spec.sizes:
            for i, g in enumerate(connected_graphs(n, spec.cap)):
                out.append((f"exhaustive-n{n}-{i:05d}", {"n": n, "index": i}, g))
    elif spec.kind == "random":
        for n in spec.sizes:
            for seed in range(spec.count):
                params = {"n": n, "p": spec.p, "seed": seed}
                out.append((f"random-n{n}-p{spec.p}-s{seed}", params, random_connected_graph(n, spec.p, seed)))
    elif spec.kind == "cograph":
        for n in spec.sizes:
            for seed in range(spec.count):
                _, g = evaluate_cw(random_cograph_expression(n, seed))
                out.append((f"cograph-n{n}-s{seed}", {"n": n, "seed": seed}, g))
    elif spec.kind == "grid":
        for rows in spec.sizes:
            out.append((f"grid-{rows}x{spec.cols}", {"rows": rows, "cols": spec.cols}, grid_graph(rows, spec.cols)))
    else:
        if spec.family not in NAMED:
            raise InputError(f"unknown graph family {spec.family!r}")
        for n in spec.sizes:
            out.append((f"{spec.family}-{n}", {"family": spec.family, "n": n}, NAMED[spec.family](n)))
    return out


def _anchors(problem: Problem, g: Graph) -> Optional[list[int]]:
    return [0, g.n - 1] if problem.anchored else None


def run_cell(cell: dict) -> dict:
    """One isolated solver invocation; runs in a worker process."""
    g = Graph(cell["n"], tuple(tuple(e) for e in cell["edges"]))
    problem, algorithm = Problem(cell["problem"]), Algorithm(cell["algorithm"])
    start = time.perf_counter()
    try:
        report = solve(
            g,
            problem,
            algorithm,
            anchors=cell["anchors"],
            repeats=cell["repeats"],
            seed=cell["seed"],
        )
    except BudgetExceeded as exc:
        return {"status": "budget", "message": str(exc)}
    except CutcraftError as exc:
        return {"status": "error", "message": str(exc)}
    return {
        "status": "ok",
        "optimum": report.optimum,
        "peak_cells": report.peak_cells,
        "elapsed_ms": round((time.perf_counter() - start) * 1000, 3),
    }


def _execute(cells: list[dict], workers: int, timeout_s: float) -> list[dict]:
    """Cells run in rounds of `workers`; a round with a timeout gets a fresh pool for the next one."""
    results: list[dict] = []
    pool = Pool(workers)
    try:
        for first in range(0, len(cells), workers):
            batch = cells[first : first + workers]
            pending = [pool.apply_async(run_cell, (cell,)) for cell in batch]
            deadline = time.monotonic() + timeout_s
            timed_out = False
            for cell, job in zip(batch, pending):
                try:
                    results.append(job.get(timeout=max(0.0, deadline - time.monotonic())))
                except PoolTimeout:
                    logger.warning("cell %s/%s/%s timed out", cell["instance"], cell["problem"], cell["algorithm"])
                    results.append({"status": "timeout"})
                    timed_out = True
            if timed_out:
                pool.terminate()
                pool = Pool(workers)
    finally:
        pool.terminate()
    return results


CSV_COLUMNS = ["instance", "problem", "algorithm", "seed", "status", "optimum", "oracle", "agrees", "peak_cells"]


def write_csv(records: list[BenchRecord], timings: bool = False) -> str:
    columns = CSV_COLUMNS + (["elapsed_ms"] if timings else [])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        row = []
        for column in columns:
            value = getattr(record, column)
            row.append("" if value is None else str(value).lower() if isinstance(value, bool) else value)
        writer.writerow(row)
    return buffer.getvalue()


def summarise(name: str, records: list[BenchRecord]) -> BenchSummary:
    status: dict[str, int] = {}
    for record in records:
        status[record.status] = status.get(record.status, 0) + 1
    compared = [r for r in records if r.agrees is not None]
    misses = [r for r in compared if not r.agrees and r.algorithm == Algorithm.CUTCOUNT.value]
    return BenchSummary(
        name=name,
        cells=len(records),
        status=dict(sorted(status.items())),
        compared=len(compared),
        agreed=sum(1 for r in compared if r.agrees),
        misses=len(misses),
    )


def _write_bundle(out_dir: Path, record: BenchRecord, graph: Graph, cell: dict) -> Path:
    bundle = out_dir / f"repro-{record.instance.replace(':', '_')}-{record.problem}-{record.algorithm}-{record.seed}"
    bundle.mkdir(parents=True, exist_ok=True)
    (bundle / "graph.gr").write_text(emit_graph(graph))
    details = {
        "problem": record.problem,
        "algorithm": record.algorithm,
        "seed": record.seed,
        "repeats": cell["repeats"],
        "anchors": None if cell["anchors"] is None else [v + 1 for v in cell["anchors"]],
        "expected": record.oracle,
        "got": record.optimum,
    }
    (bundle / "cell.json").write_text(json.dumps(details, indent=2) + "\n")
    return bundle


def run_bench(
    manifest: Manifest,
    out_dir: Path,
    *,
    base: Optional[Path] = None,
    workers: Optional[int] = None,
    timings: bool = False,
    store: bool = False,
) -> list[BenchRecord]:
    workers = max(1, settings.WORKERS if workers is None else workers)
    run_id = uuid.uuid4().hex
    graphs: dict[str, tuple[dict, Graph]] = {}
    for spec in manifest.instances:
        for instance, params, g in expand_instances(spec, base):
            graphs[instance] = (params, g)

    cells = []
    for instance, (_, g) in sorted(graphs.items()):
        for problem in manifest.problems:
            algorithms = list(manifest.algorithms)
            if manifest.oracle and g.n <= settings.ORACLE_LIMIT and Algorithm.ORACLE not in algorithms:
                algorithms.append(Algorithm.ORACLE)
            for algorithm in algorithms:
                for seed in manifest.seeds:
                    cells.append(
                        {
                            "instance": instance,
                            "n": g.n,
                            "edges": [list(e) for e in g.edges],
                            "problem": problem.value,
                            "algorithm": algorithm.value,
                            "seed": seed,
                            "repeats": manifest.repeats,
                            "anchors": _anchors(problem, g),
                        }
                    )
    logger.info("bench %s: %d instances, %d cells, %d worker(s)", manifest.name, len(graphs), len(cells), workers)
    results = _execute(cells, workers, manifest.timeout_s)

    oracle_values = {
        (c["instance"], c["problem"], c["seed"]): r.get("optimum")
        for c, r in zip(cells, results)
        if c["algorithm"] == Algorithm.ORACLE.value and r["status"] == "ok"
    }
    records, failures = [], []
    for cell, result in zip(cells, results):
        key = (cell["instance"], cell["problem"], cell["seed"])
        record = BenchRecord(
            run_id=run_id,
            instance=cell["instance"],
            params=json.dumps(graphs[cell["instance"]][0], sort_keys=True),
            problem=cell["problem"],
            algorithm=cell["algorithm"],
            seed=cell["seed"],
            status=result["status"],
            optimum=result.get("optimum"),
            oracle=oracle_values.get(key),
            elapsed_ms=result.get("elapsed_ms"),
            peak_cells=result.get("peak_cells"),
        )
        if record.status == "ok" and key in oracle_values and cell["algorithm"] != Algorithm.ORACLE.value:
            record.agrees = record.optimum == record.oracle
            if not record.agrees:
                below = record.oracle is not None and (record.optimum is None or record.optimum < record.oracle)
                if cell["algorithm"] == Algorithm.CUTCOUNT.value and below:
                    logger.warning("cutcount missed the optimum on %s (%s)", cell["instance"], cell["problem"])
                else:
                    failures.append((record, cell))
        records.append(record)
    records.sort(key=lambda r: (r.instance, r.problem, r.algorithm, r.seed))

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.csv").write_text(write_csv(records, timings))
    summary = summarise(manifest.name, records)
    (out_dir / "summary.json").write_text(json.dumps(summary.model_dump(), indent=2) + "\n")
    if store:
        db.store_records(records)

    if failures:
        record, cell = failures[0]
        bundle = _write_bundle(out_dir, record, graphs[record.instance][1], cell)
        raise BenchDisagreement(
            f"{record.algorithm} gave {record.optimum} but the oracle gave {record.oracle} "
            f"on {record.instance} ({record.problem})",
            str(bundle),
        )
    logger.info("bench %s done: %d/%d compared cells agree", manifest.name, summary.agreed, summary.compared)
    return records
