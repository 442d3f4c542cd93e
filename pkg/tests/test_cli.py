import json

import pytest

from cutcraft import commands_solve
from cutcraft.clique_width import emit_cw, linear_expression
from cutcraft.graph import Graph, complete_graph, cycle_graph, emit_graph, path_graph
from cutcraft.main import EX_SOFTWARE, main


@pytest.fixture
def k4_file(gr_file):
    return str(gr_file(complete_graph(4), "k4.gr"))


def test_solve_writes_a_one_based_report(k4_file, tmp_path):
    out = tmp_path / "report.json"
    assert main(["solve", "--problem", "cmc", "--graph", k4_file, "--algo", "oracle", "--no-timings", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["optimum"] == 4
    assert min(report["witness"]) >= 1
    assert "elapsed_ms" not in report


def test_solve_to_stdout(k4_file, capsys):
    assert main(["solve", "--problem", "mmc", "--graph", k4_file, "--algo", "rank"]) == 0
    assert json.loads(capsys.readouterr().out)["optimum"] == 4


def test_no_cut_exits_one(gr_file):
    assert main(["solve", "--problem", "mmc", "--graph", str(gr_file(Graph(1, ())))]) == 1


def test_decision_exit_codes(k4_file, capsys):
    assert main(["solve", "--problem", "cmc", "--graph", k4_file, "--k", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["answer"] == "yes"
    assert main(["solve", "--problem", "mmc", "--graph", k4_file, "--k", "5"]) == 1
    assert main(["solve", "--problem", "cmc", "--graph", k4_file, "--k", "5", "--algo", "twdp"]) == 1


def test_anchored_solve(gr_file, capsys):
    path = str(gr_file(path_graph(3)))
    assert main(["solve", "--problem", "cmc-st", "--graph", path, "--st", "1,3", "--algo", "twdp"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["anchors"] == [1, 3] and report["optimum"] == 1
    assert main(["solve", "--problem", "cmc-st", "--graph", path, "--st", "1"]) == 2


def test_solve_with_supplied_decompositions(tmp_path, gr_file, capsys):
    path = str(gr_file(path_graph(3)))
    td = tmp_path / "p3.td"
    td.write_text("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
    assert main(["solve", "--problem", "mmc", "--graph", path, "--td", str(td), "--algo", "twdp"]) == 0
    bad = tmp_path / "bad.td"
    bad.write_text("s td 1 2 3\nb 1 1 2\n")
    assert main(["solve", "--problem", "mmc", "--graph", path, "--td", str(bad), "--algo", "twdp"]) == 2


def test_input_errors_exit_two(tmp_path):
    broken = tmp_path / "broken.gr"
    broken.write_text("p tw 2 1\n1 1\n")
    assert main(["solve", "--problem", "cmc", "--graph", str(broken)]) == 2
    assert main(["solve", "--problem", "cmc", "--graph", str(tmp_path / "missing.gr")]) == 2
    disconnected = tmp_path / "two.gr"
    disconnected.write_text("p tw 3 1\n1 2\n")
    assert main(["solve", "--problem", "cmc", "--graph", str(disconnected)]) == 2


def test_budget_exits_three(gr_file):
    assert main(["solve", "--problem", "cmc", "--graph", str(gr_file(path_graph(30))), "--algo", "oracle"]) == 3


def test_unhandled_error_exits_software(k4_file, monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(commands_solve, "solve", boom)
    assert main(["solve", "--problem", "cmc", "--graph", k4_file]) == EX_SOFTWARE


def test_verify(k4_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["solve", "--problem", "cmc", "--graph", k4_file, "--out", str(out)])
    assert main(["verify", "--graph", k4_file, "--report", str(out)]) == 0
    assert capsys.readouterr().out == "ok\n"
    report = json.loads(out.read_text())
    report["optimum"] = 5
    out.write_text(json.dumps(report))
    assert main(["verify", "--graph", k4_file, "--report", str(out)]) == 1
    out.write_text("{}")
    assert main(["verify", "--graph", k4_file, "--report", str(out)]) == 2


def test_gen_commands(tmp_path, gr_file, capsys):
    formula = tmp_path / "f.mono"
    formula.write_text("p mono 3 2\n+ 1 2 3\n- 1 2 3\n")
    prefix = str(tmp_path / "sat")
    assert main(["gen", "pm3sat", "--formula", str(formula), "--K", "9", "--out", prefix]) == 0
    assert (tmp_path / "sat.gr").read_text().startswith("p tw 304 ")
    assert json.loads((tmp_path / "sat.json").read_text())["threshold"] == 298
    assert main(["gen", "pm3sat", "--formula", str(formula), "--K", "4", "--out", prefix]) == 2

    family = tmp_path / "f.x3c"
    family.write_text("p x3c 3 1\n1 2 3\n")
    assert main(["gen", "x3c", "--family", str(family), "--out", str(tmp_path / "x3c")]) == 0
    assert json.loads((tmp_path / "x3c.json").read_text())["threshold"] == 116

    source = str(gr_file(path_graph(3)))
    assert main(["gen", "subdivision", "--graph", source, "--out", str(tmp_path / "sub")]) == 0
    assert (tmp_path / "sub.gr").read_text() == emit_graph(Graph(5, ((0, 3), (1, 3), (1, 4), (2, 4))))
    assert main(["gen", "maxcut-split", "--graph", source, "--ell", "2", "--k", "2", "--out", str(tmp_path / "ms")]) == 0
    assert json.loads((tmp_path / "ms.json").read_text())["threshold"] == 4

    assert main(["gen", "random", "--n", "6", "--seed", "3"]) == 0
    assert capsys.readouterr().out.startswith("p tw 6 ")


def test_cograph_round_trip(tmp_path, capsys):
    prefix = str(tmp_path / "cog")
    assert main(["gen", "cograph", "--n", "7", "--seed", "1", "--out", prefix]) == 0
    args = ["solve", "--problem", "mmc", "--graph", prefix + ".gr", "--no-timings"]
    assert main(args + ["--cwd", prefix + ".cwd", "--algo", "cliquewidth"]) == 0
    via_cw = json.loads(capsys.readouterr().out)["optimum"]
    assert main(args + ["--algo", "oracle"]) == 0
    assert json.loads(capsys.readouterr().out)["optimum"] == via_cw


def test_decompose(k4_file, capsys):
    assert main(["decompose", "--graph", k4_file]) == 0
    assert capsys.readouterr().out.startswith("s td ")
    assert main(["decompose", "--graph", k4_file, "--nice", "--anchors", "1,4"]) == 0
    assert "introduce-edge" in capsys.readouterr().out


def test_bench_command(tmp_path):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({"instances": [{"kind": "named", "family": "cycle", "sizes": [4]}], "algorithms": ["rank"]}))
    out = tmp_path / "out"
    assert main(["bench", "--manifest", str(manifest), "--out", str(out), "--workers", "1"]) == 0
    assert (out / "results.csv").exists()
    manifest.write_text("{}")
    assert main(["bench", "--manifest", str(manifest), "--out", str(out)]) == 2


def test_decision_keeps_a_supplied_decomposition(tmp_path, gr_file, capsys):
    path = str(gr_file(cycle_graph(4)))
    td = tmp_path / "c4.td"
    td.write_text("s td 1 4 4\nb 1 1 2 3 4\n")
    assert main(["solve", "--problem", "mmc", "--graph", path, "--k", "2", "--td", str(td)]) == 0
    assert json.loads(capsys.readouterr().out)["route"] == "rank (width 3)"
    bad = tmp_path / "bad.td"
    bad.write_text("s td 1 2 4\nb 1 1 2\n")
    assert main(["solve", "--problem", "mmc", "--graph", path, "--k", "2", "--td", str(bad)]) == 2


def test_decision_rejects_an_unused_expression(tmp_path, gr_file):
    path = str(gr_file(cycle_graph(4)))
    cwd = tmp_path / "c4.cwd"
    cwd.write_text(emit_cw(linear_expression(cycle_graph(4))))
    assert main(["solve", "--problem", "mmc", "--graph", path, "--k", "2", "--cwd", str(cwd), "--algo", "cliquewidth"]) == 0
    assert main(["solve", "--problem", "mmc", "--graph", path, "--k", "2", "--cwd", str(cwd)]) == 2
