import argparse
import logging
from pathlib import Path

from .clique_width import load_cw
from .dispatch import solve
from .errors import InputError
from .graph import Graph, parse_graph, verify_report
from .models import Algorithm, DecisionReport, Problem, SolveReport
from .solution_size import solve_k
from .treedec import parse_td

logger = logging.getLogger("cutcraft.solve")


def read_graph(path: str) -> Graph:
    return parse_graph(Path(path).read_bytes())


def vertex_pair(text: str) -> tuple[int, int]:
    """'u,v' with 1-based ids, returned 0-based."""
    try:
        u, v = (int(part) - 1 for part in text.split(","))
    except ValueError:
        raise InputError(f"expected two vertex ids 'u,v', got {text!r}") from None
    return u, v


def write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        print(text, end="")


def register(subparsers) -> None:
    p = subparsers.add_parser("solve", help="solve CMC/MMC (optionally the decision version with --k)")
    p.add_argument("--problem", required=True, choices=[x.value for x in Problem])
    p.add_argument("--graph", required=True, help=".gr file")
    p.add_argument("--td", help=".td tree decomposition to use")
    p.add_argument("--cwd", help=".cwd clique-width expression to use")
    p.add_argument("--st", help="anchors s,t (1-based) for the -st problems")
    p.add_argument("--algo", default=Algorithm.AUTO.value, choices=[x.value for x in Algorithm])
    p.add_argument("--k", type=int, help="decide whether a cut of size at least k exists")
    p.add_argument("--repeats", type=int, help="Monte-Carlo repetitions for cutcount")
    p.add_argument("--seed", type=int, help="seed for cutcount weights")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--no-timings", action="store_true", help="omit elapsed_ms for byte-stable reports")
    p.set_defaults(func=run_solve)

    v = subparsers.add_parser("verify", help="check a solve report against its graph")
    v.add_argument("--graph", required=True)
    v.add_argument("--report", required=True)
    v.set_defaults(func=run_verify)


def run_solve(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    problem, algorithm = Problem(args.problem), Algorithm(args.algo)
    anchors = vertex_pair(args.st) if args.st else None
    td = parse_td(Path(args.td).read_bytes(), n=g.n) if args.td else None
    expr = load_cw(Path(args.cwd).read_text(), g) if args.cwd else None

    if args.k is not None:
        if algorithm in (Algorithm.AUTO, Algorithm.WINWIN, Algorithm.RANK, Algorithm.CUTCOUNT):
            if expr is not None:
                raise InputError(f"--cwd needs --algo cliquewidth when deciding with --k (got {algorithm.value})")
            route = Algorithm.CUTCOUNT if algorithm is Algorithm.CUTCOUNT else Algorithm.RANK
            decision = solve_k(
                g, args.k, problem, seed=args.seed, anchors=anchors, algorithm=route, repeats=args.repeats, td=td
            )
        else:
            report = solve(g, problem, algorithm, anchors=anchors, td=td, cw_expr=expr, repeats=args.repeats, seed=args.seed)
            answer = report.optimum is not None and report.optimum >= args.k
            decision = DecisionReport(
                problem=problem,
                k=args.k,
                answer=answer,
                route=report.algorithm.value,
                witness=report.witness if answer else None,
                seed=report.seed,
            )
        write_output(decision.to_document(), args.out)
        return 0 if decision.answer else 1

    report = solve(g, problem, algorithm, anchors=anchors, td=td, cw_expr=expr, repeats=args.repeats, seed=args.seed)
    write_output(report.to_document(timings=not args.no_timings), args.out)
    if report.optimum is None:
        logger.info("no feasible cut exists")
        return 1
    return 0


def run_verify(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    try:
        report = SolveReport.from_document(Path(args.report).read_text())
    except ValueError as exc:
        raise InputError(f"unreadable report: {exc}") from None
    if verify_report(g, report):
        print("ok")
        return 0
    print("invalid")
    return 1
